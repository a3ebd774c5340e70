#include "lpns/bands.hpp"

#include <cmath>
#include <stdexcept>

#include "lpns/kernels.hpp"

namespace lpns {
namespace {

// h(t) = exp(-1/t) for t > 0, else 0; s(t) = h(t) / (h(t) + h(1-t)) is the
// standard smooth step: 0 at t <= 0, 1 at t >= 1, C-infinity throughout.
double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = bump(t);
    const double b = bump(1.0 - t);
    return a / (a + b);
}

SpectralVectorField apply_radial_multiplier(const SpectralVectorField& F, const CutoffProfile& c,
                                            double inv_scale, bool band_profile) {
    SpectralVectorField out(F.grid());
    const auto xi2 = F.grid().xi_squared();
    for (int m = 0; m < F.grid().dim(); ++m) {
        auto src = F.component(m);
        auto dst = out.component(m);
        kernels::for_each_index(src.size(), [&](std::size_t k) {
            const double r = std::sqrt(xi2[k]) * inv_scale;
            const double w = band_profile ? c.band(r) : c.low_pass(r);
            dst[k] = w == 0.0 ? 0.0 : w * src[k];
        });
    }
    return out;
}

}  // namespace

double CutoffProfile::low_pass(double r) const {
    if (r <= 1.0) return 1.0;
    if (r >= 7.0 / 6.0) return 0.0;
    return smooth_step((7.0 / 6.0 - r) * 6.0);
}

double CutoffProfile::band(double r) const {
    // Exactly zero outside [1/2, 7/6]: below, both low-pass factors sit on
    // their plateau of 1; above, both are 0.
    if (r <= 0.5 || r >= 7.0 / 6.0) return 0.0;
    return low_pass(r) - low_pass(2.0 * r);
}

CutoffProfile make_cutoff() { return CutoffProfile{}; }

BandIndexRange band_range(const Grid& g, const CutoffProfile&, double dealias_cutoff) {
    if (!(dealias_cutoff > 0.0)) throw std::invalid_argument("band_range: cutoff must be positive");
    const double edge = 7.0 / 6.0;

    // Largest j whose full band support (7/6) 2^j stays at or below the
    // retained ball.
    int j_max = static_cast<int>(std::floor(std::log2(dealias_cutoff / edge)));
    while (edge * std::ldexp(1.0, j_max + 1) <= dealias_cutoff) ++j_max;
    while (edge * std::ldexp(1.0, j_max) > dealias_cutoff) --j_max;

    // Smallest j whose annulus (2^{j-1}, (7/6) 2^j) reaches the smallest
    // nonzero modulus; the lower edge is then automatic since
    // (7/6) 2^{j-1} <= xi_min implies 2^{j-1} < xi_min.
    const double xi_min = g.wavenumber_step();
    int j_min = static_cast<int>(std::floor(std::log2(xi_min)));
    while (edge * std::ldexp(1.0, j_min) <= xi_min) ++j_min;
    while (edge * std::ldexp(1.0, j_min - 1) > xi_min) --j_min;

    if (j_min > j_max)
        throw std::invalid_argument("band_range: grid resolves no complete dyadic band");
    return BandIndexRange{j_min, j_max};
}

SpectralVectorField project_band(const SpectralVectorField& F, const CutoffProfile& c, int j,
                                 const BandIndexRange& range) {
    if (!range.contains(j)) throw std::out_of_range("project_band: index outside band range");
    return detail::apply_band(F, c, j);
}

SpectralVectorField project_low(const SpectralVectorField& F, const CutoffProfile& c, int j,
                                const BandIndexRange& range) {
    if (j > range.j_max) throw std::out_of_range("project_low: index above band range");
    return detail::apply_low(F, c, j);
}

std::vector<double> band_sup_norms(const SpectralVectorField& F, const CutoffProfile& c,
                                   const BandIndexRange& range) {
    if (range.count() <= 0) throw std::invalid_argument("band_sup_norms: empty band range");
    std::vector<double> sups(static_cast<std::size_t>(range.count()));
    for (int j = range.j_min; j <= range.j_max; ++j)
        sups[static_cast<std::size_t>(j - range.j_min)] = sup_norm(detail::apply_band(F, c, j));
    return sups;
}

double besov_norm(const SpectralVectorField& F, const CutoffProfile& c, double s,
                  const BandIndexRange& range) {
    const auto sups = band_sup_norms(F, c, range);
    double best = 0.0;
    for (int j = range.j_min; j <= range.j_max; ++j) {
        const double v = std::pow(2.0, s * j) * sups[static_cast<std::size_t>(j - range.j_min)];
        if (v > best) best = v;
    }
    return best;
}

namespace detail {

SpectralVectorField apply_band(const SpectralVectorField& F, const CutoffProfile& c, int j) {
    return apply_radial_multiplier(F, c, std::ldexp(1.0, -j), true);
}

SpectralVectorField apply_low(const SpectralVectorField& F, const CutoffProfile& c, int j) {
    return apply_radial_multiplier(F, c, std::ldexp(1.0, -j), false);
}

}  // namespace detail

}  // namespace lpns
