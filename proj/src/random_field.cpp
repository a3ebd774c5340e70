#include "lpns/random_field.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "lpns/kernels.hpp"

namespace lpns {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void validate_spec(const RandomFieldSpec& spec, const BandIndexRange& range) {
    if (spec.band_targets.empty())
        throw std::invalid_argument("random field: empty band spec");
    for (const auto& [j, target] : spec.band_targets) {
        if (!range.contains(j))
            throw std::invalid_argument("random field: band outside resolvable range");
        if (!(target > 0.0))
            throw std::invalid_argument("random field: band target must be positive");
    }
}

}  // namespace

std::uint64_t CounterRng::at(std::uint64_t counter) const {
    return mix(seed_ + (counter + 1) * kGolden);
}

double CounterRng::uniform01(std::uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::gaussian_pair(std::uint64_t counter) const {
    const double u1 = uniform01(counter);
    const double u2 = uniform01(counter + 1);
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

SpectralVectorField random_divfree_field(const Grid& g, const RandomFieldSpec& spec,
                                         const CutoffProfile& c, const BandIndexRange& range,
                                         double dealias_cutoff) {
    validate_spec(spec, range);
    const CounterRng rng(spec.seed);
    const int d = g.dim();
    const int n = g.points_per_axis();
    const auto xi2 = g.xi_squared();

    // Modes are drawn only on each band's plateau sub-annulus
    // [7/12 * 2^j, 2^j], where the band multiplier is exactly one and both
    // neighbor multipliers vanish. The plateaus are pairwise disjoint, so each
    // drawn mode feeds exactly one band and the per-band normalizations below
    // decouple. Compared in squared radius to avoid a square root.
    const auto plateau_weight = [&](double r2) {
        for (const auto& [j, target] : spec.band_targets) {
            const double lo2 = std::ldexp(49.0 / 144.0, 2 * j);
            const double hi2 = std::ldexp(1.0, 2 * j);
            if (r2 >= lo2 && r2 <= hi2) return target;
        }
        return 0.0;
    };

    // Raw linear index of the mirrored mode -k.
    const auto mirror_of = [&](std::size_t mode) {
        std::size_t mirrored = 0;
        for (int axis = 0; axis < d; ++axis) {
            const int raw = g.axis_raw_index(mode, axis);
            const int neg = raw == 0 ? 0 : n - raw;
            mirrored = (mirrored << g.shift()) | static_cast<std::size_t>(neg);
        }
        return mirrored;
    };

    // A mode is canonical when its first nonzero signed index is positive;
    // its mirror then carries the conjugate value. Nyquist rows are excluded
    // (self-conjugate) but also carry zero envelope.
    const auto is_canonical = [&](std::size_t mode) {
        for (int axis = 0; axis < d; ++axis) {
            const int raw = g.axis_raw_index(mode, axis);
            if (g.is_nyquist(raw)) return false;
            const int s = g.signed_index(raw);
            if (s > 0) return true;
            if (s < 0) return false;
        }
        return false;  // mode 0
    };

    SpectralVectorField v(g);
    for (int m = 0; m < d; ++m) {
        auto vm = v.component(m);
        kernels::for_each_index(g.mode_count(), [&](std::size_t k) {
            const bool canonical = is_canonical(k);
            const std::size_t base = canonical ? k : mirror_of(k);
            if (!canonical && base == k) {  // mode 0 or a Nyquist row
                vm[k] = 0.0;
                return;
            }
            const double w = plateau_weight(xi2[base]);
            if (w == 0.0) {
                vm[k] = 0.0;
                return;
            }
            const std::uint64_t counter =
                2 * (static_cast<std::uint64_t>(base) * static_cast<std::uint64_t>(d) +
                     static_cast<std::uint64_t>(m));
            const auto [g1, g2] = rng.gaussian_pair(counter);
            const std::complex<double> z{w * g1, w * g2};
            vm[k] = canonical ? z : std::conj(z);
        });
    }

    v = leray_project(v);
    dealias_inplace(v, dealias_cutoff);

    // Each band sees only its own plateau modes, so one corrective pass lands
    // the measured sup norms on the targets up to roundoff. The Leray
    // projection above is what perturbs the drawn amplitudes.
    for (const auto& [j, target] : spec.band_targets) {
        const double measured = sup_norm(project_band(v, c, j, range));
        if (measured == 0.0)
            throw std::runtime_error("random field: band has no resolvable content");
        const double factor = target / measured;
        const double lo2 = std::ldexp(49.0 / 144.0, 2 * j);
        const double hi2 = std::ldexp(1.0, 2 * j);
        for (int m = 0; m < d; ++m) {
            auto vm = v.component(m);
            kernels::for_each_index(vm.size(), [&](std::size_t k) {
                if (xi2[k] >= lo2 && xi2[k] <= hi2) vm[k] *= factor;
            });
        }
    }
    return v;
}

}  // namespace lpns
