#include "lpns/paraproduct.hpp"

#include <cmath>
#include <stdexcept>

#include "lpns/kernels.hpp"

namespace lpns {
namespace {

void require_same_grid(const SpectralVectorField& a, const SpectralVectorField& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("paraproduct: operands live on different grids");
}

bool is_zero(const SpectralVectorField& F) {
    for (int m = 0; m < F.dim(); ++m)
        if (kernels::sum_abs_squared(F.component(m)) != 0.0) return false;
    return true;
}

void accumulate(SpectralVectorField& acc, const SpectralVectorField& term) {
    for (int m = 0; m < acc.dim(); ++m) kernels::add_scaled(acc.component(m), term.component(m), 1.0);
}

double besov_from_sups(const std::vector<double>& sups, const BandIndexRange& range, double s) {
    double best = 0.0;
    for (int j = range.j_min; j <= range.j_max; ++j) {
        const double v = std::pow(2.0, s * j) * sups[static_cast<std::size_t>(j - range.j_min)];
        if (v > best) best = v;
    }
    return best;
}

ProductBoundReport make_report(int j, double gamma, double lhs, double b_crit, double b_gamma) {
    ProductBoundReport r;
    r.j = j;
    r.gamma = gamma;
    r.lhs = lhs;
    r.rhs_factor = std::pow(2.0, (2.0 - gamma) * j) * b_crit * b_gamma;
    if (r.rhs_factor == 0.0 && r.lhs > 0.0)
        throw std::logic_error("product bound: vanishing right side against nonzero left side");
    r.ratio = r.rhs_factor > 0.0 ? r.lhs / r.rhs_factor : 0.0;
    return r;
}

}  // namespace

SpectralVectorField advect(const SpectralVectorField& a, const SpectralVectorField& b,
                           double dealias_cutoff) {
    require_same_grid(a, b);
    const Grid& g = a.grid();
    const RealVectorField a_phys = to_physical(a);
    RealVectorField prod(g);
    for (int axis = 0; axis < g.dim(); ++axis) {
        const RealVectorField db = to_physical(gradient_term(b, axis));
        for (int m = 0; m < g.dim(); ++m)
            kernels::multiply_accumulate(a_phys.component(axis), db.component(m),
                                         prod.component(m));
    }
    SpectralVectorField out = to_spectral(prod);
    dealias_inplace(out, dealias_cutoff);
    return out;
}

SpectralVectorField tensor_divergence(const SpectralVectorField& a, const SpectralVectorField& b,
                                      double dealias_cutoff) {
    require_same_grid(a, b);
    const Grid& g = a.grid();
    const RealVectorField a_phys = to_physical(a);
    const RealVectorField b_phys = to_physical(b);
    SpectralVectorField out(g);
    for (int axis = 0; axis < g.dim(); ++axis) {
        RealVectorField prod(g);
        for (int m = 0; m < g.dim(); ++m)
            kernels::multiply_accumulate(a_phys.component(axis), b_phys.component(m),
                                         prod.component(m));
        accumulate(out, gradient_term(to_spectral(prod), axis));
    }
    dealias_inplace(out, dealias_cutoff);
    return out;
}

SpectralVectorField convection(const SpectralVectorField& v, double dealias_cutoff) {
    return advect(v, v, dealias_cutoff);
}

BonySplit bony_split(const SpectralVectorField& v, const CutoffProfile& c, double dealias_cutoff,
                     const BandIndexRange& range) {
    if (range.count() <= 0) throw std::invalid_argument("bony_split: empty band range");
    const Grid& g = v.grid();
    BonySplit split{SpectralVectorField(g), SpectralVectorField(g), SpectralVectorField(g), range,
                    range.count() < 3};

    for (int l = range.j_min; l <= range.j_max; ++l) {
        const SpectralVectorField band_l = detail::apply_band(v, c, l);
        if (is_zero(band_l)) continue;

        const SpectralVectorField low = detail::apply_low(v, c, l - 2);
        if (!is_zero(low)) {
            accumulate(split.term_a, advect(low, band_l, dealias_cutoff));
            accumulate(split.term_b, advect(band_l, low, dealias_cutoff));
        }

        SpectralVectorField near = detail::apply_band(v, c, l - 1);
        accumulate(near, band_l);
        accumulate(near, detail::apply_band(v, c, l + 1));
        accumulate(split.term_c, tensor_divergence(band_l, near, dealias_cutoff));
    }
    return split;
}

ProductBoundReport product_bound_check(const SpectralVectorField& v, const CutoffProfile& c,
                                       int j, double gamma, const BandIndexRange& range,
                                       double dealias_cutoff) {
    if (!(gamma > 1.0)) throw std::invalid_argument("product bound: gamma must exceed 1");
    const SpectralVectorField nl = convection(v, dealias_cutoff);
    const double lhs = sup_norm(project_band(nl, c, j, range));
    const auto sups = band_sup_norms(v, c, range);
    return make_report(j, gamma, lhs, besov_from_sups(sups, range, -1.0),
                       besov_from_sups(sups, range, gamma));
}

std::vector<ProductBoundReport> product_bound_scan(const SpectralVectorField& v,
                                                   const CutoffProfile& c, double gamma,
                                                   const BandIndexRange& range,
                                                   double dealias_cutoff) {
    if (!(gamma > 1.0)) throw std::invalid_argument("product bound: gamma must exceed 1");
    const SpectralVectorField nl = convection(v, dealias_cutoff);
    const auto nl_sups = band_sup_norms(nl, c, range);
    const auto v_sups = band_sup_norms(v, c, range);
    const double b_crit = besov_from_sups(v_sups, range, -1.0);
    const double b_gamma = besov_from_sups(v_sups, range, gamma);

    std::vector<ProductBoundReport> reports;
    reports.reserve(static_cast<std::size_t>(range.count()));
    for (int j = range.j_min; j <= range.j_max; ++j)
        reports.push_back(make_report(j, gamma, nl_sups[static_cast<std::size_t>(j - range.j_min)],
                                      b_crit, b_gamma));
    return reports;
}

}  // namespace lpns
