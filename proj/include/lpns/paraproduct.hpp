#pragma once

// Pseudo-spectral quadratic terms and their frequency-interaction split.
//
// Products are formed in collocation space and truncated isotropically at the
// caller's dealias cutoff. When both factors have spectrum inside that cutoff
// (with the standard 2/3 choice), every retained mode of the product is
// alias-free, so the split below reconstructs the convection term to roundoff.

#include <vector>

#include "lpns/bands.hpp"
#include "lpns/field.hpp"

namespace lpns {

/// (a . grad) b, dealiased. Mean mode of the output is zero.
SpectralVectorField advect(const SpectralVectorField& a, const SpectralVectorField& b,
                           double dealias_cutoff);

/// Component m: sum_axis i xi_axis F[a_axis b_m] (divergence of the outer
/// product), dealiased.
SpectralVectorField tensor_divergence(const SpectralVectorField& a, const SpectralVectorField& b,
                                      double dealias_cutoff);

/// (v . grad) v, dealiased.
SpectralVectorField convection(const SpectralVectorField& v, double dealias_cutoff);

/// Frequency-interaction decomposition of the convection term.
///
/// term_a: sum_l (low(l-2) v . grad) band(l) v   (low-high)
/// term_b: sum_l (band(l) v . grad) low(l-2) v   (high-low)
/// term_c: sum_l div( band(l) v  x  near(l) v )  (near-diagonal), where
///         near(l) = band(l-1) + band(l) + band(l+1).
///
/// For divergence-free v with spectrum inside |xi| <= 2^{range.j_max}, the
/// three terms sum to convection(v) up to roundoff.
struct BonySplit {
    SpectralVectorField term_a;
    SpectralVectorField term_b;
    SpectralVectorField term_c;
    BandIndexRange range;
    bool range_warning = false;  // fewer than three bands: term_a/term_b vanish
};

BonySplit bony_split(const SpectralVectorField& v, const CutoffProfile& c, double dealias_cutoff,
                     const BandIndexRange& range);

/// One band's worth of the bilinear sup-norm bound
///   || band(j) of (v.grad)v ||_inf  <=  K 2^{j(2-gamma)} N_{-1}(v) N_gamma(v)
/// where N_s is the sup-type dyadic norm of order s.
struct ProductBoundReport {
    int j = 0;
    double gamma = 0.0;
    double lhs = 0.0;         // || band(j) of (v.grad)v ||_inf
    double rhs_factor = 0.0;  // 2^{j(2-gamma)} N_{-1}(v) N_gamma(v)
    double ratio = 0.0;       // lhs / rhs_factor, 0 when both vanish
};

/// Throws std::invalid_argument for gamma <= 1 and std::logic_error when the
/// bound's right side vanishes while the left side does not.
ProductBoundReport product_bound_check(const SpectralVectorField& v, const CutoffProfile& c,
                                       int j, double gamma, const BandIndexRange& range,
                                       double dealias_cutoff);

/// product_bound_check for every j in range, with the convection term and the
/// dyadic norms evaluated once.
std::vector<ProductBoundReport> product_bound_scan(const SpectralVectorField& v,
                                                   const CutoffProfile& c, double gamma,
                                                   const BandIndexRange& range,
                                                   double dealias_cutoff);

}  // namespace lpns
