#pragma once

// Dyadic frequency calculus: the smooth radial cutoff pair, band and low-pass
// projections, and homogeneous sup-type Besov norms.
//
// The low-pass profile equals 1 on [0,1], 0 on [7/6,inf), and interpolates by
// the C-infinity bump step in between; the band profile is the dyadic
// difference low(r) - low(2r), supported in [1/2, 7/6]. Outside their supports
// both profiles evaluate to exactly 0.0 (and exactly 1.0 on the plateau), so
// disjoint-support identities hold bitwise, not just to tolerance.

#include <vector>

#include "lpns/field.hpp"
#include "lpns/grid.hpp"

namespace lpns {

class CutoffProfile {
public:
    /// phi0: 1 for r <= 1, 0 for r >= 7/6, smooth monotone step between.
    double low_pass(double r) const;
    /// phi(r) = phi0(r) - phi0(2r), supported in [1/2, 7/6].
    double band(double r) const;
};

CutoffProfile make_cutoff();

/// Dyadic indices j whose annuli 2^{j-1} <= |xi| <= (7/6) 2^j are resolvable
/// on a given lattice below its dealias cutoff.
struct BandIndexRange {
    int j_min = 0;
    int j_max = -1;
    bool contains(int j) const { return j >= j_min && j <= j_max; }
    int count() const { return j_max - j_min + 1; }
};

/// j_min: smallest j whose annulus meets a nonzero lattice modulus.
/// j_max: largest j with (7/6) 2^j <= dealias_cutoff.
/// Throws if the range would be empty or the cutoff exceeds the lattice.
BandIndexRange band_range(const Grid& g, const CutoffProfile& c, double dealias_cutoff);

/// Coefficients multiplied by phi(2^{-j}|xi|). j must lie in `range`.
SpectralVectorField project_band(const SpectralVectorField& F, const CutoffProfile& c, int j,
                                 const BandIndexRange& range);

/// Coefficients multiplied by phi0(2^{-j}|xi|). Any j <= range.j_max is
/// accepted (a low-pass below the resolvable bands is simply ~0).
SpectralVectorField project_low(const SpectralVectorField& F, const CutoffProfile& c, int j,
                                const BandIndexRange& range);

/// sup over j in range of 2^{js} ||P_j F||_inf. Throws on an empty range.
double besov_norm(const SpectralVectorField& F, const CutoffProfile& c, double s,
                  const BandIndexRange& range);

/// ||P_j F||_inf for every j in range (bands evaluated in parallel).
std::vector<double> band_sup_norms(const SpectralVectorField& F, const CutoffProfile& c,
                                   const BandIndexRange& range);

namespace detail {
/// Unchecked multiplier application; used where neighbors of a range edge are
/// needed and known to carry no content (e.g. dealiased fields).
SpectralVectorField apply_band(const SpectralVectorField& F, const CutoffProfile& c, int j);
SpectralVectorField apply_low(const SpectralVectorField& F, const CutoffProfile& c, int j);
}  // namespace detail

}  // namespace lpns
