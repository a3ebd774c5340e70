#pragma once

// Seeded random divergence-free fields with a prescribed per-band amplitude
// profile, built from a counter-based generator so any run can reproduce a
// member's stream from (seed, counter) alone.

#include <cstdint>
#include <utility>
#include <vector>

#include "lpns/bands.hpp"
#include "lpns/field.hpp"

namespace lpns {

/// Counter-mode splitmix64 stream with Box-Muller gaussians on top. Stateless:
/// every draw is a pure function of (seed, counter).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t at(std::uint64_t counter) const;

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01(std::uint64_t counter) const;

    /// Two independent standard normals from counters (counter, counter + 1).
    std::pair<double, double> gaussian_pair(std::uint64_t counter) const;

private:
    std::uint64_t seed_;
};

/// Recorded in output metadata so other implementations can reproduce streams.
inline constexpr const char* kRngAlgorithmId = "splitmix64-counter/box-muller/v1";

struct RandomFieldSpec {
    /// (band index, target sup-norm of that band's projection). Bands must lie
    /// in the grid's resolvable range; targets must be positive.
    std::vector<std::pair<int, double>> band_targets;
    std::uint64_t seed = 0;
};

/// Gaussian coefficients drawn on the half-lattice over each requested band's
/// plateau sub-annulus [7/12 * 2^j, 2^j] (band multiplier one, neighbors
/// zero), mirrored for realness, projected divergence-free, dealiased, then
/// rescaled once per band. The plateaus are disjoint, so the measured per-band
/// sup norms meet the targets to roundoff; a band whose plateau contains no
/// lattice mode raises an error.
///
/// Deterministic in spec.seed; scaling every target by alpha scales the field
/// by exactly alpha.
SpectralVectorField random_divfree_field(const Grid& g, const RandomFieldSpec& spec,
                                         const CutoffProfile& c, const BandIndexRange& range,
                                         double dealias_cutoff);

}  // namespace lpns
