#pragma once

// Shared builders for the test suites: exact single-mode fields constructed
// directly in coefficient space, seeded random fields, and error metrics.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lpns/bands.hpp"
#include "lpns/field.hpp"
#include "lpns/grid.hpp"
#include "lpns/random_field.hpp"

namespace testutil {

inline std::size_t mode_index(const lpns::Grid& g, std::array<int, 3> k) {
    std::size_t idx = 0;
    for (int axis = 0; axis < g.dim(); ++axis) {
        int raw = k[static_cast<std::size_t>(axis)];
        if (raw < 0) raw += g.points_per_axis();
        idx = (idx << g.shift()) | static_cast<std::size_t>(raw);
    }
    return idx;
}

/// amp * cos(k . x) in component `comp`, exact coefficients amp/2 at +-k.
inline lpns::SpectralVectorField cosine_mode(const lpns::Grid& g, std::array<int, 3> k, int comp,
                                             double amp = 1.0) {
    lpns::SpectralVectorField F(g);
    std::array<int, 3> neg{-k[0], -k[1], -k[2]};
    F.component(comp)[mode_index(g, k)] = amp * 0.5;
    F.component(comp)[mode_index(g, neg)] += amp * 0.5;
    return F;
}

/// amp * sin(k . x) in component `comp`.
inline lpns::SpectralVectorField sine_mode(const lpns::Grid& g, std::array<int, 3> k, int comp,
                                           double amp = 1.0) {
    lpns::SpectralVectorField F(g);
    std::array<int, 3> neg{-k[0], -k[1], -k[2]};
    F.component(comp)[mode_index(g, k)] = std::complex<double>(0.0, -amp * 0.5);
    F.component(comp)[mode_index(g, neg)] += std::complex<double>(0.0, amp * 0.5);
    return F;
}

inline double sup_diff(const lpns::SpectralVectorField& a, const lpns::SpectralVectorField& b) {
    return lpns::sup_norm(lpns::field_difference(a, b));
}

inline double max_coeff_abs(const lpns::SpectralVectorField& F) {
    double best = 0.0;
    for (int m = 0; m < F.dim(); ++m)
        for (const auto& c : F.component(m)) best = std::max(best, std::abs(c));
    return best;
}

inline bool coeffs_equal(const lpns::SpectralVectorField& a, const lpns::SpectralVectorField& b) {
    if (!(a.grid() == b.grid())) return false;
    for (int m = 0; m < a.dim(); ++m) {
        auto ca = a.component(m);
        auto cb = b.component(m);
        for (std::size_t i = 0; i < ca.size(); ++i)
            if (ca[i] != cb[i]) return false;
    }
    return true;
}

/// Random divergence-free field with flat unit targets on every band in range.
inline lpns::SpectralVectorField flat_random_field(const lpns::Grid& g,
                                                   const lpns::CutoffProfile& c,
                                                   const lpns::BandIndexRange& range,
                                                   double cutoff, std::uint64_t seed,
                                                   int top_offset = 0) {
    lpns::RandomFieldSpec spec;
    spec.seed = seed;
    const int top = std::max(range.j_min, range.j_max - top_offset);
    for (int j = range.j_min; j <= top; ++j) spec.band_targets.emplace_back(j, 1.0);
    return lpns::random_divfree_field(g, spec, c, range, cutoff);
}

/// Collocation values of f(x) placed in component `comp`.
template <class F>
lpns::RealVectorField sampled_scalar(const lpns::Grid& g, int comp, F&& f) {
    lpns::RealVectorField out(g);
    auto vals = out.component(comp);
    const double h = g.period() / g.points_per_axis();
    for (std::size_t i = 0; i < g.value_count(); ++i) {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int axis = 0; axis < g.dim(); ++axis)
            x[static_cast<std::size_t>(axis)] = h * g.axis_raw_index(i, axis);
        vals[i] = f(x);
    }
    return out;
}

}  // namespace testutil
