#pragma once

// FFTW-backed d-dimensional complex transforms, one cached engine per grid
// shape. Plans are created once under a lock (the FFTW planner is not thread
// safe) with FFTW_UNALIGNED so the new-array execute interface is usable from
// any thread on any buffer.
//
// Normalization: the forward transform carries 1/n^dim, the inverse carries
// none, so a coefficient equals the amplitude of its complex exponential.

#include <complex>
#include <span>

#include "lpns/grid.hpp"

namespace lpns {

class FftEngine {
public:
    static const FftEngine& for_grid(const Grid& g);

    /// out = DFT(in) / n^dim, sign convention e^{-i xi.x}.
    void forward_scaled(std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) const;

    /// out = sum_k in[k] e^{+i xi_k.x}, unnormalized.
    void inverse(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out) const;

    ~FftEngine();
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

private:
    FftEngine(int dim, int n);

    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
    std::size_t count_ = 0;
    double forward_scale_ = 1.0;
};

}  // namespace lpns
