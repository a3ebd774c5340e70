#pragma once

// Vector fields on a periodic box, in collocation and Fourier representation,
// with the spectral operator set: transforms, differentiation, divergence-free
// projection, truncation, and sup-norm evaluation.

#include <complex>
#include <span>
#include <vector>

#include "lpns/grid.hpp"

namespace lpns {

class RealVectorField {
public:
    explicit RealVectorField(const Grid& g)
        : grid_(g), comp_(g.dim(), std::vector<double>(g.value_count(), 0.0)) {}

    const Grid& grid() const { return grid_; }
    int dim() const { return grid_.dim(); }
    std::span<double> component(int m) { return {comp_[m].data(), comp_[m].size()}; }
    std::span<const double> component(int m) const { return {comp_[m].data(), comp_[m].size()}; }

private:
    Grid grid_;
    std::vector<std::vector<double>> comp_;
};

class SpectralVectorField {
public:
    explicit SpectralVectorField(const Grid& g)
        : grid_(g), comp_(g.dim(), std::vector<std::complex<double>>(g.mode_count())) {}

    const Grid& grid() const { return grid_; }
    int dim() const { return grid_.dim(); }
    std::span<std::complex<double>> component(int m) { return {comp_[m].data(), comp_[m].size()}; }
    std::span<const std::complex<double>> component(int m) const {
        return {comp_[m].data(), comp_[m].size()};
    }

private:
    Grid grid_;
    std::vector<std::vector<std::complex<double>>> comp_;
};

/// Forward transform of every component; mode 0 is forced to zero (dynamics on
/// the box conserve the mean and the homogeneous norms ignore it).
SpectralVectorField to_spectral(const RealVectorField& f);

/// Inverse transform; imaginary residue of a conjugate-symmetric field is
/// dropped.
RealVectorField to_physical(const SpectralVectorField& F);

/// Multiply every coefficient by i*xi_axis; Nyquist row multiplier is zero.
SpectralVectorField gradient_term(const SpectralVectorField& F, int axis);

/// Per mode k != 0: c(k) -> c(k) - xi (xi.c(k)) / |xi|^2.
SpectralVectorField leray_project(const SpectralVectorField& F);

/// Max over components and points of |value|.
double sup_norm(const RealVectorField& f);
double sup_norm(const SpectralVectorField& F);  // sup_norm(to_physical(F))

void zero_mean_inplace(SpectralVectorField& F);

/// Zero all modes with |xi| > cutoff (isotropic truncation).
void dealias_inplace(SpectralVectorField& F, double cutoff);

struct DivergenceReport {
    double abs_sup = 0.0;    // max_k |sum_m xi_m c_m(k)|
    double scale = 0.0;      // max_k |xi_k| max_m |c_m(k)|
    double relative() const { return scale > 0.0 ? abs_sup / scale : 0.0; }
};
DivergenceReport divergence_report(const SpectralVectorField& F);

/// Box-averaged kinetic energy (1/2)|v|_{L^2}^2 via the Parseval identity.
double energy(const SpectralVectorField& F);

bool all_finite(const SpectralVectorField& F);
bool all_finite(const RealVectorField& f);

// Small value arithmetic used by the stepper and the tests.
void scale_field_inplace(SpectralVectorField& F, double s);
void add_scaled_inplace(SpectralVectorField& a, const SpectralVectorField& b, double s);
SpectralVectorField field_difference(const SpectralVectorField& a, const SpectralVectorField& b);

}  // namespace lpns
