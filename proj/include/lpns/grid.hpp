#pragma once

// Periodic box descriptor and its wavenumber lattice.
//
// The box is [0, period)^dim sampled on n collocation points per axis, n a
// power of two. Modes are indexed row-major with axis 0 slowest; raw axis
// index i in [0, n) maps to the signed integer index i (i < n/2) or i - n,
// giving wavenumbers xi = 2*pi*k/period in [-nyquist, nyquist).

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lpns {

class Grid {
public:
    Grid() = default;

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double period() const { return period_; }

    double wavenumber_step() const;
    double nyquist() const { return wavenumber_step() * (n_ / 2); }
    std::size_t mode_count() const;
    std::size_t value_count() const { return mode_count(); }

    /// Signed integer mode index for raw axis index in [0, n).
    int signed_index(int raw) const { return raw < n_ / 2 ? raw : raw - n_; }
    bool is_nyquist(int raw) const { return raw == n_ / 2; }
    double wavenumber(int raw) const { return wavenumber_step() * signed_index(raw); }

    /// Raw axis index of linear mode index `mode` along `axis` (axis 0 slowest).
    int axis_raw_index(std::size_t mode, int axis) const {
        return static_cast<int>((mode >> (shift_ * (dim_ - 1 - axis))) & (n_ - 1));
    }

    /// Bits per axis in a linear mode index (log2 n).
    int shift() const { return shift_; }

    /// |xi|^2 per linear mode index; shared immutable table.
    std::span<const double> xi_squared() const { return {xi_sq_->data(), xi_sq_->size()}; }

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && period_ == o.period_;
    }

    friend Grid make_grid(int dim, int n, double period);

private:
    int dim_ = 0;
    int n_ = 0;
    int shift_ = 0;  // log2(n)
    double period_ = 0.0;
    std::shared_ptr<const std::vector<double>> xi_sq_;
};

/// Validates dim in {2,3}, n a power of two >= 8, period > 0.
Grid make_grid(int dim, int n, double period);

/// Isotropic truncation radius for quadratic products: fraction * nyquist.
double default_dealias_cutoff(const Grid& g, double fraction = 2.0 / 3.0);

}  // namespace lpns
