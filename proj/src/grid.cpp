#include "lpns/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lpns/kernels.hpp"

namespace lpns {

double Grid::wavenumber_step() const { return 2.0 * std::numbers::pi / period_; }

std::size_t Grid::mode_count() const {
    std::size_t c = 1;
    for (int a = 0; a < dim_; ++a) c *= static_cast<std::size_t>(n_);
    return c;
}

Grid make_grid(int dim, int n, double period) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("make_grid: dimension must be 2 or 3, got " + std::to_string(dim));
    if (n < 8 || (n & (n - 1)) != 0)
        throw std::invalid_argument("make_grid: points per axis must be a power of two >= 8, got " +
                                    std::to_string(n));
    if (!(period > 0.0)) throw std::invalid_argument("make_grid: period must be positive");

    Grid g;
    g.dim_ = dim;
    g.n_ = n;
    g.period_ = period;
    g.shift_ = 0;
    while ((1 << g.shift_) != n) ++g.shift_;

    auto table = std::make_shared<std::vector<double>>(g.mode_count());
    auto* data = table->data();
    const Grid& gr = g;
    kernels::for_each_index(g.mode_count(), [&](std::size_t m) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double xi = gr.wavenumber(gr.axis_raw_index(m, a));
            s += xi * xi;
        }
        data[m] = s;
    });
    g.xi_sq_ = std::move(table);
    return g;
}

double default_dealias_cutoff(const Grid& g, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("dealias fraction must lie in (0, 1]");
    return fraction * g.nyquist();
}

}  // namespace lpns
