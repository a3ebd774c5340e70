#include "lpns/field.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "lpns/fft.hpp"
#include "lpns/kernels.hpp"

namespace lpns {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("field operation: grid mismatch");
}

}  // namespace

SpectralVectorField to_spectral(const RealVectorField& f) {
    const Grid& g = f.grid();
    const FftEngine& fft = FftEngine::for_grid(g);
    SpectralVectorField out(g);
    std::vector<std::complex<double>> buf(g.mode_count());
    for (int m = 0; m < g.dim(); ++m) {
        auto src = f.component(m);
        kernels::for_each_index(buf.size(), [&](std::size_t i) { buf[i] = src[i]; });
        fft.forward_scaled(buf, out.component(m));
        out.component(m)[0] = 0.0;
    }
    return out;
}

RealVectorField to_physical(const SpectralVectorField& F) {
    const Grid& g = F.grid();
    const FftEngine& fft = FftEngine::for_grid(g);
    RealVectorField out(g);
    std::vector<std::complex<double>> buf(g.mode_count());
    for (int m = 0; m < g.dim(); ++m) {
        fft.inverse(F.component(m), buf);
        auto dst = out.component(m);
        kernels::for_each_index(buf.size(), [&](std::size_t i) { dst[i] = buf[i].real(); });
    }
    return out;
}

SpectralVectorField gradient_term(const SpectralVectorField& F, int axis) {
    const Grid& g = F.grid();
    if (axis < 0 || axis >= g.dim()) throw std::invalid_argument("gradient_term: axis out of range");
    SpectralVectorField out(g);
    for (int m = 0; m < g.dim(); ++m) {
        auto src = F.component(m);
        auto dst = out.component(m);
        kernels::for_each_index(src.size(), [&](std::size_t i) {
            const int raw = g.axis_raw_index(i, axis);
            const double w = g.is_nyquist(raw) ? 0.0 : g.wavenumber(raw);
            dst[i] = std::complex<double>(-w * src[i].imag(), w * src[i].real());
        });
    }
    return out;
}

SpectralVectorField leray_project(const SpectralVectorField& F) {
    const Grid& g = F.grid();
    const int d = g.dim();
    SpectralVectorField out(g);
    std::array<std::span<const std::complex<double>>, 3> src;
    std::array<std::span<std::complex<double>>, 3> dst;
    for (int m = 0; m < d; ++m) {
        src[m] = F.component(m);
        dst[m] = out.component(m);
    }
    auto xi2 = g.xi_squared();
    kernels::for_each_index(g.mode_count(), [&](std::size_t i) {
        if (xi2[i] == 0.0) {
            for (int m = 0; m < d; ++m) dst[m][i] = src[m][i];
            return;
        }
        double xi[3] = {0.0, 0.0, 0.0};
        std::complex<double> dot(0.0, 0.0);
        for (int m = 0; m < d; ++m) {
            xi[m] = g.wavenumber(g.axis_raw_index(i, m));
            dot += xi[m] * src[m][i];
        }
        const std::complex<double> factor = dot / xi2[i];
        for (int m = 0; m < d; ++m) dst[m][i] = src[m][i] - xi[m] * factor;
    });
    return out;
}

double sup_norm(const RealVectorField& f) {
    double best = 0.0;
    for (int m = 0; m < f.dim(); ++m) best = std::max(best, kernels::max_abs(f.component(m)));
    return best;
}

double sup_norm(const SpectralVectorField& F) { return sup_norm(to_physical(F)); }

void zero_mean_inplace(SpectralVectorField& F) {
    for (int m = 0; m < F.dim(); ++m) F.component(m)[0] = 0.0;
}

void dealias_inplace(SpectralVectorField& F, double cutoff) {
    const double c2 = cutoff * cutoff;
    auto xi2 = F.grid().xi_squared();
    for (int m = 0; m < F.dim(); ++m) {
        auto a = F.component(m);
        kernels::for_each_index(a.size(), [&](std::size_t i) {
            if (xi2[i] > c2) a[i] = 0.0;
        });
    }
}

DivergenceReport divergence_report(const SpectralVectorField& F) {
    const Grid& g = F.grid();
    const int d = g.dim();
    std::array<std::span<const std::complex<double>>, 3> src;
    for (int m = 0; m < d; ++m) src[m] = F.component(m);
    auto xi2 = g.xi_squared();
    DivergenceReport rep;
    rep.abs_sup = kernels::reduce_max(g.mode_count(), [&](std::size_t i) {
        std::complex<double> dot(0.0, 0.0);
        for (int m = 0; m < d; ++m) dot += g.wavenumber(g.axis_raw_index(i, m)) * src[m][i];
        return std::abs(dot);
    });
    rep.scale = kernels::reduce_max(g.mode_count(), [&](std::size_t i) {
        double amp = 0.0;
        for (int m = 0; m < d; ++m) amp = std::max(amp, std::abs(src[m][i]));
        return std::sqrt(xi2[i]) * amp;
    });
    return rep;
}

double energy(const SpectralVectorField& F) {
    double total = 0.0;
    for (int m = 0; m < F.dim(); ++m) total += kernels::sum_abs_squared(F.component(m));
    return 0.5 * total;
}

bool all_finite(const SpectralVectorField& F) {
    for (int m = 0; m < F.dim(); ++m) {
        auto a = F.component(m);
        if (!kernels::all_of_indices(a.size(), [&](std::size_t i) {
                return std::isfinite(a[i].real()) && std::isfinite(a[i].imag());
            }))
            return false;
    }
    return true;
}

bool all_finite(const RealVectorField& f) {
    for (int m = 0; m < f.dim(); ++m) {
        auto a = f.component(m);
        if (!kernels::all_of_indices(a.size(), [&](std::size_t i) { return std::isfinite(a[i]); }))
            return false;
    }
    return true;
}

void scale_field_inplace(SpectralVectorField& F, double s) {
    for (int m = 0; m < F.dim(); ++m) kernels::scale_inplace(F.component(m), s);
}

void add_scaled_inplace(SpectralVectorField& a, const SpectralVectorField& b, double s) {
    require_same_grid(a.grid(), b.grid());
    for (int m = 0; m < a.dim(); ++m) kernels::add_scaled(a.component(m), b.component(m), s);
}

SpectralVectorField field_difference(const SpectralVectorField& a, const SpectralVectorField& b) {
    require_same_grid(a.grid(), b.grid());
    SpectralVectorField out = a;
    add_scaled_inplace(out, b, -1.0);
    return out;
}

}  // namespace lpns
