#pragma once

// Data-parallel building blocks shared by every module. Each primitive has an
// OpenMP path and a serial reference path selected by a process-wide mode
// switch; the two paths produce bitwise-identical results so the serial
// implementation can stand in as an oracle for the parallel one.
//
// Determinism contract: max-reductions are order-independent by construction,
// and sums are accumulated over a fixed block grid (block partials combined
// in block order), so results do not depend on the thread count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace lpns::kernels {

enum class Mode { Parallel, Serial };

Mode mode();
void set_mode(Mode m);

/// Scoped mode switch for tests and benchmarks.
class ModeGuard {
public:
    explicit ModeGuard(Mode m) : saved_(mode()) { set_mode(m); }
    ~ModeGuard() { set_mode(saved_); }
    ModeGuard(const ModeGuard&) = delete;
    ModeGuard& operator=(const ModeGuard&) = delete;

private:
    Mode saved_;
};

template <class F>
void for_each_index(std::size_t count, F&& body) {
    if (mode() == Mode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
            body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < count; ++i) body(i);
    }
}

/// Max-reduction over value_at(i). Values must be finite (NaN handling is the
/// caller's job; see all_of_indices for finiteness scans).
template <class F>
double reduce_max(std::size_t count, F&& value_at) {
    if (count == 0) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    if (mode() == Mode::Parallel) {
#pragma omp parallel for schedule(static) reduction(max : best)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
            best = std::max(best, value_at(static_cast<std::size_t>(i)));
    } else {
        for (std::size_t i = 0; i < count; ++i) best = std::max(best, value_at(i));
    }
    return best;
}

/// Conjunction over predicate(i); used for finiteness scans.
template <class F>
bool all_of_indices(std::size_t count, F&& predicate) {
    bool ok = true;
    if (mode() == Mode::Parallel) {
#pragma omp parallel for schedule(static) reduction(&& : ok)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
            ok = ok && predicate(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < count && ok; ++i) ok = predicate(i);
    }
    return ok;
}

inline constexpr std::size_t kSumBlock = 4096;

/// Sum of value_at(i) over a fixed 4096-wide block grid. Block partials are
/// combined serially in block order, so the result is independent of the
/// thread count and identical in Serial and Parallel modes.
template <class F>
double block_sum(std::size_t count, F&& value_at) {
    const std::size_t nblocks = (count + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nblocks, 0.0);
    for_each_index(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kSumBlock;
        const std::size_t hi = std::min(lo + kSumBlock, count);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += value_at(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

// -- Named wrappers used across modules and by the benchmark driver --------

inline void scale_inplace(std::span<std::complex<double>> a, std::span<const double> m) {
    for_each_index(a.size(), [&](std::size_t i) { a[i] *= m[i]; });
}

inline void scale_inplace(std::span<std::complex<double>> a, double s) {
    for_each_index(a.size(), [&](std::size_t i) { a[i] *= s; });
}

/// out[i] = a[i] * m[i]
inline void scale_to(std::span<const std::complex<double>> a, std::span<const double> m,
                     std::span<std::complex<double>> out) {
    for_each_index(a.size(), [&](std::size_t i) { out[i] = a[i] * m[i]; });
}

/// a[i] += s * b[i]
inline void add_scaled(std::span<std::complex<double>> a,
                       std::span<const std::complex<double>> b, double s) {
    for_each_index(a.size(), [&](std::size_t i) { a[i] += s * b[i]; });
}

/// acc[i] += a[i] * b[i]  (physical-space product accumulation)
inline void multiply_accumulate(std::span<const double> a, std::span<const double> b,
                                std::span<double> acc) {
    for_each_index(a.size(), [&](std::size_t i) { acc[i] += a[i] * b[i]; });
}

inline double max_abs(std::span<const double> a) {
    return reduce_max(a.size(), [&](std::size_t i) { return std::abs(a[i]); });
}

inline double sum_abs_squared(std::span<const std::complex<double>> a) {
    return block_sum(a.size(), [&](std::size_t i) { return std::norm(a[i]); });
}

}  // namespace lpns::kernels
