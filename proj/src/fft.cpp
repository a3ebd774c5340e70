#include "lpns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "lpns/kernels.hpp"

namespace lpns {

namespace {
std::mutex g_planner_mutex;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

FftEngine::FftEngine(int dim, int n) {
    count_ = 1;
    int dims[3] = {n, n, n};
    for (int a = 0; a < dim; ++a) count_ *= static_cast<std::size_t>(n);
    forward_scale_ = 1.0 / static_cast<double>(count_);

    // Dummy buffers are only needed at planning time; FFTW_UNALIGNED keeps the
    // plan valid for new-array execution on arbitrarily aligned buffers.
    std::vector<std::complex<double>> a(count_), b(count_);
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    forward_plan_ = fftw_plan_dft(dim, dims, as_fftw(a.data()), as_fftw(b.data()),
                                  FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_plan_ = fftw_plan_dft(dim, dims, as_fftw(a.data()), as_fftw(b.data()),
                                   FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (forward_plan_ == nullptr || backward_plan_ == nullptr)
        throw std::runtime_error("FFTW planning failed");
}

FftEngine::~FftEngine() {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (backward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

const FftEngine& FftEngine::for_grid(const Grid& g) {
    static std::mutex cache_mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<FftEngine>> cache;
    const auto key = std::make_pair(g.dim(), g.points_per_axis());
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::unique_ptr<FftEngine>(new FftEngine(key.first, key.second)))
                 .first;
    return *it->second;
}

void FftEngine::forward_scaled(std::span<const std::complex<double>> in,
                               std::span<std::complex<double>> out) const {
    if (in.size() != count_ || out.size() != count_)
        throw std::invalid_argument("FftEngine: buffer size mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                     as_fftw(const_cast<std::complex<double>*>(in.data())), as_fftw(out.data()));
    kernels::scale_inplace(out, forward_scale_);
}

void FftEngine::inverse(std::span<const std::complex<double>> in,
                        std::span<std::complex<double>> out) const {
    if (in.size() != count_ || out.size() != count_)
        throw std::invalid_argument("FftEngine: buffer size mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(backward_plan_),
                     as_fftw(const_cast<std::complex<double>*>(in.data())), as_fftw(out.data()));
}

}  // namespace lpns
