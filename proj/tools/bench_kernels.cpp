// Benchmark comparing the serial reference kernels against the OpenMP path on
// the pipelines that dominate runtime. Each workload is run in both modes and
// its output signature compared bitwise; the determinism contract says the
// two must agree exactly.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "lpns/bands.hpp"
#include "lpns/field.hpp"
#include "lpns/heat.hpp"
#include "lpns/kernels.hpp"
#include "lpns/paraproduct.hpp"
#include "lpns/random_field.hpp"
#include "lpns/solver.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    double best_ms = 0.0;
    double signature = 0.0;
};

template <class F>
Outcome time_workload(F&& workload, int reps) {
    Outcome out;
    out.best_ms = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        out.signature = workload();
        const auto stop = Clock::now();
        const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        if (ms < out.best_ms) out.best_ms = ms;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int n = 64;
    int dim = 3;
    int reps = 3;
    CLI::App app{"Serial-vs-parallel kernel benchmark"};
    app.add_option("--n", n, "Points per axis (power of two, default 64)");
    app.add_option("--dim", dim, "Dimension 2 or 3 (default 3)");
    app.add_option("--reps", reps, "Repetitions per measurement (default 3)");
    CLI11_PARSE(app, argc, argv);

    const lpns::Grid g = lpns::make_grid(dim, n, 6.283185307179586);
    const lpns::CutoffProfile c = lpns::make_cutoff();
    const double cutoff = lpns::default_dealias_cutoff(g);
    const lpns::BandIndexRange range = lpns::band_range(g, c, cutoff);

    std::vector<std::pair<int, double>> targets;
    for (int j = range.j_min; j <= range.j_max; ++j) targets.emplace_back(j, 1.0);
    const lpns::SpectralVectorField v =
        lpns::random_divfree_field(g, {targets, 2024}, c, range, cutoff);

    const lpns::Stepper stepper(g, 1e-3, cutoff, true);

    struct Workload {
        std::string name;
        std::function<double()> run;
    };
    const std::vector<Workload> workloads = {
        {"heat multiplier", [&] { return lpns::sup_norm(lpns::heat_apply(v, 0.1)); }},
        {"band sup pipeline",
         [&] {
             double acc = 0.0;
             for (double s : lpns::band_sup_norms(v, c, range)) acc += s;
             return acc;
         }},
        {"convection", [&] { return lpns::sup_norm(lpns::convection(v, cutoff)); }},
        {"flow step",
         [&] {
             lpns::SolverState s{0.0, 0, v};
             if (!stepper.step(s)) return -1.0;
             return lpns::sup_norm(s.v);
         }},
        {"energy block sum", [&] { return lpns::energy(v); }},
    };

#ifdef _OPENMP
    const int workers = omp_get_max_threads();
#else
    const int workers = 1;
#endif
    std::printf("grid %dx%d^%d, %d worker(s), best of %d\n", dim, n, dim, workers, reps);
    std::printf("%-18s %12s %12s %9s %7s\n", "workload", "serial ms", "parallel ms", "speedup",
                "match");

    bool all_match = true;
    for (const auto& w : workloads) {
        Outcome serial;
        {
            lpns::kernels::ModeGuard guard(lpns::kernels::Mode::Serial);
            serial = time_workload(w.run, reps);
        }
        Outcome parallel;
        {
            lpns::kernels::ModeGuard guard(lpns::kernels::Mode::Parallel);
            parallel = time_workload(w.run, reps);
        }
        const bool match = serial.signature == parallel.signature;
        all_match = all_match && match;
        std::printf("%-18s %12.3f %12.3f %8.2fx %7s\n", w.name.c_str(), serial.best_ms,
                    parallel.best_ms, serial.best_ms / parallel.best_ms, match ? "yes" : "NO");
    }
    if (!all_match) {
        std::fprintf(stderr, "serial and parallel outputs disagree\n");
        return 1;
    }
    return 0;
}
