#pragma once

// Experiment driver: JSON configuration with dotted-path overrides, seeded
// ensemble runners for the product-bound, heat-decay, oracle, small-data, and
// smallness-window studies, and deterministic CSV/JSON artifact writing.
//
// Determinism contract: identical config and seed produce byte-identical data
// files regardless of worker count; wall-clock and environment facts live in
// a separate metadata file.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpns/csv.hpp"
#include "lpns/solver.hpp"

namespace lpns {

/// Configuration problems surface as this type; the CLI maps it to exit 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    ProductBoundEnsemble,  // "lemma1-ensemble"
    HeatDecay,             // "heat-decay"
    TaylorGreen,           // "taylor-green"
    SmallDataFlow,         // "small-data-nse"
    SmallnessWindow,       // "theorem1-window"
};

std::string kind_string(ExperimentKind k);
ExperimentKind kind_from_string(const std::string& s);  // throws ConfigError

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::TaylorGreen;
    int dim = 3;
    int n = 32;
    double period = 6.283185307179586;
    SolverConfig solver;
    std::uint64_t seed = 0;
    int ensemble = 1;
    double gamma = 1.5;  // mirrored into solver.gamma at load
    double m0 = 0.01;
    double window_start = -1.0;  // negative: resolved to t_end/2 at load
    double window_end = -1.0;    // negative: resolved to t_end at load
    std::vector<double> heat_times = {0.01, 0.1, 1.0};
    std::vector<double> critical_tiers = {1e-1, 1e-2, 1e-3};
    int tier_seeds = 10;
    std::vector<std::pair<int, double>> band_targets;  // empty: flat 1.0 below j_max
    double envelope_rate = 0.2;
    std::filesystem::path output_dir = ".";
};

struct LoadedConfig {
    ExperimentConfig config;
    std::string canonical_json;  // fully resolved, sorted keys, single line
    std::string hash;            // 16 hex digits, FNV-1a over canonical_json
};

/// Parses, applies --set overrides (dotted paths, value side parsed as JSON
/// when possible), resolves defaults, validates. Unknown keys are rejected.
LoadedConfig load_config(const std::filesystem::path& file,
                         const std::vector<std::string>& overrides = {});
LoadedConfig load_config_text(const std::string& json_text,
                              const std::vector<std::string>& overrides = {});

/// Runs the configured experiment, writing into config.output_dir:
///   <kind>-<seed>.csv           data rows (every row ends with config_hash)
///   <kind>-<seed>-report.json   summary of the run
///   <kind>-<seed>-meta.json     provenance incl. timestamp and worker count
///   <kind>-<seed>-final.lpns    final field (solver-driven kinds)
/// Exit status: 0 done, 2 blow-up suspected, 3 invariant violation.
int run_experiment(const LoadedConfig& lc);

/// Aggregation behind the fit-constants subcommand: recognizes product-bound
/// and band-decay tables by their headers and reports fitted constants as a
/// JSON document. Unrecognized schemas are an error.
std::string fit_constants(const std::vector<csv::Table>& tables);

/// u0 = (sin(kx1) cos(kx2), -cos(kx1) sin(kx2)) with k the grid's wavenumber
/// step: a shape-preserving vortex whose exact viscous evolution is
/// e^{-2k^2 t} u0. Requires dim == 2.
SpectralVectorField taylor_green_field(const Grid& g);

}  // namespace lpns
