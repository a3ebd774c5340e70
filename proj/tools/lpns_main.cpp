// Command-line entry point: run experiments from JSON configs, recompute
// norms of a checkpoint, aggregate fitted constants from CSV tables.
//
// Exit codes: 0 done, 1 config/input error, 2 blow-up suspected,
// 3 invariant violation or internal failure.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "lpns/bands.hpp"
#include "lpns/checkpoint.hpp"
#include "lpns/experiment.hpp"
#include "lpns/monitor.hpp"

namespace {

void apply_worker_env() {
#ifdef _OPENMP
    if (const char* raw = std::getenv("LPNS_WORKERS")) {
        const int workers = std::atoi(raw);
        if (workers > 0) omp_set_num_threads(workers);
    }
#endif
}

int check_checkpoint(const std::string& path, double gamma) {
    lpns::RealVectorField f = lpns::read_checkpoint(path);
    const lpns::Grid& g = f.grid();
    const lpns::SpectralVectorField v = lpns::to_spectral(f);
    const lpns::CutoffProfile c = lpns::make_cutoff();
    const double cutoff = lpns::default_dealias_cutoff(g);
    const lpns::BandIndexRange range = lpns::band_range(g, c, cutoff);

    const auto sups = lpns::band_sup_norms(v, c, range);
    const lpns::DivergenceReport div = lpns::divergence_report(v);

    bool finite = lpns::all_finite(v);
    nlohmann::ordered_json out;
    out["dim"] = g.dim();
    out["n"] = g.points_per_axis();
    out["period"] = g.period();
    out["gamma"] = gamma;
    out["critical_norm"] = lpns::critical_norm(v, c, range);
    out["gamma_norm"] = lpns::besov_norm(v, c, gamma, range);
    out["sup_norm"] = lpns::sup_norm(f);
    out["energy"] = lpns::energy(v);
    out["divergence_relative"] = div.relative();
    out["range"] = {{"j_min", range.j_min}, {"j_max", range.j_max}};
    nlohmann::ordered_json bands;
    for (int j = range.j_min; j <= range.j_max; ++j)
        bands[std::to_string(j)] = sups[static_cast<std::size_t>(j - range.j_min)];
    out["band_sups"] = bands;
    out["finite"] = finite;
    std::cout << out.dump(2) << "\n";
    return finite ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    apply_worker_env();

    CLI::App app{"Spectral flow laboratory on the periodic box"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "Execute an experiment described by a JSON config");
    run->add_option("config", config_path, "Path to the experiment JSON")->required();
    run->add_option("--set", overrides,
                    "Override a config key by dotted path, e.g. --set solver.dt=0.0005");

    std::string checkpoint_path;
    double gamma = 1.5;
    auto* check = app.add_subcommand("check", "Recompute norms of a checkpoint file");
    check->add_option("checkpoint", checkpoint_path, "Path to a .lpns checkpoint")->required();
    check->add_option("--gamma", gamma, "Order of the smooth dyadic norm (default 1.5)");

    std::vector<std::string> csv_paths;
    auto* fit = app.add_subcommand("fit-constants", "Aggregate fitted constants from CSV tables");
    fit->add_option("csv", csv_paths, "One or more CSV files written by run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return lpns::run_experiment(lpns::load_config(config_path, overrides));
        if (check->parsed()) {
            try {
                return check_checkpoint(checkpoint_path, gamma);
            } catch (const std::runtime_error& e) {
                std::cerr << "input error: " << e.what() << "\n";
                return 1;
            }
        }
        if (fit->parsed()) {
            std::vector<lpns::csv::Table> tables;
            tables.reserve(csv_paths.size());
            try {
                for (const auto& p : csv_paths) tables.push_back(lpns::csv::read(p));
            } catch (const std::runtime_error& e) {
                std::cerr << "input error: " << e.what() << "\n";
                return 1;
            }
            std::cout << lpns::fit_constants(tables) << "\n";
            return 0;
        }
    } catch (const lpns::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
