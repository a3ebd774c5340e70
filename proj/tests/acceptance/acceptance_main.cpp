// Acceptance gate: one self-contained check per release criterion, each
// printing a single [PASS]/[FAIL] line. The process exit code is the number
// of failed criteria. All tolerances are fixed here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "json.hpp"
#include "lpns/bands.hpp"
#include "lpns/csv.hpp"
#include "lpns/experiment.hpp"
#include "lpns/field.hpp"
#include "lpns/grid.hpp"
#include "lpns/heat.hpp"
#include "lpns/kernels.hpp"
#include "lpns/monitor.hpp"
#include "lpns/paraproduct.hpp"
#include "lpns/random_field.hpp"
#include "lpns/solver.hpp"

using namespace lpns;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Failure {
    std::string detail;
};

void expect(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

std::string fmt(double v) { return csv::format_double(v); }

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("lpns-acceptance-" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    expect(in.good(), "cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SpectralVectorField flat_field(const Grid& g, const CutoffProfile& c, const BandIndexRange& range,
                               double cutoff, std::uint64_t seed, int top_offset) {
    RandomFieldSpec spec;
    spec.seed = seed;
    const int top = std::max(range.j_min, range.j_max - top_offset);
    for (int j = range.j_min; j <= top; ++j) spec.band_targets.emplace_back(j, 1.0);
    return random_divfree_field(g, spec, c, range, cutoff);
}

double max_coeff_abs(const SpectralVectorField& F) {
    double best = 0.0;
    for (int m = 0; m < F.dim(); ++m)
        for (const auto& z : F.component(m)) best = std::max(best, std::abs(z));
    return best;
}

// --- criterion 1: the radial cutoff pair and its partition of unity --------

std::string criterion_cutoff_profile() {
    CutoffProfile c = make_cutoff();

    for (int i = 0; i <= 1000; ++i) {
        const double r = 2.0 * i / 1000.0;
        const double low = c.low_pass(r);
        if (r <= 1.0) expect(low == 1.0, "low_pass(" + fmt(r) + ") != 1 exactly");
        if (r >= 7.0 / 6.0) expect(low == 0.0, "low_pass(" + fmt(r) + ") != 0 exactly");
        const double band = c.band(r);
        if (r <= 0.5 || r >= 7.0 / 6.0)
            expect(band == 0.0, "band(" + fmt(r) + ") leaks outside [1/2, 7/6]");
        expect(band >= 0.0 && band <= 1.0, "band(" + fmt(r) + ") outside [0, 1]");
    }

    Grid g = make_grid(3, 64, kTwoPi);
    BandIndexRange range = band_range(g, c, default_dealias_cutoff(g));
    const double top = std::ldexp(1.0, range.j_max - 1);
    std::set<double> moduli;
    for (double x2 : g.xi_squared()) {
        const double r = std::sqrt(x2);
        if (r > 0.0 && r < top) moduli.insert(r);
    }
    expect(moduli.size() > 30, "lattice provides too few moduli to test");
    double worst = 0.0;
    for (double r : moduli) {
        double s = 0.0;
        for (int j = range.j_min; j <= range.j_max; ++j) s += c.band(std::ldexp(r, -j));
        worst = std::max(worst, std::abs(s - 1.0));
    }
    expect(worst <= 1e-12, "partition of unity defect " + fmt(worst) + " > 1e-12");
    return "exact plateaus/supports at 1001 radii; partition defect " + fmt(worst) + " over " +
           std::to_string(moduli.size()) + " moduli";
}

// --- criterion 2: distant band projections compose to exactly zero ---------

std::string criterion_band_orthogonality() {
    std::size_t pairs = 0;
    for (int dim : {2, 3}) {
        Grid g = make_grid(dim, dim == 2 ? 64 : 32, kTwoPi);
        CutoffProfile c = make_cutoff();
        const double cutoff = default_dealias_cutoff(g);
        BandIndexRange range = band_range(g, c, cutoff);
        SpectralVectorField v = flat_field(g, c, range, cutoff, 2026, 0);
        expect(sup_norm(v) > 0.0, "probe field vanished");

        for (int j = range.j_min; j <= range.j_max; ++j) {
            SpectralVectorField Pj = project_band(v, c, j, range);
            for (int j2 = range.j_min; j2 <= range.j_max; ++j2) {
                if (std::abs(j - j2) <= 1) continue;
                const double leak = max_coeff_abs(project_band(Pj, c, j2, range));
                expect(leak == 0.0, "bands " + std::to_string(j) + "," + std::to_string(j2) +
                                        " leak " + fmt(leak));
                ++pairs;
            }
        }
    }
    return std::to_string(pairs) + " separated band pairs, all exactly zero";
}

// --- criterion 3: the interaction split reconstructs the quadratic term ----

std::string criterion_split_reconstruction() {
    Grid g = make_grid(3, 32, kTwoPi);
    CutoffProfile c = make_cutoff();
    const double cutoff = default_dealias_cutoff(g);
    BandIndexRange range = band_range(g, c, cutoff);

    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SpectralVectorField v = flat_field(g, c, range, cutoff, seed, 1);
        SpectralVectorField conv = convection(v, cutoff);
        const double scale = sup_norm(conv);
        expect(scale > 0.0, "degenerate sample at seed " + std::to_string(seed));

        BonySplit split = bony_split(v, c, cutoff, range);
        SpectralVectorField sum = split.term_a;
        add_scaled_inplace(sum, split.term_b, 1.0);
        add_scaled_inplace(sum, split.term_c, 1.0);
        const double rel = sup_norm(field_difference(sum, conv)) / scale;
        expect(rel <= 1e-10,
               "seed " + std::to_string(seed) + " relative defect " + fmt(rel) + " > 1e-10");
        worst = std::max(worst, rel);
    }
    return "50 seeds, worst relative defect " + fmt(worst);
}

// --- criterion 4: the bilinear bound over a hundred-member ensemble --------

std::string criterion_product_bound_ensemble() {
    const auto started = std::chrono::steady_clock::now();
    const fs::path dir = fresh_dir("ensemble");
    LoadedConfig lc = load_config_text(R"({
        "kind": "lemma1-ensemble",
        "grid": {"dim": 3, "n": 64, "period": 6.283185307179586},
        "gamma": 1.5,
        "seed": 1,
        "ensemble": 100
    })", {"output_dir=" + dir.string()});
    expect(run_experiment(lc) == 0, "ensemble run did not exit cleanly");

    csv::Table t = csv::read(dir / "lemma1-ensemble-1.csv");
    const std::size_t cj = t.column("j");
    const std::size_t cr = t.column("ratio");
    std::map<long long, double> per_j;
    for (const auto& row : t.rows) {
        const double ratio = csv::parse_double(row[cr]);
        expect(std::isfinite(ratio) && ratio >= 0.0, "nonfinite or negative ratio in row");
        auto [it, fresh] = per_j.try_emplace(std::stoll(row[cj]), ratio);
        if (!fresh) it->second = std::max(it->second, ratio);
    }
    expect(per_j.size() >= 4, "fewer bands than expected");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& [j, r] : per_j) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    expect(lo > 0.0, "a band never produced a positive ratio");
    expect(hi / lo < 10.0, "per-band maxima spread " + fmt(hi / lo) + " >= 10");

    auto fitted = nlohmann::json::parse(fit_constants({t}));
    const double global = fitted.at("product_bound").at("global_max_ratio").get<double>();
    expect(std::isfinite(global) && global > 0.0, "fitted global constant not finite/positive");
    expect(t.rows.size() == 100 * per_j.size(), "row count mismatch");

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    expect(secs < 600.0, "runtime " + fmt(secs) + "s exceeds the 600s budget");
    return "100 seeds x " + std::to_string(per_j.size()) + " bands; global constant " +
           fmt(global) + ", spread " + fmt(hi / lo) + ", " + fmt(secs) + "s";
}

// --- criterion 5: heat-flow band decay rates land in the dyadic bracket ----

std::string criterion_heat_decay() {
    const fs::path dir = fresh_dir("heat");
    LoadedConfig lc = load_config_text(R"({
        "kind": "heat-decay",
        "grid": {"dim": 3, "n": 64, "period": 6.283185307179586},
        "seed": 2,
        "ensemble": 3,
        "heat_times": [0.01, 0.1, 1.0]
    })", {"output_dir=" + dir.string()});
    expect(run_experiment(lc) == 0, "heat-decay run did not exit cleanly");

    csv::Table t = csv::read(dir / "heat-decay-2.csv");
    const std::size_t cc = t.column("fitted_c");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : t.rows) {
        const double c = csv::parse_double(row[cc]);
        expect(c >= 0.2 && c <= 1.4, "fitted rate " + fmt(c) + " outside [0.2, 1.4]");
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    expect(!t.rows.empty(), "no decay rows produced");

    // pure dyadic modes: the measured exponent is the analytic one
    Grid g = make_grid(2, 64, kTwoPi);
    CutoffProfile c = make_cutoff();
    BandIndexRange range = band_range(g, c, default_dealias_cutoff(g));
    double worst = 0.0;
    for (int j = range.j_min; j <= range.j_max; ++j) {
        SpectralVectorField F(g);
        F.component(0)[static_cast<std::size_t>(1 << j)] = 0.5;  // mode (0, 2^j)
        F.component(0)[static_cast<std::size_t>(g.points_per_axis() - (1 << j))] = 0.5;
        for (double time : {0.01, 0.1, 1.0}) {
            DecayFit fit = band_decay_check(F, c, j, time, range);
            worst = std::max(worst, std::abs(fit.fitted_c - 1.0));
        }
    }
    expect(worst <= 1e-10, "pure-mode exponent off by " + fmt(worst));
    return std::to_string(t.rows.size()) + " fits in [" + fmt(lo) + ", " + fmt(hi) +
           "]; pure-mode defect " + fmt(worst);
}

// --- criterion 6: exact vortex oracle and measured integrator order --------

std::string criterion_flow_oracle() {
    const fs::path dir = fresh_dir("vortex");
    LoadedConfig lc = load_config_text(R"({
        "kind": "taylor-green",
        "grid": {"dim": 2, "n": 64, "period": 6.283185307179586},
        "solver": {"dt": 0.001, "t_end": 1.0, "record_every": 100},
        "seed": 4
    })", {"output_dir=" + dir.string()});
    expect(run_experiment(lc) == 0, "vortex run did not exit cleanly");

    auto report = nlohmann::json::parse(slurp(dir / "taylor-green-4-report.json"));
    const double sup_err = report.at("sup_error_final").get<double>();
    expect(sup_err >= 0.0 && sup_err <= 1e-6,
           "final sup error " + fmt(sup_err) + " exceeds 1e-6");

    // measured convergence order on a nonlinearly active field (the vortex
    // itself has an exactly vanishing quadratic term, so it cannot probe the
    // integrator order)
    Grid g = make_grid(2, 32, kTwoPi);
    CutoffProfile c = make_cutoff();
    const double cutoff = default_dealias_cutoff(g);
    BandIndexRange range = band_range(g, c, cutoff);
    SpectralVectorField v0 = flat_field(g, c, range, cutoff, 6, 1);
    scale_field_inplace(v0, 3.0 / sup_norm(v0));

    auto final_at = [&](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.1;
        cfg.record_every = 1 << 20;
        SimulationResult res = simulate(v0, cfg, c);
        expect(!res.blow_up_suspected, "order study run at dt " + fmt(dt) + " blew up");
        return res.final_state.v;
    };
    SpectralVectorField ref = final_at(2.5e-4);
    const double e1 = sup_norm(field_difference(final_at(4e-3), ref));
    const double e2 = sup_norm(field_difference(final_at(2e-3), ref));
    expect(e1 > 0.0 && e2 > 0.0, "order study errors vanished");
    const double order = std::log2(e1 / e2);
    expect(order >= 3.7, "measured order " + fmt(order) + " < 3.7");
    return "final sup error " + fmt(sup_err) + "; measured order " + fmt(order);
}

// --- criterion 7: the small-data ensemble stays controlled -----------------

std::string criterion_small_data_regime() {
    const fs::path dir = fresh_dir("small");
    LoadedConfig lc = load_config_text(R"({
        "kind": "small-data-nse",
        "grid": {"dim": 3, "n": 32, "period": 6.283185307179586},
        "solver": {"dt": 0.01, "t_end": 1.0, "record_every": 10},
        "seed": 5,
        "critical_tiers": [0.1, 0.01, 0.001],
        "tier_seeds": 10,
        "envelope_rate": 0.2
    })", {"output_dir=" + dir.string()});
    const int code = run_experiment(lc);
    expect(code == 0, "small-data run exited " + std::to_string(code) +
                          " (nonzero means suspected blow-up or invariant violation)");

    auto report = nlohmann::json::parse(slurp(dir / "small-data-nse-5-report.json"));
    expect(report.at("blow_ups").get<int>() == 0, "blow-up terminations recorded");

    const auto growth = report.at("tier_max_growth").get<std::vector<double>>();
    expect(growth.size() == 3, "expected three tiers");
    for (double x : growth)
        expect(std::isfinite(x) && x > 0.0, "tier growth bound not finite/positive");
    for (std::size_t i = 1; i < growth.size(); ++i)
        expect(growth[i] <= growth[i - 1] + 1e-9,
               "growth bound increases as data shrink: " + fmt(growth[i - 1]) + " -> " +
                   fmt(growth[i]));

    const auto env = report.at("tier_max_envelope_k").get<std::vector<double>>();
    double worst_k = 0.0;
    for (double k : env) {
        expect(std::isfinite(k), "envelope constant not finite");
        worst_k = std::max(worst_k, k);
    }
    return "30 members, zero blow-ups; growth bounds " + fmt(growth[0]) + " >= " +
           fmt(growth[1]) + " >= " + fmt(growth[2]) + "; max envelope K " + fmt(worst_k);
}

// --- criterion 8: verdict logic over synthetic trajectories ----------------

std::string criterion_verdict_logic() {
    CounterRng rng(404);
    std::uint64_t ctr = 0;
    auto draw = [&] { return rng.uniform01(ctr++); };

    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t samples = 2 + static_cast<std::size_t>(draw() * 10);
        TrajectoryRecord rec;
        rec.range = BandIndexRange{0, 0};
        rec.gamma = 1.5;
        for (std::size_t i = 0; i < samples; ++i) {
            rec.times.push_back(static_cast<double>(i));
            const double crit = 0.01 * std::pow(10.0, 2.0 * draw() - 1.0);  // 1e-3 .. 1e-1
            rec.critical_norms.push_back(crit);
            rec.gamma_norms.push_back(1.0 + draw());
            rec.band_sups.push_back({crit});
        }
        rec.terminated_early = draw() < 0.3;

        const std::size_t a = static_cast<std::size_t>(draw() * samples);
        const std::size_t b = a + static_cast<std::size_t>(draw() * (samples - a));
        const double w0 = rec.times[a], w1 = rec.times[b];

        double sup = 0.0;
        for (std::size_t i = a; i <= b; ++i) sup = std::max(sup, rec.critical_norms[i]);

        const double m0 = 0.01 * std::pow(10.0, 2.0 * draw() - 1.0);
        MonitorReport rep = check_smallness_criterion(rec, m0, w0, w1);

        expect(rep.critical_sup == sup, "reported sup disagrees with the samples");
        expect(rep.smallness_holds == (sup <= m0), "smallness flag inconsistent with sup");
        if (!rep.smallness_holds)
            expect(rep.verdict == Verdict::CriterionViolated, "violation verdict missing");
        else if (rec.terminated_early)
            expect(rep.verdict == Verdict::InconclusiveTruncation, "truncation verdict missing");
        else
            expect(rep.verdict == Verdict::CriterionSatisfied, "satisfied verdict missing");

        // threshold monotonicity: a pass can never turn into a failure as the
        // threshold loosens
        MonitorReport looser = check_smallness_criterion(rec, m0 * (1.0 + draw()), w0, w1);
        if (rep.smallness_holds) expect(looser.smallness_holds, "monotonicity breach");
    }
    return "1000 synthetic trajectories; verdicts consistent and threshold-monotone";
}

// --- criterion 9: reruns are byte-identical -------------------------------

std::string criterion_determinism() {
    struct RunSpec {
        std::string tag;
        std::string config;
        std::string stem;
    };
    const std::vector<RunSpec> specs = {
        {"det-heat", R"({
            "kind": "heat-decay",
            "grid": {"dim": 3, "n": 64, "period": 6.283185307179586},
            "seed": 2,
            "ensemble": 3
        })", "heat-decay-2"},
        {"det-vortex", R"({
            "kind": "taylor-green",
            "grid": {"dim": 2, "n": 64, "period": 6.283185307179586},
            "solver": {"dt": 0.001, "t_end": 1.0, "record_every": 100},
            "seed": 4
        })", "taylor-green-4"},
    };

    std::size_t files = 0;
    for (const auto& spec : specs) {
        const fs::path d1 = fresh_dir(spec.tag + "-1");
        const fs::path d2 = fresh_dir(spec.tag + "-2");

        {
            kernels::ModeGuard guard(kernels::Mode::Parallel);
            omp_set_num_threads(2);
            LoadedConfig lc = load_config_text(spec.config, {"output_dir=" + d1.string()});
            expect(run_experiment(lc) == 0, spec.tag + ": first run failed");
        }
        {
            // different worker count and the serial reference path
            kernels::ModeGuard guard(kernels::Mode::Serial);
            omp_set_num_threads(1);
            LoadedConfig lc = load_config_text(spec.config, {"output_dir=" + d2.string()});
            expect(run_experiment(lc) == 0, spec.tag + ": second run failed");
        }
        omp_set_num_threads(omp_get_num_procs());

        for (const char* suffix : {".csv", "-report.json", "-final.lpns"}) {
            const std::string name = spec.stem + suffix;
            if (!fs::exists(d1 / name)) continue;  // not every kind writes a checkpoint
            expect(fs::exists(d2 / name), name + " missing from the second run");
            expect(slurp(d1 / name) == slurp(d2 / name), name + " differs between runs");
            ++files;
        }
        expect(files > 0, spec.tag + ": no data files compared");
    }
    return std::to_string(files) + " data files byte-identical across modes and worker counts";
}

}  // namespace

int main() {
    struct Criterion {
        int index;
        const char* name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "cutoff profile contract", criterion_cutoff_profile},
        {2, "separated-band orthogonality", criterion_band_orthogonality},
        {3, "interaction-split reconstruction", criterion_split_reconstruction},
        {4, "bilinear bound ensemble", criterion_product_bound_ensemble},
        {5, "heat band decay bracket", criterion_heat_decay},
        {6, "vortex oracle and integrator order", criterion_flow_oracle},
        {7, "small-data control", criterion_small_data_regime},
        {8, "verdict logic", criterion_verdict_logic},
        {9, "byte-identical reruns", criterion_determinism},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        const auto started = std::chrono::steady_clock::now();
        std::string outcome;
        bool ok = true;
        try {
            outcome = crit.run();
        } catch (const Failure& f) {
            ok = false;
            outcome = f.detail;
        } catch (const std::exception& e) {
            ok = false;
            outcome = std::string("unexpected exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << crit.index << ". " << crit.name << " ("
                  << std::fixed << std::setprecision(1) << secs << "s): " << outcome << "\n";
        std::cout.flags(std::ios::fmtflags{});
        if (!ok) ++failures;
    }
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                                : "ACCEPTANCE: " + std::to_string(failures) + " criteria failed")
              << "\n";
    return failures;
}
