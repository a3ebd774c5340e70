#include "lpns/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "lpns/checkpoint.hpp"
#include "lpns/heat.hpp"
#include "lpns/kernels.hpp"
#include "lpns/monitor.hpp"
#include "lpns/paraproduct.hpp"
#include "lpns/random_field.hpp"

namespace lpns {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------- config ---

const std::map<std::string, ExperimentKind>& kind_table() {
    static const std::map<std::string, ExperimentKind> table = {
        {"lemma1-ensemble", ExperimentKind::ProductBoundEnsemble},
        {"heat-decay", ExperimentKind::HeatDecay},
        {"taylor-green", ExperimentKind::TaylorGreen},
        {"small-data-nse", ExperimentKind::SmallDataFlow},
        {"theorem1-window", ExperimentKind::SmallnessWindow},
    };
    return table;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key.path=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("override path has an empty segment: " + assignment);
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

template <class T>
T take(json& obj, const std::string& key, const T& fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        T out = obj.at(key).get<T>();
        obj.erase(key);
        return out;
    } catch (const json::exception&) {
        throw ConfigError("config key has the wrong type: " + key);
    }
}

void expect_empty(const json& obj, const std::string& where) {
    if (obj.empty()) return;
    std::string keys;
    for (const auto& [k, v] : obj.items()) {
        (void)v;
        if (!keys.empty()) keys += ", ";
        keys += k;
    }
    throw ConfigError("unknown config key(s) in " + where + ": " + keys);
}

ExperimentConfig config_from_json(json doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    ExperimentConfig cfg;

    if (!doc.contains("kind")) throw ConfigError("config is missing the required key: kind");
    cfg.kind = kind_from_string(take<std::string>(doc, "kind", ""));

    json grid = take<json>(doc, "grid", json::object());
    if (!grid.is_object()) throw ConfigError("config key grid must be an object");
    cfg.dim = take<int>(grid, "dim", cfg.dim);
    cfg.n = take<int>(grid, "n", cfg.n);
    cfg.period = take<double>(grid, "period", cfg.period);
    expect_empty(grid, "grid");

    json solver = take<json>(doc, "solver", json::object());
    if (!solver.is_object()) throw ConfigError("config key solver must be an object");
    cfg.solver.dt = take<double>(solver, "dt", cfg.solver.dt);
    cfg.solver.t_end = take<double>(solver, "t_end", cfg.solver.t_end);
    cfg.solver.dealias_fraction = take<double>(solver, "dealias_fraction", cfg.solver.dealias_fraction);
    cfg.solver.record_every = take<int>(solver, "record_every", cfg.solver.record_every);
    cfg.solver.nonlinear = take<bool>(solver, "nonlinear", cfg.solver.nonlinear);
    expect_empty(solver, "solver");

    cfg.seed = take<std::uint64_t>(doc, "seed", cfg.seed);
    cfg.ensemble = take<int>(doc, "ensemble", cfg.ensemble);
    cfg.gamma = take<double>(doc, "gamma", cfg.gamma);
    cfg.m0 = take<double>(doc, "m0", cfg.m0);

    json window = take<json>(doc, "window", json::array());
    if (!window.is_array() || (window.size() != 0 && window.size() != 2))
        throw ConfigError("config key window must be [t_start, t_end]");
    if (window.size() == 2) {
        cfg.window_start = window[0].get<double>();
        cfg.window_end = window[1].get<double>();
    }

    cfg.heat_times = take<std::vector<double>>(doc, "heat_times", cfg.heat_times);
    cfg.critical_tiers = take<std::vector<double>>(doc, "critical_tiers", cfg.critical_tiers);
    cfg.tier_seeds = take<int>(doc, "tier_seeds", cfg.tier_seeds);
    cfg.envelope_rate = take<double>(doc, "envelope_rate", cfg.envelope_rate);
    cfg.output_dir = take<std::string>(doc, "output_dir", cfg.output_dir.string());

    json targets = take<json>(doc, "band_targets", json::array());
    if (!targets.is_array()) throw ConfigError("config key band_targets must be an array");
    for (const auto& entry : targets) {
        if (!entry.is_array() || entry.size() != 2)
            throw ConfigError("band_targets entries must be [band, target] pairs");
        cfg.band_targets.emplace_back(entry[0].get<int>(), entry[1].get<double>());
    }

    expect_empty(doc, "config root");
    return cfg;
}

struct Resolved {
    Grid grid;
    CutoffProfile cutoff;
    double dealias = 0.0;
    BandIndexRange range;
};

/// Validates grid/solver parameters and fills grid-dependent defaults
/// (band_targets, window). Throws ConfigError on any invalid value.
Resolved resolve(ExperimentConfig& cfg) {
    Resolved r;
    try {
        r.grid = make_grid(cfg.dim, cfg.n, cfg.period);
        r.cutoff = make_cutoff();
        r.dealias = default_dealias_cutoff(r.grid, cfg.solver.dealias_fraction);
        r.range = band_range(r.grid, r.cutoff, r.dealias);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (!(cfg.solver.dt > 0.0)) throw ConfigError("solver.dt must be positive");
    if (!(cfg.solver.t_end >= 0.0)) throw ConfigError("solver.t_end must be nonnegative");
    if (cfg.solver.record_every < 1) throw ConfigError("solver.record_every must be >= 1");
    if (!(cfg.gamma > 1.0)) throw ConfigError("gamma must exceed 1");
    if (!(cfg.m0 > 0.0)) throw ConfigError("m0 must be positive");
    if (cfg.ensemble < 1) throw ConfigError("ensemble must be >= 1");
    if (cfg.tier_seeds < 1) throw ConfigError("tier_seeds must be >= 1");
    if (!(cfg.envelope_rate > 0.0)) throw ConfigError("envelope_rate must be positive");
    for (double t : cfg.heat_times)
        if (!(t > 0.0)) throw ConfigError("heat_times entries must be positive");
    for (double tier : cfg.critical_tiers)
        if (!(tier > 0.0)) throw ConfigError("critical_tiers entries must be positive");
    cfg.solver.gamma = cfg.gamma;

    if (cfg.window_start < 0.0) cfg.window_start = cfg.solver.t_end / 2.0;
    if (cfg.window_end < 0.0) cfg.window_end = cfg.solver.t_end;
    if (!(cfg.window_start <= cfg.window_end) || cfg.window_end > cfg.solver.t_end)
        throw ConfigError("window must satisfy 0 <= start <= end <= t_end");

    if (cfg.band_targets.empty()) {
        // Flat unit targets, leaving the top band as headroom for products.
        const int top = std::max(r.range.j_min, r.range.j_max - 1);
        for (int j = r.range.j_min; j <= top; ++j) cfg.band_targets.emplace_back(j, 1.0);
    }
    for (const auto& [j, target] : cfg.band_targets) {
        if (!r.range.contains(j))
            throw ConfigError("band_targets references band " + std::to_string(j) +
                              " outside the resolvable range");
        if (!(target > 0.0)) throw ConfigError("band_targets targets must be positive");
    }
    if (cfg.kind == ExperimentKind::TaylorGreen && cfg.dim != 2)
        throw ConfigError("taylor-green requires grid.dim = 2 (exact oracle is planar)");
    return r;
}

json canonical_json(const ExperimentConfig& cfg) {
    json doc;  // std::map storage: keys serialize sorted
    doc["kind"] = kind_string(cfg.kind);
    doc["grid"] = {{"dim", cfg.dim}, {"n", cfg.n}, {"period", cfg.period}};
    doc["solver"] = {{"dt", cfg.solver.dt},
                     {"t_end", cfg.solver.t_end},
                     {"dealias_fraction", cfg.solver.dealias_fraction},
                     {"record_every", cfg.solver.record_every},
                     {"nonlinear", cfg.solver.nonlinear}};
    doc["seed"] = cfg.seed;
    doc["ensemble"] = cfg.ensemble;
    doc["gamma"] = cfg.gamma;
    doc["m0"] = cfg.m0;
    doc["window"] = {cfg.window_start, cfg.window_end};
    doc["heat_times"] = cfg.heat_times;
    doc["critical_tiers"] = cfg.critical_tiers;
    doc["tier_seeds"] = cfg.tier_seeds;
    json targets = json::array();
    for (const auto& [j, target] : cfg.band_targets) targets.push_back({j, target});
    doc["band_targets"] = targets;
    doc["envelope_rate"] = cfg.envelope_rate;
    // output_dir is deliberately omitted: the hash identifies the computation,
    // and reruns into different directories must produce identical artifacts.
    return doc;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ------------------------------------------------------------- artifacts ---

struct RunPaths {
    fs::path csv;
    fs::path report;
    fs::path meta;
    fs::path checkpoint;
};

RunPaths run_paths(const ExperimentConfig& cfg) {
    const std::string stem = kind_string(cfg.kind) + "-" + csv::format_u64(cfg.seed);
    RunPaths p;
    p.csv = cfg.output_dir / (stem + ".csv");
    p.report = cfg.output_dir / (stem + "-report.json");
    p.meta = cfg.output_dir / (stem + "-meta.json");
    p.checkpoint = cfg.output_dir / (stem + "-final.lpns");
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << text;
    if (!text.empty() && text.back() != '\n') os << '\n';
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_meta(const LoadedConfig& lc, const RunPaths& paths) {
    ordered_json meta;
    meta["kind"] = kind_string(lc.config.kind);
    meta["seed"] = lc.config.seed;
    meta["config_hash"] = lc.hash;
    meta["rng_algorithm"] = kRngAlgorithmId;
#ifdef _OPENMP
    meta["workers"] = omp_get_max_threads();
#else
    meta["workers"] = 1;
#endif
    meta["kernels_mode"] = kernels::mode() == kernels::Mode::Parallel ? "parallel" : "serial";
    meta["timestamp_utc"] = utc_timestamp();
    meta["config"] = json::parse(lc.canonical_json);
    write_text(paths.meta, meta.dump(2));
}

void write_report(const RunPaths& paths, const ordered_json& report) {
    write_text(paths.report, report.dump(2));
}

// Rows produced by concurrent members, ordered by (seed, j, t) before writing
// so the worker count never changes bytes.
struct KeyedRow {
    std::uint64_t seed = 0;
    int j = 0;
    double t = 0.0;
    std::vector<std::string> cells;
};

void sort_rows(std::vector<KeyedRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const KeyedRow& a, const KeyedRow& b) {
        if (a.seed != b.seed) return a.seed < b.seed;
        if (a.j != b.j) return a.j < b.j;
        return a.t < b.t;
    });
}

/// Runs one member per index with OpenMP workers; exceptions are carried back
/// to the calling thread (the first by index wins).
template <class F>
void run_members(std::size_t count, F&& member) {
    std::vector<std::string> errors(count);
    kernels::for_each_index(count, [&](std::size_t i) {
        try {
            member(i);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        } catch (...) {
            errors[i] = "unknown error";
        }
    });
    for (const auto& err : errors)
        if (!err.empty()) throw std::runtime_error("ensemble member failed: " + err);
}

// ----------------------------------------------------------- experiments ---

int run_product_ensemble(const LoadedConfig& lc, const Resolved& r, const RunPaths& paths) {
    const ExperimentConfig& cfg = lc.config;
    const std::size_t members = static_cast<std::size_t>(cfg.ensemble);
    std::vector<std::vector<ProductBoundReport>> slots(members);
    std::vector<std::uint64_t> member_seeds(members);

    const CounterRng seeder(cfg.seed);
    for (std::size_t i = 0; i < members; ++i) member_seeds[i] = seeder.at(i);

    run_members(members, [&](std::size_t i) {
        RandomFieldSpec spec{cfg.band_targets, member_seeds[i]};
        const SpectralVectorField v =
            random_divfree_field(r.grid, spec, r.cutoff, r.range, r.dealias);
        slots[i] = product_bound_scan(v, r.cutoff, cfg.gamma, r.range, r.dealias);
    });

    std::vector<KeyedRow> rows;
    rows.reserve(members * static_cast<std::size_t>(r.range.count()));
    bool all_finite_ratios = true;
    std::vector<double> per_j_max(static_cast<std::size_t>(r.range.count()), 0.0);
    for (std::size_t i = 0; i < members; ++i) {
        for (const auto& rep : slots[i]) {
            all_finite_ratios = all_finite_ratios && std::isfinite(rep.ratio);
            auto& slot_max = per_j_max[static_cast<std::size_t>(rep.j - r.range.j_min)];
            slot_max = std::max(slot_max, rep.ratio);
            rows.push_back({member_seeds[i], rep.j, 0.0,
                            {csv::format_u64(member_seeds[i]), csv::format_int(rep.j),
                             csv::format_double(rep.gamma), csv::format_double(rep.lhs),
                             csv::format_double(rep.rhs_factor), csv::format_double(rep.ratio),
                             lc.hash}});
        }
    }
    sort_rows(rows);

    csv::Table table;
    table.header = {"seed", "j", "gamma", "lhs", "rhs_factor", "ratio", "config_hash"};
    for (auto& row : rows) table.append(std::move(row.cells));
    table.write(paths.csv);

    const double global_max = *std::max_element(per_j_max.begin(), per_j_max.end());
    const double per_j_min = *std::min_element(per_j_max.begin(), per_j_max.end());

    ordered_json report;
    report["kind"] = kind_string(cfg.kind);
    report["seed"] = cfg.seed;
    report["config_hash"] = lc.hash;
    report["ensemble"] = cfg.ensemble;
    report["range"] = {{"j_min", r.range.j_min}, {"j_max", r.range.j_max}};
    report["rows"] = rows.size();
    report["per_j_max_ratio"] = per_j_max;
    report["global_max_ratio"] = global_max;
    report["per_j_spread_factor"] = per_j_min > 0.0 ? global_max / per_j_min : 0.0;
    report["all_ratios_finite"] = all_finite_ratios;
    write_report(paths, report);
    return all_finite_ratios ? 0 : 3;
}

int run_heat_decay(const LoadedConfig& lc, const Resolved& r, const RunPaths& paths) {
    const ExperimentConfig& cfg = lc.config;
    const std::size_t members = static_cast<std::size_t>(cfg.ensemble);
    std::vector<std::vector<DecayFit>> slots(members);
    std::vector<std::uint64_t> member_seeds(members);

    const CounterRng seeder(cfg.seed);
    for (std::size_t i = 0; i < members; ++i) member_seeds[i] = seeder.at(i);

    // Full-range targets so every band carries content to measure.
    std::vector<std::pair<int, double>> targets;
    for (int j = r.range.j_min; j <= r.range.j_max; ++j) targets.emplace_back(j, 1.0);

    run_members(members, [&](std::size_t i) {
        RandomFieldSpec spec{targets, member_seeds[i]};
        const SpectralVectorField v =
            random_divfree_field(r.grid, spec, r.cutoff, r.range, r.dealias);
        for (int j = r.range.j_min; j <= r.range.j_max; ++j)
            for (double t : cfg.heat_times)
                slots[i].push_back(band_decay_check(v, r.cutoff, j, t, r.range));
    });

    std::vector<KeyedRow> rows;
    bool all_finite_fits = true;
    double c_min = std::numeric_limits<double>::infinity();
    double c_max = 0.0;
    for (std::size_t i = 0; i < members; ++i) {
        for (const auto& fit : slots[i]) {
            all_finite_fits = all_finite_fits && std::isfinite(fit.fitted_c);
            c_min = std::min(c_min, fit.fitted_c);
            c_max = std::max(c_max, fit.fitted_c);
            rows.push_back({member_seeds[i], fit.j, fit.t,
                            {csv::format_u64(member_seeds[i]), csv::format_int(fit.j),
                             csv::format_double(fit.t), csv::format_double(fit.observed_ratio),
                             csv::format_double(fit.fitted_c), lc.hash}});
        }
    }
    sort_rows(rows);

    csv::Table table;
    table.header = {"seed", "j", "t", "observed_ratio", "fitted_c", "config_hash"};
    for (auto& row : rows) table.append(std::move(row.cells));
    table.write(paths.csv);

    ordered_json report;
    report["kind"] = kind_string(cfg.kind);
    report["seed"] = cfg.seed;
    report["config_hash"] = lc.hash;
    report["rows"] = rows.size();
    report["fitted_c_min"] = c_min;
    report["fitted_c_max"] = c_max;
    report["all_fits_finite"] = all_finite_fits;
    write_report(paths, report);
    return all_finite_fits ? 0 : 3;
}

std::vector<std::string> trajectory_header(const BandIndexRange& range, bool with_sup_error) {
    std::vector<std::string> header = {"t", "critical_norm", "gamma_norm"};
    for (int j = range.j_min; j <= range.j_max; ++j)
        header.push_back("band_" + std::to_string(j));
    if (with_sup_error) header.push_back("sup_error");
    header.push_back("seed");
    header.push_back("config_hash");
    return header;
}

csv::Table trajectory_table(const TrajectoryRecord& rec, const std::vector<double>* sup_errors,
                            std::uint64_t seed, const std::string& hash) {
    csv::Table table;
    table.header = trajectory_header(rec.range, sup_errors != nullptr);
    for (std::size_t i = 0; i < rec.sample_count(); ++i) {
        std::vector<std::string> row = {csv::format_double(rec.times[i]),
                                        csv::format_double(rec.critical_norms[i]),
                                        csv::format_double(rec.gamma_norms[i])};
        for (double b : rec.band_sups[i]) row.push_back(csv::format_double(b));
        if (sup_errors) row.push_back(csv::format_double((*sup_errors)[i]));
        row.push_back(csv::format_u64(seed));
        row.push_back(hash);
        table.append(std::move(row));
    }
    return table;
}

bool record_is_finite(const TrajectoryRecord& rec) {
    const auto ok = [](double x) { return std::isfinite(x); };
    for (std::size_t i = 0; i < rec.sample_count(); ++i) {
        if (!ok(rec.times[i]) || !ok(rec.critical_norms[i]) || !ok(rec.gamma_norms[i]))
            return false;
        for (double b : rec.band_sups[i])
            if (!ok(b)) return false;
    }
    return true;
}

int run_taylor_green(const LoadedConfig& lc, const Resolved& r, const RunPaths& paths) {
    const ExperimentConfig& cfg = lc.config;
    if (cfg.dim != 2)
        throw ConfigError("taylor-green requires grid.dim = 2 (exact oracle is planar)");

    const SpectralVectorField u0 = taylor_green_field(r.grid);
    const double k2 = r.grid.wavenumber_step() * r.grid.wavenumber_step();

    std::vector<double> sup_errors;
    const SampleObserver observer = [&](const SolverState& s) {
        SpectralVectorField exact = u0;
        scale_field_inplace(exact, std::exp(-2.0 * k2 * s.t));
        sup_errors.push_back(sup_norm(field_difference(s.v, exact)));
    };

    const SimulationResult sim = simulate(u0, cfg.solver, r.cutoff, observer);

    trajectory_table(sim.record, &sup_errors, cfg.seed, lc.hash).write(paths.csv);
    write_checkpoint(paths.checkpoint, to_physical(sim.final_state.v));

    const DivergenceReport div = divergence_report(sim.final_state.v);
    ordered_json report;
    report["kind"] = kind_string(cfg.kind);
    report["seed"] = cfg.seed;
    report["config_hash"] = lc.hash;
    report["final_time"] = sim.final_state.t;
    report["sup_error_final"] = sup_errors.empty() ? -1.0 : sup_errors.back();
    report["critical_norm_final"] = sim.record.critical_norms.back();
    report["divergence_relative"] = div.relative();
    report["blow_up_suspected"] = sim.blow_up_suspected;
    write_report(paths, report);

    if (!record_is_finite(sim.record) || div.relative() > 1e-8) return 3;
    return sim.blow_up_suspected ? 2 : 0;
}

/// Shared by the small-data and smallness-window kinds: a random field with
/// flat band targets, scaled so its critical norm equals `critical_target`.
SpectralVectorField scaled_random_data(const Resolved& r, const ExperimentConfig& cfg,
                                       std::uint64_t member_seed, double critical_target) {
    RandomFieldSpec spec{cfg.band_targets, member_seed};
    SpectralVectorField v = random_divfree_field(r.grid, spec, r.cutoff, r.range, r.dealias);
    const double crit = critical_norm(v, r.cutoff, r.range);
    if (crit == 0.0) throw std::runtime_error("random data has zero critical norm");
    scale_field_inplace(v, critical_target / crit);
    return v;
}

int run_small_data(const LoadedConfig& lc, const Resolved& r, const RunPaths& paths) {
    const ExperimentConfig& cfg = lc.config;
    const std::size_t tiers = cfg.critical_tiers.size();
    const std::size_t per_tier = static_cast<std::size_t>(cfg.tier_seeds);
    const std::size_t members = tiers * per_tier;
    if (members == 0) throw ConfigError("small-data-nse needs critical_tiers and tier_seeds");

    struct MemberOutcome {
        std::uint64_t seed = 0;
        double tier = 0.0;
        double critical_initial = 0.0;
        double critical_sup = 0.0;
        double growth = 0.0;
        double max_envelope_k = 0.0;
        bool blow_up = false;
    };
    std::vector<MemberOutcome> outcomes(members);
    const CounterRng seeder(cfg.seed);

    run_members(members, [&](std::size_t i) {
        MemberOutcome& out = outcomes[i];
        out.tier = cfg.critical_tiers[i / per_tier];
        out.seed = seeder.at(i);
        const SpectralVectorField v0 = scaled_random_data(r, cfg, out.seed, out.tier);
        const SimulationResult sim = simulate(v0, cfg.solver, r.cutoff);

        out.blow_up = sim.blow_up_suspected;
        out.critical_initial = sim.record.critical_norms.front();
        out.critical_sup =
            *std::max_element(sim.record.critical_norms.begin(), sim.record.critical_norms.end());
        out.growth = growth_audit(sim.record).growth_factor;
        for (int j = sim.record.range.j_min; j <= sim.record.range.j_max; ++j)
            out.max_envelope_k =
                std::max(out.max_envelope_k, band_envelope_audit(sim.record, j, cfg.envelope_rate));
    });

    std::vector<KeyedRow> rows;
    for (const auto& out : outcomes)
        rows.push_back({out.seed, 0, 0.0,
                        {csv::format_u64(out.seed), csv::format_double(out.tier),
                         csv::format_double(out.critical_initial),
                         csv::format_double(out.critical_sup), csv::format_double(out.growth),
                         csv::format_double(out.max_envelope_k),
                         out.blow_up ? "1" : "0", lc.hash}});
    sort_rows(rows);

    csv::Table table;
    table.header = {"seed",   "tier",       "critical_initial", "critical_sup",
                    "growth", "max_env_k",  "blow_up",          "config_hash"};
    for (auto& row : rows) table.append(std::move(row.cells));
    table.write(paths.csv);

    // Per-tier maxima in the declared tier order.
    std::vector<double> tier_max_growth(tiers, 0.0);
    std::vector<double> tier_max_k(tiers, 0.0);
    int blow_ups = 0;
    bool all_finite_outcomes = true;
    for (std::size_t i = 0; i < members; ++i) {
        const std::size_t tier_idx = i / per_tier;
        tier_max_growth[tier_idx] = std::max(tier_max_growth[tier_idx], outcomes[i].growth);
        tier_max_k[tier_idx] = std::max(tier_max_k[tier_idx], outcomes[i].max_envelope_k);
        blow_ups += outcomes[i].blow_up ? 1 : 0;
        all_finite_outcomes = all_finite_outcomes && std::isfinite(outcomes[i].growth) &&
                              std::isfinite(outcomes[i].max_envelope_k);
    }

    ordered_json report;
    report["kind"] = kind_string(cfg.kind);
    report["seed"] = cfg.seed;
    report["config_hash"] = lc.hash;
    report["tiers"] = cfg.critical_tiers;
    report["tier_max_growth"] = tier_max_growth;
    report["tier_max_envelope_k"] = tier_max_k;
    report["blow_ups"] = blow_ups;
    report["all_outcomes_finite"] = all_finite_outcomes;
    write_report(paths, report);

    if (!all_finite_outcomes) return 3;
    return blow_ups > 0 ? 2 : 0;
}

int run_smallness_window(const LoadedConfig& lc, const Resolved& r, const RunPaths& paths) {
    const ExperimentConfig& cfg = lc.config;

    // Data placed strictly inside the smallness threshold; the run then tests
    // whether the windowed criterion machinery confirms it.
    const SpectralVectorField v0 = scaled_random_data(r, cfg, cfg.seed, cfg.m0 / 2.0);
    const SimulationResult sim = simulate(v0, cfg.solver, r.cutoff);

    trajectory_table(sim.record, nullptr, cfg.seed, lc.hash).write(paths.csv);
    write_checkpoint(paths.checkpoint, to_physical(sim.final_state.v));

    const double w_end = std::min(cfg.window_end, sim.record.times.back());
    const double w_start = std::min(cfg.window_start, w_end);
    const MonitorReport mon = check_smallness_criterion(sim.record, cfg.m0, w_start, w_end);

    ordered_json report = ordered_json::parse(to_json_string(mon));
    report["kind"] = kind_string(cfg.kind);
    report["seed"] = cfg.seed;
    report["config_hash"] = lc.hash;
    report["terminated_early"] = sim.record.terminated_early;
    write_report(paths, report);

    if (!record_is_finite(sim.record)) return 3;
    return sim.blow_up_suspected ? 2 : 0;
}

}  // namespace

// ------------------------------------------------------------ public api ---

std::string kind_string(ExperimentKind k) {
    for (const auto& [name, kind] : kind_table())
        if (kind == k) return name;
    throw std::logic_error("kind_string: unknown experiment kind");
}

ExperimentKind kind_from_string(const std::string& s) {
    const auto it = kind_table().find(s);
    if (it == kind_table().end()) throw ConfigError("unknown experiment kind: " + s);
    return it->second;
}

LoadedConfig load_config_text(const std::string& json_text,
                              const std::vector<std::string>& overrides) {
    json doc = parse_json_text(json_text);
    for (const auto& assignment : overrides) apply_override(doc, assignment);

    LoadedConfig lc;
    lc.config = config_from_json(std::move(doc));
    resolve(lc.config);
    lc.canonical_json = canonical_json(lc.config).dump();
    lc.hash = fnv1a_hex(lc.canonical_json);
    return lc;
}

LoadedConfig load_config(const std::filesystem::path& file,
                         const std::vector<std::string>& overrides) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw ConfigError("cannot open config file: " + file.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return load_config_text(ss.str(), overrides);
}

int run_experiment(const LoadedConfig& lc) {
    ExperimentConfig cfg = lc.config;
    const Resolved r = resolve(cfg);
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw ConfigError("cannot create output_dir: " + cfg.output_dir.string());

    const RunPaths paths = run_paths(cfg);
    const LoadedConfig resolved_lc{cfg, lc.canonical_json, lc.hash};

    int code = 0;
    switch (cfg.kind) {
        case ExperimentKind::ProductBoundEnsemble:
            code = run_product_ensemble(resolved_lc, r, paths);
            break;
        case ExperimentKind::HeatDecay:
            code = run_heat_decay(resolved_lc, r, paths);
            break;
        case ExperimentKind::TaylorGreen:
            code = run_taylor_green(resolved_lc, r, paths);
            break;
        case ExperimentKind::SmallDataFlow:
            code = run_small_data(resolved_lc, r, paths);
            break;
        case ExperimentKind::SmallnessWindow:
            code = run_smallness_window(resolved_lc, r, paths);
            break;
    }
    write_meta(resolved_lc, paths);
    return code;
}

std::string fit_constants(const std::vector<csv::Table>& tables) {
    std::map<int, double> product_max;
    std::map<int, std::pair<double, double>> decay_range;
    std::size_t product_rows = 0;
    std::size_t decay_rows = 0;

    for (const auto& t : tables) {
        if (t.has_column("ratio") && t.has_column("rhs_factor")) {
            const std::size_t cj = t.column("j");
            const std::size_t cr = t.column("ratio");
            for (const auto& row : t.rows) {
                const int j = static_cast<int>(csv::parse_double(row.at(cj)));
                const double ratio = csv::parse_double(row.at(cr));
                auto [it, fresh] = product_max.try_emplace(j, ratio);
                if (!fresh) it->second = std::max(it->second, ratio);
                ++product_rows;
            }
        } else if (t.has_column("fitted_c")) {
            const std::size_t cj = t.column("j");
            const std::size_t cc = t.column("fitted_c");
            for (const auto& row : t.rows) {
                const int j = static_cast<int>(csv::parse_double(row.at(cj)));
                const double c = csv::parse_double(row.at(cc));
                auto [it, fresh] = decay_range.try_emplace(j, std::make_pair(c, c));
                if (!fresh) {
                    it->second.first = std::min(it->second.first, c);
                    it->second.second = std::max(it->second.second, c);
                }
                ++decay_rows;
            }
        } else {
            throw std::runtime_error("fit-constants: unrecognized table schema");
        }
    }

    ordered_json out;
    if (product_rows > 0) {
        ordered_json per_j;
        double global = 0.0;
        double j_min_max = std::numeric_limits<double>::infinity();
        for (const auto& [j, maxr] : product_max) {
            per_j[std::to_string(j)] = maxr;
            global = std::max(global, maxr);
            j_min_max = std::min(j_min_max, maxr);
        }
        out["product_bound"] = {{"rows", product_rows},
                                {"per_j_max_ratio", per_j},
                                {"global_max_ratio", global},
                                {"per_j_spread_factor", j_min_max > 0.0 ? global / j_min_max : 0.0}};
    }
    if (decay_rows > 0) {
        ordered_json per_j;
        double cmin = std::numeric_limits<double>::infinity();
        double cmax = 0.0;
        for (const auto& [j, range] : decay_range) {
            per_j[std::to_string(j)] = {{"min", range.first}, {"max", range.second}};
            cmin = std::min(cmin, range.first);
            cmax = std::max(cmax, range.second);
        }
        out["band_decay"] = {{"rows", decay_rows},
                             {"per_j_fitted_c", per_j},
                             {"fitted_c_min", cmin},
                             {"fitted_c_max", cmax}};
    }
    return out.dump(2);
}

SpectralVectorField taylor_green_field(const Grid& g) {
    if (g.dim() != 2) throw std::invalid_argument("taylor_green_field: requires dim == 2");
    RealVectorField u(g);
    const int n = g.points_per_axis();
    const double h = g.period() / n;
    const double k = g.wavenumber_step();
    auto u1 = u.component(0);
    auto u2 = u.component(1);
    kernels::for_each_index(g.value_count(), [&](std::size_t idx) {
        const double x1 = h * g.axis_raw_index(idx, 0);
        const double x2 = h * g.axis_raw_index(idx, 1);
        u1[idx] = std::sin(k * x1) * std::cos(k * x2);
        u2[idx] = -std::cos(k * x1) * std::sin(k * x2);
    });
    return to_spectral(u);
}

}  // namespace lpns
