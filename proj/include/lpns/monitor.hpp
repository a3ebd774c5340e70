#pragma once

// Trajectory bookkeeping and the regularity verdict machinery: the critical
// dyadic norm, windowed smallness checks, growth audits of the smooth norm,
// and per-band decay envelopes.

#include <string>
#include <vector>

#include "lpns/bands.hpp"
#include "lpns/field.hpp"

namespace lpns {

/// Norm history of one simulated flow, sampled at recording times.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> critical_norms;          // sup_j 2^{-j} ||band(j) v||_inf
    std::vector<double> gamma_norms;             // sup_j 2^{gamma j} ||band(j) v||_inf
    std::vector<std::vector<double>> band_sups;  // [sample][j - range.j_min]
    BandIndexRange range;
    double gamma = 1.5;
    bool terminated_early = false;  // nonfinite state appeared before the end time

    std::size_t sample_count() const { return times.size(); }
};

/// Dyadic sup-norm of order -1 (the scale-critical one for the viscous flow).
double critical_norm(const SpectralVectorField& v, const CutoffProfile& c,
                     const BandIndexRange& range);

enum class Verdict { CriterionSatisfied, CriterionViolated, InconclusiveTruncation };

std::string verdict_string(Verdict v);

/// Outcome of the smallness-implies-control check over a time window.
struct MonitorReport {
    double m0 = 0.0;
    bool smallness_holds = false;
    double window_start = 0.0;
    double window_end = 0.0;
    double critical_sup = 0.0;          // sup of the critical norm over the window
    double gamma_growth_factor = 0.0;   // sup over window of gamma_norm(t) / gamma_norm(start)
    Verdict verdict = Verdict::InconclusiveTruncation;
};

std::string to_json_string(const MonitorReport& report);

/// Evaluates the smallness hypothesis sup_window critical <= m0 and issues a
/// verdict: violated when smallness fails, inconclusive when the trajectory
/// ended early (nonfinite state), satisfied otherwise. The window must lie
/// inside the recorded span and contain at least one sample.
MonitorReport check_smallness_criterion(const TrajectoryRecord& rec, double m0,
                                        double window_start, double window_end);

/// Growth of the smooth norm over the whole record.
struct GrowthAudit {
    double initial_gamma_norm = 0.0;
    double max_gamma_norm = 0.0;
    double growth_factor = 0.0;  // max over samples of gamma_norm(t) / gamma_norm(0)
};

/// Throws std::runtime_error when the smooth norm starts at zero but becomes
/// nonzero later (no finite factor exists); an identically zero record has
/// growth factor 1.
GrowthAudit growth_audit(const TrajectoryRecord& rec);

/// Minimal K such that for every recorded sample t (tau = t - t_first)
///   band_sup_j(t) <= K * ( e^{-c 4^j tau} band_sup_j(t_first)
///                        + (1 - e^{-c 4^j tau}) 2^{-gamma j}
///                          * max_{s<=t} critical(s) * max_{s<=t} gamma_norm(s) )
/// Returns +inf when the envelope vanishes against a nonzero band value.
double band_envelope_audit(const TrajectoryRecord& rec, int j, double c_const);

}  // namespace lpns
