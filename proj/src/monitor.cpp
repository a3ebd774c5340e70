#include "lpns/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace lpns {
namespace {

void require_consistent(const TrajectoryRecord& rec) {
    const std::size_t n = rec.times.size();
    if (n == 0) throw std::invalid_argument("trajectory record holds no samples");
    if (rec.critical_norms.size() != n || rec.gamma_norms.size() != n ||
        rec.band_sups.size() != n)
        throw std::invalid_argument("trajectory record columns disagree in length");
}

double growth_factor_over(const std::vector<double>& gamma_norms, std::size_t first,
                          std::size_t last) {
    const double g0 = gamma_norms[first];
    double gmax = 0.0;
    for (std::size_t i = first; i <= last; ++i) gmax = std::max(gmax, gamma_norms[i]);
    if (g0 == 0.0) {
        if (gmax == 0.0) return 1.0;
        throw std::runtime_error("growth audit: smooth norm starts at zero but grows");
    }
    return gmax / g0;
}

}  // namespace

double critical_norm(const SpectralVectorField& v, const CutoffProfile& c,
                     const BandIndexRange& range) {
    return besov_norm(v, c, -1.0, range);
}

std::string verdict_string(Verdict v) {
    switch (v) {
        case Verdict::CriterionSatisfied: return "criterion-satisfied";
        case Verdict::CriterionViolated: return "criterion-violated";
        case Verdict::InconclusiveTruncation: return "inconclusive-truncation";
    }
    throw std::logic_error("verdict_string: unknown verdict");
}

std::string to_json_string(const MonitorReport& r) {
    nlohmann::ordered_json j;
    j["m0"] = r.m0;
    j["smallness_holds"] = r.smallness_holds;
    j["window"] = {r.window_start, r.window_end};
    j["critical_sup"] = r.critical_sup;
    j["gamma_growth_factor"] = r.gamma_growth_factor;
    j["verdict"] = verdict_string(r.verdict);
    return j.dump(2);
}

MonitorReport check_smallness_criterion(const TrajectoryRecord& rec, double m0,
                                        double window_start, double window_end) {
    require_consistent(rec);
    if (!(m0 > 0.0)) throw std::invalid_argument("smallness threshold must be positive");
    if (!(window_start <= window_end))
        throw std::invalid_argument("smallness window is reversed");
    if (window_start < rec.times.front() - 1e-12 || window_end > rec.times.back() + 1e-12)
        throw std::invalid_argument("smallness window lies outside the recorded span");

    std::size_t first = rec.times.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        if (rec.times[i] >= window_start - 1e-12 && rec.times[i] <= window_end + 1e-12) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (first > last) throw std::invalid_argument("smallness window contains no samples");

    MonitorReport report;
    report.m0 = m0;
    report.window_start = window_start;
    report.window_end = window_end;
    report.critical_sup = 0.0;
    for (std::size_t i = first; i <= last; ++i)
        report.critical_sup = std::max(report.critical_sup, rec.critical_norms[i]);
    report.smallness_holds = report.critical_sup <= m0;
    report.gamma_growth_factor =
        growth_factor_over(rec.gamma_norms, 0, rec.gamma_norms.size() - 1);

    if (!report.smallness_holds)
        report.verdict = Verdict::CriterionViolated;
    else if (rec.terminated_early)
        report.verdict = Verdict::InconclusiveTruncation;
    else
        report.verdict = Verdict::CriterionSatisfied;
    return report;
}

GrowthAudit growth_audit(const TrajectoryRecord& rec) {
    require_consistent(rec);
    GrowthAudit audit;
    audit.initial_gamma_norm = rec.gamma_norms.front();
    audit.max_gamma_norm = *std::max_element(rec.gamma_norms.begin(), rec.gamma_norms.end());
    audit.growth_factor = growth_factor_over(rec.gamma_norms, 0, rec.gamma_norms.size() - 1);
    return audit;
}

double band_envelope_audit(const TrajectoryRecord& rec, int j, double c_const) {
    require_consistent(rec);
    if (!rec.range.contains(j)) throw std::out_of_range("envelope audit: band outside range");
    if (!(c_const > 0.0)) throw std::invalid_argument("envelope audit: rate must be positive");

    const std::size_t col = static_cast<std::size_t>(j - rec.range.j_min);
    const double rate = c_const * std::ldexp(1.0, 2 * j);
    const double weight = std::pow(2.0, -rec.gamma * j);
    const double b0 = rec.band_sups.front().at(col);

    double k_min = 0.0;
    double crit_sup = 0.0;
    double gamma_sup = 0.0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        crit_sup = std::max(crit_sup, rec.critical_norms[i]);
        gamma_sup = std::max(gamma_sup, rec.gamma_norms[i]);
        const double tau = rec.times[i] - rec.times.front();
        const double decay = std::exp(-rate * tau);
        const double envelope = decay * b0 + (1.0 - decay) * weight * crit_sup * gamma_sup;
        const double value = rec.band_sups[i].at(col);
        if (envelope > 0.0)
            k_min = std::max(k_min, value / envelope);
        else if (value > 0.0)
            return std::numeric_limits<double>::infinity();
    }
    return k_min;
}

}  // namespace lpns
