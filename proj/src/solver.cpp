#include "lpns/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "lpns/kernels.hpp"
#include "lpns/paraproduct.hpp"

namespace lpns {
namespace {

void validate(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("solver: t_end must be nonnegative");
    if (cfg.record_every < 1) throw std::invalid_argument("solver: record_every must be >= 1");
    if (!(cfg.gamma > 1.0)) throw std::invalid_argument("solver: gamma must exceed 1");
    if (!(cfg.dealias_fraction > 0.0 && cfg.dealias_fraction <= 1.0))
        throw std::invalid_argument("solver: dealias_fraction must lie in (0, 1]");
}

void project_admissible(SpectralVectorField& v, double cutoff) {
    v = leray_project(v);
    dealias_inplace(v, cutoff);
    zero_mean_inplace(v);
}

void record_sample(TrajectoryRecord& rec, const SolverState& s, const CutoffProfile& c) {
    const auto sups = band_sup_norms(s.v, c, rec.range);
    double crit = 0.0;
    double gam = 0.0;
    for (int j = rec.range.j_min; j <= rec.range.j_max; ++j) {
        const double b = sups[static_cast<std::size_t>(j - rec.range.j_min)];
        crit = std::max(crit, std::pow(2.0, -j) * b);
        gam = std::max(gam, std::pow(2.0, rec.gamma * j) * b);
    }
    rec.times.push_back(s.t);
    rec.critical_norms.push_back(crit);
    rec.gamma_norms.push_back(gam);
    rec.band_sups.push_back(sups);
}

}  // namespace

SpectralVectorField rhs(const SpectralVectorField& v, double dealias_cutoff) {
    SpectralVectorField out = leray_project(convection(v, dealias_cutoff));
    for (int m = 0; m < out.dim(); ++m) kernels::scale_inplace(out.component(m), -1.0);
    return out;
}

Stepper::Stepper(const Grid& g, double dt, double dealias_cutoff, bool nonlinear)
    : grid_(g),
      dt_(dt),
      cutoff_(dealias_cutoff),
      nonlinear_(nonlinear),
      e_half_(g.mode_count()),
      e_full_(g.mode_count()) {
    if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be positive");
    const auto xi2 = g.xi_squared();
    kernels::for_each_index(e_half_.size(), [&](std::size_t k) {
        e_half_[k] = std::exp(-xi2[k] * (dt * 0.5));
        e_full_[k] = std::exp(-xi2[k] * dt);
    });
}

bool Stepper::step(SolverState& state) const {
    if (!(state.v.grid() == grid_)) throw std::invalid_argument("stepper: grid mismatch");

    SpectralVectorField next(grid_);
    if (!nonlinear_) {
        for (int m = 0; m < grid_.dim(); ++m)
            kernels::scale_to(state.v.component(m), e_full_, next.component(m));
    } else {
        const SpectralVectorField& v = state.v;
        SpectralVectorField ka = rhs(v, cutoff_);

        SpectralVectorField u(grid_);
        for (int m = 0; m < grid_.dim(); ++m) {
            auto vm = v.component(m);
            auto am = ka.component(m);
            auto um = u.component(m);
            kernels::for_each_index(um.size(), [&](std::size_t k) {
                um[k] = e_half_[k] * (vm[k] + (0.5 * dt_) * am[k]);
            });
        }
        SpectralVectorField kb = rhs(u, cutoff_);

        for (int m = 0; m < grid_.dim(); ++m) {
            auto vm = v.component(m);
            auto bm = kb.component(m);
            auto um = u.component(m);
            kernels::for_each_index(um.size(), [&](std::size_t k) {
                um[k] = e_half_[k] * vm[k] + (0.5 * dt_) * bm[k];
            });
        }
        SpectralVectorField kc = rhs(u, cutoff_);

        for (int m = 0; m < grid_.dim(); ++m) {
            auto vm = v.component(m);
            auto cm = kc.component(m);
            auto um = u.component(m);
            kernels::for_each_index(um.size(), [&](std::size_t k) {
                um[k] = e_full_[k] * vm[k] + (dt_ * e_half_[k]) * cm[k];
            });
        }
        SpectralVectorField kd = rhs(u, cutoff_);

        for (int m = 0; m < grid_.dim(); ++m) {
            auto vm = v.component(m);
            auto am = ka.component(m);
            auto bm = kb.component(m);
            auto cm = kc.component(m);
            auto dm = kd.component(m);
            auto nm = next.component(m);
            kernels::for_each_index(nm.size(), [&](std::size_t k) {
                nm[k] = e_full_[k] * vm[k] +
                        (dt_ / 6.0) * (e_full_[k] * am[k] +
                                       2.0 * e_half_[k] * (bm[k] + cm[k]) + dm[k]);
            });
        }
        project_admissible(next, cutoff_);
    }

    if (!all_finite(next)) return false;
    state.v = std::move(next);
    state.step_count += 1;
    state.t = static_cast<double>(state.step_count) * dt_;
    return true;
}

SimulationResult simulate(const SpectralVectorField& v0, const SolverConfig& cfg,
                          const CutoffProfile& c, const SampleObserver& observer) {
    validate(cfg);
    const Grid& g = v0.grid();
    const double cutoff = default_dealias_cutoff(g, cfg.dealias_fraction);

    SimulationResult result{TrajectoryRecord{}, SolverState{0.0, 0, SpectralVectorField(g)},
                            false};
    result.record.range = band_range(g, c, cutoff);
    result.record.gamma = cfg.gamma;

    result.final_state.v = v0;
    project_admissible(result.final_state.v, cutoff);
    if (!all_finite(result.final_state.v))
        throw std::invalid_argument("simulate: initial state is not finite");

    const Stepper stepper(g, cfg.dt, cutoff, cfg.nonlinear);
    const long total_steps = std::lround(cfg.t_end / cfg.dt);

    SolverState& s = result.final_state;
    const auto take_sample = [&]() {
        record_sample(result.record, s, c);
        if (observer) observer(s);
    };

    take_sample();
    long last_recorded = 0;
    for (long i = 1; i <= total_steps; ++i) {
        if (!stepper.step(s)) {
            result.blow_up_suspected = true;
            result.record.terminated_early = true;
            break;
        }
        if (i % cfg.record_every == 0 || i == total_steps) {
            take_sample();
            last_recorded = i;
        }
    }
    if (result.blow_up_suspected && last_recorded != s.step_count) take_sample();
    return result;
}

}  // namespace lpns
