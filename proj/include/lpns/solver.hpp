#pragma once

// Viscous incompressible flow on the box, integrated in Fourier space with a
// fourth-order integrating-factor Runge-Kutta scheme: the stiff diffusion is
// absorbed into exact exponential factors, the quadratic term is evaluated
// pseudo-spectrally and kept divergence-free, mean-free, and dealiased.

#include <functional>

#include "lpns/bands.hpp"
#include "lpns/field.hpp"
#include "lpns/monitor.hpp"

namespace lpns {

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double dealias_fraction = 2.0 / 3.0;  // isotropic cutoff as a fraction of Nyquist
    int record_every = 1;                 // sampling stride in steps
    double gamma = 1.5;                   // order of the smooth norm in records
    bool nonlinear = true;                // false: pure heat flow
};

struct SolverState {
    double t = 0.0;
    long step_count = 0;
    SpectralVectorField v;
};

/// Divergence-free projection of -(v.grad)v, dealiased, mean-free.
SpectralVectorField rhs(const SpectralVectorField& v, double dealias_cutoff);

/// One-step integrator with the exponential factors cached for a fixed dt.
/// With the quadratic term disabled a step multiplies coefficients by exactly
/// the heat-flow factors exp(-|xi|^2 dt).
class Stepper {
public:
    Stepper(const Grid& g, double dt, double dealias_cutoff, bool nonlinear);

    /// Advances state by dt (t and step_count assume a start at t = 0).
    /// Returns false and leaves state untouched when the update would contain
    /// a nonfinite value.
    [[nodiscard]] bool step(SolverState& state) const;

    double dt() const { return dt_; }
    double dealias_cutoff() const { return cutoff_; }

private:
    Grid grid_;
    double dt_;
    double cutoff_;
    bool nonlinear_;
    std::vector<double> e_half_;  // exp(-|xi|^2 dt/2)
    std::vector<double> e_full_;  // exp(-|xi|^2 dt)
};

struct SimulationResult {
    TrajectoryRecord record;
    SolverState final_state;
    bool blow_up_suspected = false;
};

/// Invoked with an immutable state snapshot at every recorded sample.
using SampleObserver = std::function<void(const SolverState&)>;

/// Runs round(t_end / dt) steps from v0 (after projecting it divergence-free,
/// mean-free, and dealiased), recording norms at step 0, every record_every
/// steps, and at the last computed step. On a suspected blow-up the record is
/// truncated at the last finite state and flagged.
SimulationResult simulate(const SpectralVectorField& v0, const SolverConfig& cfg,
                          const CutoffProfile& c, const SampleObserver& observer = {});

}  // namespace lpns
