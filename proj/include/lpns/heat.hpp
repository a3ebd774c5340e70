#pragma once

// Heat semigroup on the box and per-band decay measurement.

#include "lpns/bands.hpp"
#include "lpns/field.hpp"

namespace lpns {

/// Multiply every coefficient by exp(-|xi|^2 t). t < 0 is rejected; t = 0 is
/// the identity. Composition in t is exact up to roundoff.
SpectralVectorField heat_apply(const SpectralVectorField& F, double t);

/// Sup-norm decay of one dyadic band under the heat flow.
struct DecayFit {
    int j = 0;
    double t = 0.0;
    double observed_ratio = 0.0;  // ||band(j) e^{tL} v||_inf / ||band(j) v||_inf
    double fitted_c = 0.0;        // -log(observed_ratio) / (4^j t)
};

/// Throws std::invalid_argument when t <= 0 or when band j of v vanishes
/// (no decay constant is identifiable then).
DecayFit band_decay_check(const SpectralVectorField& v, const CutoffProfile& c, int j, double t,
                          const BandIndexRange& range);

}  // namespace lpns
