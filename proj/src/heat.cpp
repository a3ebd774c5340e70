#include "lpns/heat.hpp"

#include <cmath>
#include <stdexcept>

#include "lpns/kernels.hpp"

namespace lpns {

SpectralVectorField heat_apply(const SpectralVectorField& F, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_apply: negative time");
    SpectralVectorField out(F.grid());
    const auto xi2 = F.grid().xi_squared();
    for (int m = 0; m < F.dim(); ++m) {
        auto src = F.component(m);
        auto dst = out.component(m);
        kernels::for_each_index(src.size(),
                                [&](std::size_t k) { dst[k] = std::exp(-xi2[k] * t) * src[k]; });
    }
    return out;
}

DecayFit band_decay_check(const SpectralVectorField& v, const CutoffProfile& c, int j, double t,
                          const BandIndexRange& range) {
    if (!(t > 0.0)) throw std::invalid_argument("band_decay_check: time must be positive");
    const SpectralVectorField band = project_band(v, c, j, range);
    const double before = sup_norm(band);
    if (before == 0.0)
        throw std::invalid_argument("band_decay_check: band carries no content");
    const double after = sup_norm(heat_apply(band, t));

    DecayFit fit;
    fit.j = j;
    fit.t = t;
    fit.observed_ratio = after / before;
    fit.fitted_c = -std::log(fit.observed_ratio) / (std::ldexp(1.0, 2 * j) * t);
    return fit;
}

}  // namespace lpns
