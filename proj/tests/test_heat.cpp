#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "lpns/heat.hpp"

using namespace lpns;
namespace tu = testutil;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("heat flow on pure modes is the exact exponential") {
    Grid g = make_grid(2, 32, kTwoPi);
    SpectralVectorField F = tu::cosine_mode(g, {3, 0, 0}, 1, 2.0);

    const double t = 0.2;
    SpectralVectorField Ft = heat_apply(F, t);
    SpectralVectorField want = tu::cosine_mode(g, {3, 0, 0}, 1, 2.0 * std::exp(-9.0 * t));
    CHECK(tu::sup_diff(Ft, want) <= 1e-12 * sup_norm(want));

    // t = 0 reproduces the input coefficients exactly
    CHECK(tu::coeffs_equal(heat_apply(F, 0.0), F));

    CHECK_THROWS_AS((void)heat_apply(F, -1e-9), std::invalid_argument);
}

TEST_CASE("heat flow composes in time") {
    Grid g = make_grid(3, 16, kTwoPi);
    CutoffProfile c = make_cutoff();
    const double cutoff = default_dealias_cutoff(g);
    BandIndexRange range = band_range(g, c, cutoff);
    SpectralVectorField v = tu::flat_random_field(g, c, range, cutoff, 12);

    SpectralVectorField two_hops = heat_apply(heat_apply(v, 0.1), 0.1);
    SpectralVectorField one_hop = heat_apply(v, 0.2);
    CHECK(tu::sup_diff(two_hops, one_hop) <= 1e-12 * sup_norm(one_hop));
}

TEST_CASE("heat flow contracts the sup norm") {
    Grid g = make_grid(3, 16, kTwoPi);
    CutoffProfile c = make_cutoff();
    const double cutoff = default_dealias_cutoff(g);
    BandIndexRange range = band_range(g, c, cutoff);
    SpectralVectorField v = tu::flat_random_field(g, c, range, cutoff, 4);
    const double base = sup_norm(v);

    for (double t : {0.01, 0.1, 1.0})
        CHECK(sup_norm(heat_apply(v, t)) <= base * (1.0 + 1e-10));
}

TEST_CASE("band decay ratio shrinks with time") {
    Grid g = make_grid(2, 64, kTwoPi);
    CutoffProfile c = make_cutoff();
    const double cutoff = default_dealias_cutoff(g);
    BandIndexRange range = band_range(g, c, cutoff);
    SpectralVectorField v = tu::flat_random_field(g, c, range, cutoff, 8);

    const int j = 3;
    double prev = 1.0 + 1e-15;
    for (double t : {0.01, 0.05, 0.1, 0.5}) {
        DecayFit fit = band_decay_check(v, c, j, t, range);
        CHECK(fit.observed_ratio > 0.0);
        CHECK(fit.observed_ratio < prev);
        prev = fit.observed_ratio;
    }
}

TEST_CASE("fitted decay rates sit inside the dyadic bracket") {
    Grid g = make_grid(3, 32, kTwoPi);
    CutoffProfile c = make_cutoff();
    const double cutoff = default_dealias_cutoff(g);
    BandIndexRange range = band_range(g, c, cutoff);
    SpectralVectorField v = tu::flat_random_field(g, c, range, cutoff, 77);

    // a band j field lives on (1/2) 2^j <= |xi| <= (7/6) 2^j, so the measured
    // rate c in exp(-c 4^j t) must land in [1/4, 49/36]; [0.2, 1.4] with margin
    for (int j = range.j_min; j <= range.j_max; ++j) {
        for (double t : {0.01, 0.1, 1.0}) {
            DecayFit fit = band_decay_check(v, c, j, t, range);
            CHECK(fit.fitted_c >= 0.2);
            CHECK(fit.fitted_c <= 1.4);
        }
    }
}

TEST_CASE("a pure dyadic mode fits rate one exactly") {
    Grid g = make_grid(2, 64, kTwoPi);
    CutoffProfile c = make_cutoff();
    BandIndexRange range = band_range(g, c, default_dealias_cutoff(g));

    const int j = 2;
    SpectralVectorField F = tu::cosine_mode(g, {1 << j, 0, 0}, 1);
    for (double t : {0.01, 0.1, 1.0}) {
        DecayFit fit = band_decay_check(F, c, j, t, range);
        CHECK(std::abs(fit.fitted_c - 1.0) <= 1e-10);
    }

    // off-center mode: |xi| = 3 lies only in band 2, rate 9/16
    SpectralVectorField G = tu::cosine_mode(g, {3, 0, 0}, 1);
    DecayFit fit = band_decay_check(G, c, 2, 0.1, range);
    CHECK(fit.fitted_c == doctest::Approx(9.0 / 16.0).epsilon(1e-10));
}

TEST_CASE("decay fit rejects unidentifiable inputs") {
    Grid g = make_grid(2, 64, kTwoPi);
    CutoffProfile c = make_cutoff();
    BandIndexRange range = band_range(g, c, default_dealias_cutoff(g));
    SpectralVectorField F = tu::cosine_mode(g, {4, 0, 0}, 1);

    CHECK_THROWS_AS((void)band_decay_check(F, c, 2, 0.0, range), std::invalid_argument);
    CHECK_THROWS_AS((void)band_decay_check(F, c, 2, -0.1, range), std::invalid_argument);
    // band 0 of a |xi| = 4 mode carries nothing
    CHECK_THROWS_AS((void)band_decay_check(F, c, 0, 0.1, range), std::invalid_argument);
    CHECK_THROWS_AS((void)band_decay_check(F, c, range.j_max + 1, 0.1, range), std::out_of_range);
}
