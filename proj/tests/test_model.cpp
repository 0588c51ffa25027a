#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gqito/model.hpp"
#include "gqito/rng.hpp"
#include "test_util.hpp"

using namespace gqito;
using testutil::rel_close;

namespace {

const ModelParams kTheta0{0.2, 0.3, 0.4, 0.1, 0.0};

ParamBox wide_box() {
    ParamBox b;
    b.omega_lo = 1e-13;
    b.omega_hi = 6.0;
    b.beta_lo = 1e-12;
    b.beta_hi = 0.9999;
    b.gamma_lo = 1e-7;
    b.gamma_hi = 0.9999;
    return b;
}

}  // namespace

TEST_CASE("coefficient mapping matches 20-digit references at the default point") {
    const GqarchCoeffs c1 = derive_coeffs(kTheta0, 1);
    CHECK(c1.omega_g == doctest::Approx(0.23323920505066873599).epsilon(1e-14));
    CHECK(c1.beta_g == doctest::Approx(0.25014119242399689602).epsilon(1e-14));
    CHECK(c1.alpha_g == doctest::Approx(0.083380397474665632005).epsilon(1e-14));
    CHECK(c1.decay == 0.4);  // exactly gamma at the daily horizon
    CHECK(c1.j == 1);

    const GqarchCoeffs c2 = derive_coeffs(kTheta0, 2);
    CHECK(c2.omega_g == doctest::Approx(0.053944747576094374206).epsilon(1e-14));
    CHECK(c2.beta_g == doctest::Approx(0.13816575727171687738).epsilon(1e-14));
    CHECK(c2.alpha_g == doctest::Approx(0.046055252423905625794).epsilon(1e-14));
    CHECK(c2.decay == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(c2.j == 2);
}

TEST_CASE("tiny-beta values match 20-digit references through the series branch") {
    const ParamBox box = wide_box();

    ModelParams p = kTheta0;
    p.beta = 1e-8;  // deep inside the Taylor branch
    const GqarchCoeffs a = derive_coeffs(p, 1, box);
    CHECK(a.omega_g == doctest::Approx(0.20000000100000000333).epsilon(1e-14));
    CHECK(rel_close(a.beta_g, 7.0000000400000001417e-9, 1e-13));
    CHECK(a.alpha_g == doctest::Approx(0.070000000400000001417).epsilon(1e-14));

    p.beta = 1e-4;  // at the branch switch point
    const GqarchCoeffs b = derive_coeffs(p, 1, box);
    CHECK(b.omega_g == doctest::Approx(0.20001000033334166683).epsilon(1e-14));
    CHECK(rel_close(b.beta_g, 7.0004000141670333408e-5, 1e-13));
    CHECK(b.alpha_g == doctest::Approx(0.070004000141670333408).epsilon(1e-14));
}

TEST_CASE("the two evaluation branches agree across the switch point") {
    // beta just below vs just above 1e-4 (at j = 1, x = beta): the Taylor and
    // expm1 branches must join smoothly to ~1e-12 relative.
    const ParamBox box = wide_box();
    ModelParams lo = kTheta0, hi = kTheta0;
    lo.beta = 0.99999e-4;
    hi.beta = 1.00001e-4;
    const GqarchCoeffs cl = derive_coeffs(lo, 1, box);
    const GqarchCoeffs ch = derive_coeffs(hi, 1, box);
    // omega_g and alpha_g vary smoothly in beta; the jump across 2e-9 in beta
    // is O(1e-9), so any branch glitch above ~1e-9 would show.
    CHECK(rel_close(cl.omega_g, ch.omega_g, 1e-8));
    CHECK(rel_close(cl.alpha_g, ch.alpha_g, 1e-8));
    CHECK(rel_close(cl.beta_g, ch.beta_g, 1e-4));  // beta_g itself is O(beta)
}

TEST_CASE("one recursion step matches the frozen example") {
    const GqarchCoeffs c = derive_coeffs(kTheta0, 1);
    const GState st = g_update(GState{0.667, 0}, c, 0.0);
    CHECK(st.g == doctest::Approx(0.50003920505066873599).epsilon(1e-14));
    CHECK(st.index == 1);

    // The alpha term makes the response asymmetric in the return sign.
    const double up = g_update(GState{0.667, 0}, c, 0.1).g;
    const double dn = g_update(GState{0.667, 0}, c, -0.1).g;
    CHECK(up - dn == doctest::Approx(2.0 * c.alpha_g * 0.1).epsilon(1e-12));
}

TEST_CASE("the recursion floor engages on extreme negative shocks") {
    ParamBox box = wide_box();
    ModelParams p;
    p.omega = 1e-11;
    p.beta = 1e-6;
    p.gamma = 1e-6;
    p.alpha = -1.5;
    const GqarchCoeffs c = derive_coeffs(p, 1, box);
    const GState st = g_update(GState{1e-10, 0}, c, 0.1);
    CHECK(st.g == kGMin);
}

TEST_CASE("expected window variance matches the frozen example and its series") {
    CHECK(expected_window_iv(kTheta0, 0.667, 1) ==
          doctest::Approx(0.66694460132491555211).epsilon(1e-14));

    // Order-0 truncation keeps only (omega + (gamma + 2j - 1) s) / (2 j^2).
    CHECK(g_series_truncated(kTheta0, 0.667, 1, 0) ==
          doctest::Approx(0.5669).epsilon(1e-14));

    // The series has converged to the closed form long before k_max = 30.
    const double closed = expected_window_iv(kTheta0, 0.667, 1);
    CHECK(rel_close(g_series_truncated(kTheta0, 0.667, 1, 30), closed, 1e-14));
    CHECK(rel_close(g_series_truncated(kTheta0, 0.667, 1, 60), closed, 1e-14));
}

TEST_CASE("series and closed form agree on random feasible draws") {
    Rng rng(20260819u);
    for (int i = 0; i < 50; ++i) {
        ModelParams p;
        p.omega = 0.05 + 1.9 * rng.uniform();
        p.beta = 0.05 + 0.85 * rng.uniform();
        p.gamma = 0.05 + 0.9 * rng.uniform();
        p.alpha = -1.0 + 2.0 * rng.uniform();
        const double s = 0.01 + 3.99 * rng.uniform();
        const int j = i % 6 + 1;
        const double closed = expected_window_iv(p, s, j);
        const double series = g_series_truncated(p, s, j, 60);
        CHECK(rel_close(closed, series, 1e-10));
    }
}

TEST_CASE("the mapping preserves the stationary mean at every horizon") {
    // Fixed point of E[g]: omega_g / (1 - decay - beta_g) must equal the
    // daily-level stationary variance omega / (1 - gamma - beta) divided by j.
    Rng rng(77u);
    for (int i = 0; i < 60; ++i) {
        ModelParams p;
        p.omega = 0.05 + 1.0 * rng.uniform();
        p.beta = 0.05 + 0.5 * rng.uniform();
        p.gamma = 0.05 + (0.9 - p.beta) * rng.uniform();  // keep beta+gamma < 0.95
        p.alpha = -1.0 + 2.0 * rng.uniform();
        const int j = i % 6 + 1;
        const GqarchCoeffs c = derive_coeffs(p, j);
        const double window_mean = c.omega_g / (1.0 - c.decay - c.beta_g);
        const double daily_mean = p.omega / (1.0 - p.gamma - p.beta);
        CHECK(rel_close(window_mean, daily_mean / j, 1e-12));
    }
    // At the default parameter point the daily stationary mean is 2/3, which
    // the default initial condition 0.667 rounds to three decimals.
    const GqarchCoeffs c = derive_coeffs(kTheta0, 1);
    CHECK(c.omega_g / (1.0 - c.decay - c.beta_g) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("zero-return recursion converges to its fixed point") {
    const GqarchCoeffs c = derive_coeffs(kTheta0, 1);
    GState st{5.0, 0};
    for (int k = 0; k < 200; ++k) st = g_update(st, c, 0.0);
    CHECK(st.g == doctest::Approx(0.38873200841778122665).epsilon(1e-13));
    CHECK(st.index == 200);
}

TEST_CASE("alpha = 0 reduces the step to the symmetric recursion exactly") {
    ModelParams p = kTheta0;
    p.alpha = 0.0;
    for (int j : {1, 2, 3, 6}) {
        const GqarchCoeffs c = derive_coeffs(p, j);
        CHECK(c.alpha_g == 0.0);
        if (j == 1) CHECK(c.decay == p.gamma);
        for (double z : {-0.9, -0.1, 0.0, 0.3, 1.7}) {
            const double expect = c.omega_g + c.decay * 0.42 + c.beta_g * z * z;
            CHECK(g_update(GState{0.42, 3}, c, z).g == expect);
        }
    }
}

TEST_CASE("domain checks reject bad inputs") {
    CHECK_THROWS_AS(derive_coeffs(kTheta0, 0), DomainError);
    CHECK_THROWS_AS(derive_coeffs(kTheta0, 7), DomainError);

    ModelParams bad = kTheta0;
    bad.beta = 1.5;  // outside (0, 1)
    CHECK_THROWS_AS(derive_coeffs(bad, 1), DomainError);
    bad = kTheta0;
    bad.omega = -0.1;
    CHECK_THROWS_AS(derive_coeffs(bad, 1), DomainError);
    bad = kTheta0;
    bad.gamma = std::nan("");
    CHECK_THROWS_AS(derive_coeffs(bad, 1), DomainError);
    bad = kTheta0;
    bad.alpha = 2.0;  // boundary of the open default box
    CHECK_THROWS_AS(derive_coeffs(bad, 1), DomainError);

    CHECK_THROWS_AS(expected_window_iv(kTheta0, -0.5, 1), DomainError);
    CHECK_THROWS_AS(expected_window_iv(kTheta0, std::nan(""), 1), DomainError);
    CHECK_THROWS_AS(g_series_truncated(kTheta0, 0.5, 1, -1), DomainError);
    CHECK_THROWS_AS(g_series_truncated(kTheta0, 0.5, 9, 10), DomainError);

    const GqarchCoeffs c = derive_coeffs(kTheta0, 1);
    CHECK_THROWS_AS(g_update(GState{0.5, 0}, c, std::nan("")), DomainError);

    ParamBox box;
    box.omega_lo = 0.0;  // must stay strictly positive
    CHECK_THROWS_AS(box.validate(), DomainError);
    box = ParamBox{};
    box.beta_hi = 1.0;  // must stay inside (0, 1)
    CHECK_THROWS_AS(box.validate(), DomainError);
    box = ParamBox{};
    box.gamma_lo = 0.8;
    box.gamma_hi = 0.2;  // empty range
    CHECK_THROWS_AS(box.validate(), DomainError);
}

TEST_CASE("pinned coordinates require exact matches") {
    ParamBox box;
    box.alpha_lo = box.alpha_hi = 0.0;  // pin alpha at zero
    ModelParams p = kTheta0;
    p.alpha = 0.0;
    CHECK(box.contains(p));
    p.alpha = 1e-12;
    CHECK_FALSE(box.contains(p));
}
