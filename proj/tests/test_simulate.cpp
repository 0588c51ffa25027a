#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "gqito/simulate.hpp"
#include "test_util.hpp"

using namespace gqito;
using testutil::rel_close;

namespace {

GqarchSimConfig small_gqarch(int days, int m, std::uint64_t seed) {
    GqarchSimConfig cfg;
    cfg.grid.n_days = days;
    cfg.grid.m = m;
    cfg.grid.seed = seed;
    return cfg;
}

double corr(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("the same seed reproduces a panel bit for bit") {
    const GqarchSimConfig cfg = small_gqarch(20, 360, 42);
    const TickPanel a = simulate_gqarch_ito(cfg);
    const TickPanel b = simulate_gqarch_ito(cfg);
    CHECK(a.x == b.x);
    CHECK(a.spot_var_open == b.spot_var_open);
    CHECK(a.z_true == b.z_true);
    for (int j = 1; j <= kMaxHorizon; ++j) CHECK(a.true_iv[j - 1] == b.true_iv[j - 1]);

    const TickPanel c = simulate_gqarch_ito(small_gqarch(20, 360, 43));
    CHECK(a.x != c.x);
}

TEST_CASE("the day-close variance update is recomputable from recorded truth") {
    const GqarchSimConfig cfg = small_gqarch(30, 240, 7);
    const TickPanel p = simulate_gqarch_ito(cfg);
    const ModelParams& th = cfg.params;
    for (int d = 0; d + 1 < p.n_days; ++d) {
        const double z = p.z_true[d];
        const double next = th.omega + th.gamma * p.spot_var_open[d] +
                            th.beta * z * z + th.alpha * z;
        CHECK(p.spot_var_open[d + 1] == (next < kGMin ? kGMin : next));
    }
}

TEST_CASE("daily price moves decompose into drift plus the recorded martingale") {
    GqarchSimConfig cfg = small_gqarch(25, 240, 11);
    cfg.params.mu = 0.05;
    const TickPanel p = simulate_gqarch_ito(cfg);
    for (int d = 0; d < p.n_days; ++d) {
        const double move = p.x[p.tick_index(d, p.m)] - p.x[p.tick_index(d, 0)];
        CHECK(move == doctest::Approx(cfg.params.mu + p.z_true[d]).epsilon(1e-10));
    }
    // Days are chained: the close of day d is the open of day d + 1.
    for (int d = 0; d + 1 < p.n_days; ++d) {
        CHECK(p.x[p.tick_index(d, p.m)] == p.x[p.tick_index(d + 1, 0)]);
    }
}

TEST_CASE("window truth is additive across horizons") {
    const TickPanel p = simulate_gqarch_ito(small_gqarch(15, 360, 3));
    for (int j = 2; j <= kMaxHorizon; ++j) {
        for (int d = 0; d < p.n_days; ++d) {
            double sum = 0.0;
            for (int w = 0; w < j; ++w) sum += p.true_iv[j - 1][static_cast<std::size_t>(d) * j + w];
            CHECK(rel_close(sum, p.true_iv[0][d], 1e-12));
        }
    }
}

TEST_CASE("the first day's integrated variance is centered on its model expectation") {
    const ModelParams th{0.2, 0.3, 0.4, 0.1, 0.0};
    const double target = expected_window_iv(th, 0.667, 1);
    std::vector<double> iv;
    for (int r = 0; r < 600; ++r) {
        const TickPanel p = simulate_gqarch_ito(small_gqarch(1, 360, derive_seed(900, r)));
        iv.push_back(p.true_iv[0][0]);
    }
    const double m = mean(iv);
    const double se = std::sqrt(sample_var(iv) / iv.size());
    INFO("mean IV = ", m, " target = ", target, " se = ", se);
    CHECK(std::abs(m - target) <= 4.0 * se);
}

TEST_CASE("daily martingale returns average to zero") {
    const TickPanel p = simulate_gqarch_ito(small_gqarch(400, 240, 5));
    const double m = mean(p.z_true);
    const double se = std::sqrt(sample_var(p.z_true) / p.z_true.size());
    INFO("mean z = ", m, " se = ", se);
    CHECK(std::abs(m) <= 3.0 * se);
}

TEST_CASE("square-root volatility with frozen coefficients keeps variance constant") {
    HestonSimConfig cfg;
    cfg.grid = SimGrid{5, 240, 1, 0.0, 9};
    cfg.a = 0.0;
    cfg.b = 0.0;
    cfg.vol_of_vol = 0.0;
    cfg.r = 0.0;
    cfg.v0 = 0.04;
    const TickPanel p = simulate_heston(cfg);
    for (int d = 0; d < p.n_days; ++d) {
        CHECK(p.spot_var_open[d] == 0.04);
        CHECK(rel_close(p.true_iv[0][d], 0.04, 1e-10));
        const double move = p.x[p.tick_index(d, p.m)] - p.x[p.tick_index(d, 0)];
        // r = 0 and constant variance: the move is -v0/2 drift plus the
        // recorded martingale part.
        CHECK(move == doctest::Approx(-0.5 * 0.04 + p.z_true[d]).epsilon(1e-10));
    }
}

TEST_CASE("negative leverage correlation shows in the simulated paths") {
    HestonSimConfig cfg;
    cfg.grid = SimGrid{100, 240, 1, 0.0, 17};
    cfg.rho = -0.999;
    const TickPanel p = simulate_heston(cfg);
    std::vector<double> z, dv;
    for (int d = 0; d + 1 < p.n_days; ++d) {
        z.push_back(p.z_true[d]);
        dv.push_back(p.spot_var_open[d + 1] - p.spot_var_open[d]);
    }
    const double c = corr(z, dv);
    INFO("corr = ", c);
    CHECK(c < -0.5);
}

TEST_CASE("the jump stream is independent of the diffusion stream") {
    HestonSimConfig base;
    base.grid = SimGrid{4, 240, 1, 0.0, 23};

    HestonSimConfig zero_size = base;
    zero_size.jump_intensity = 2.0;
    zero_size.jump_sd = 0.0;  // jumps fire but move nothing

    HestonSimConfig jumping = base;
    jumping.jump_intensity = 2.0;
    jumping.jump_sd = 0.05;

    const TickPanel a = simulate_heston(base);
    const TickPanel b = simulate_heston(zero_size);
    const TickPanel c = simulate_heston(jumping);

    CHECK(a.x == b.x);
    CHECK(a.spot_var_open == b.spot_var_open);
    for (int j = 1; j <= kMaxHorizon; ++j) CHECK(a.true_iv[j - 1] == b.true_iv[j - 1]);
    CHECK(a.true_iv[0] != c.true_iv[0]);  // real jumps change the variance path
}

TEST_CASE("microstructure noise behaves as declared") {
    TickPanel p = simulate_gqarch_ito(small_gqarch(20, 360, 6));

    SUBCASE("zero noise copies the clean prices") {
        add_noise(p, 0.0, 99);
        CHECK(p.y == p.x);
        CHECK_FALSE(p.has_noise);
    }

    SUBCASE("noise has the declared scale and is centered") {
        const double sd = 0.005;
        add_noise(p, sd, 99);
        CHECK(p.has_noise);
        CHECK(p.noise_sd == sd);
        std::vector<double> eps(p.x.size());
        for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = p.y[i] - p.x[i];
        const double m = mean(eps);
        const double s = std::sqrt(sample_var(eps));
        CHECK(std::abs(m) <= 4.0 * sd / std::sqrt(static_cast<double>(eps.size())));
        CHECK(s == doctest::Approx(sd).epsilon(0.10));
    }

    SUBCASE("a panel cannot be noised twice") {
        add_noise(p, 0.001, 99);
        CHECK_THROWS_AS(add_noise(p, 0.001, 99), DomainError);
    }

    SUBCASE("negative or non-finite noise is rejected") {
        CHECK_THROWS_AS(add_noise(p, -0.1, 99), DomainError);
        CHECK_THROWS_AS(add_noise(p, std::nan(""), 99), DomainError);
    }
}

TEST_CASE("grid and model validation reject degenerate setups") {
    GqarchSimConfig g = small_gqarch(0, 100, 1);
    CHECK_THROWS_AS(simulate_gqarch_ito(g), DomainError);
    g = small_gqarch(5, 0, 1);
    CHECK_THROWS_AS(simulate_gqarch_ito(g), DomainError);
    g = small_gqarch(5, 100, 1);
    g.grid.euler_substeps = 0;
    CHECK_THROWS_AS(simulate_gqarch_ito(g), DomainError);
    g = small_gqarch(5, 100, 1);
    g.sigma0_sq = -1.0;
    CHECK_THROWS_AS(simulate_gqarch_ito(g), DomainError);
    g = small_gqarch(5, 100, 1);
    g.params.beta = 2.0;  // outside the parameter box
    CHECK_THROWS_AS(simulate_gqarch_ito(g), DomainError);

    HestonSimConfig h;
    h.grid = SimGrid{2, 60, 1, 0.0, 1};
    h.s0 = 0.0;
    CHECK_THROWS_AS(simulate_heston(h), DomainError);
    h = HestonSimConfig{};
    h.grid = SimGrid{2, 60, 1, 0.0, 1};
    h.rho = 1.5;
    CHECK_THROWS_AS(simulate_heston(h), DomainError);
    h = HestonSimConfig{};
    h.grid = SimGrid{2, 60, 1, 0.0, 1};
    h.jump_intensity = -1.0;
    CHECK_THROWS_AS(simulate_heston(h), DomainError);
}

TEST_CASE("euler substeps refine the grid without changing the tick layout") {
    GqarchSimConfig cfg = small_gqarch(3, 120, 31);
    cfg.grid.euler_substeps = 4;
    const TickPanel p = simulate_gqarch_ito(cfg);
    CHECK(p.m == 120);
    CHECK(p.total_steps == 3 * 120 * 4);
    CHECK(p.x.size() == static_cast<std::size_t>(3) * 121);
    for (int j = 2; j <= kMaxHorizon; ++j) {
        for (int d = 0; d < p.n_days; ++d) {
            double sum = 0.0;
            for (int w = 0; w < j; ++w) sum += p.true_iv[j - 1][static_cast<std::size_t>(d) * j + w];
            CHECK(rel_close(sum, p.true_iv[0][d], 1e-12));
        }
    }
}
