#include "gqito/simulate.hpp"

#include <cmath>
#include <string>

#include "gqito/rng.hpp"

namespace gqito {

namespace {

void init_panel(TickPanel& panel, const SimGrid& grid) {
    panel.n_days = grid.n_days;
    panel.m = grid.m;
    const std::size_t ticks = static_cast<std::size_t>(grid.n_days) * (grid.m + 1);
    panel.x.assign(ticks, 0.0);
    panel.y.assign(ticks, 0.0);
    panel.spot_var_open.assign(grid.n_days, 0.0);
    panel.z_true.assign(grid.n_days, 0.0);
    for (int j = 1; j <= kMaxHorizon; ++j) {
        panel.true_iv[j - 1].assign(static_cast<std::size_t>(grid.n_days) * j, 0.0);
    }
    panel.seed = grid.seed;
    panel.has_truth = true;
}

// Deposit one substep's integrated variance into every horizon's window bins.
// Window index floor(f * j) is exact because f = l / (m * es) stays in [0, 1).
void bin_iv(TickPanel& panel, int day, double f, double iv_increment) {
    for (int j = 1; j <= kMaxHorizon; ++j) {
        const int w = static_cast<int>(f * j);
        panel.true_iv[j - 1][static_cast<std::size_t>(day) * j + w] += iv_increment;
    }
}

void finish_floor_warning(TickPanel& panel) {
    if (panel.total_steps > 0 &&
        panel.floor_hits * 100 > panel.total_steps) {
        panel.warnings.push_back(
            "variance floor engaged on " + std::to_string(panel.floor_hits) + " of " +
            std::to_string(panel.total_steps) + " steps (> 1%)");
    }
}

}  // namespace

void SimGrid::validate() const {
    if (n_days < 1) throw DomainError("n_days must be >= 1");
    if (m < 1) throw DomainError("ticks per day m must be >= 1");
    if (euler_substeps < 1) throw DomainError("euler_substeps must be >= 1");
    if (!std::isfinite(x0)) throw DomainError("x0 must be finite");
}

void HestonSimConfig::validate() const {
    grid.validate();
    if (!(s0 > 0.0)) throw DomainError("s0 must be positive");
    if (!(v0 >= 0.0)) throw DomainError("v0 must be nonnegative");
    if (!(vol_of_vol >= 0.0)) throw DomainError("vol_of_vol must be nonnegative");
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("rho must lie in [-1, 1]");
    if (!(jump_intensity >= 0.0)) throw DomainError("jump_intensity must be nonnegative");
    if (!(jump_sd >= 0.0)) throw DomainError("jump_sd must be nonnegative");
    if (!(b >= 0.0)) throw DomainError("mean-reversion b must be nonnegative");
}

TickPanel simulate_gqarch_ito(const GqarchSimConfig& cfg) {
    cfg.grid.validate();
    // Validates the parameters; the recursion coefficients themselves are not
    // needed here because the day-close update uses the continuous-time form.
    (void)derive_coeffs(cfg.params, 1);
    if (!(cfg.sigma0_sq >= 0.0) || !std::isfinite(cfg.sigma0_sq)) {
        throw DomainError("sigma0_sq must be finite and nonnegative");
    }

    TickPanel panel;
    init_panel(panel, cfg.grid);
    Rng rng = make_stream(cfg.grid.seed, Stream::diffusion);

    const int es = cfg.grid.euler_substeps;
    const int steps_per_day = cfg.grid.m * es;
    const double dt = 1.0 / steps_per_day;
    const double sqrt_dt = std::sqrt(dt);
    const ModelParams& p = cfg.params;

    double anchor = cfg.sigma0_sq;  // day-open spot variance s_n
    double x = cfg.grid.x0;
    for (int day = 0; day < cfg.grid.n_days; ++day) {
        panel.spot_var_open[day] = anchor;
        panel.x[panel.tick_index(day, 0)] = x;
        double integral = 0.0;  // int sigma dB from the day open
        for (int l = 0; l < steps_per_day; ++l) {
            const double f = static_cast<double>(l) * dt;
            double var = anchor + f * (p.omega + (p.gamma - 1.0) * anchor) +
                         p.beta * integral * integral + p.alpha * integral;
            if (var < kGMin) {
                var = kGMin;
                ++panel.floor_hits;
            }
            const double sig = std::sqrt(var);
            const double db = sqrt_dt * rng.normal();
            bin_iv(panel, day, f, var * dt);
            x += p.mu * dt + sig * db;
            integral += sig * db;
            ++panel.total_steps;
            if ((l + 1) % es == 0) {
                panel.x[panel.tick_index(day, (l + 1) / es)] = x;
            }
        }
        panel.z_true[day] = integral;
        double next = p.omega + p.gamma * anchor + p.beta * integral * integral +
                      p.alpha * integral;
        if (next < kGMin) {
            next = kGMin;
            ++panel.floor_hits;
        }
        anchor = next;
    }
    panel.y = panel.x;
    finish_floor_warning(panel);
    panel.validate();
    return panel;
}

TickPanel simulate_heston(const HestonSimConfig& cfg) {
    cfg.validate();

    TickPanel panel;
    init_panel(panel, cfg.grid);
    Rng rng = make_stream(cfg.grid.seed, Stream::diffusion);
    Rng jump_rng = make_stream(cfg.grid.seed, Stream::jumps);

    const int es = cfg.grid.euler_substeps;
    const int steps_per_day = cfg.grid.m * es;
    const double dt = 1.0 / steps_per_day;
    const double sqrt_dt = std::sqrt(dt);
    const double rho_c = std::sqrt(1.0 - cfg.rho * cfg.rho);

    double x = std::log(cfg.s0);
    double v = cfg.v0;
    for (int day = 0; day < cfg.grid.n_days; ++day) {
        panel.spot_var_open[day] = std::max(v, 0.0);
        panel.x[panel.tick_index(day, 0)] = x;
        double mart = 0.0;  // diffusion part of the day's return
        for (int l = 0; l < steps_per_day; ++l) {
            const double f = static_cast<double>(l) * dt;
            const double vp = std::max(v, 0.0);
            if (v < 0.0) ++panel.floor_hits;
            const double sig = std::sqrt(vp);
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double dw1 = sqrt_dt * z1;
            const double dw2 = sqrt_dt * (cfg.rho * z1 + rho_c * z2);
            bin_iv(panel, day, f, vp * dt);
            x += (cfg.r - 0.5 * vp) * dt + sig * dw1;
            mart += sig * dw1;
            v += (cfg.a - cfg.b * vp) * dt + cfg.vol_of_vol * sig * dw2;
            if (cfg.jump_intensity > 0.0) {
                if (jump_rng.uniform() < cfg.jump_intensity * dt) {
                    v += cfg.jump_sd * jump_rng.normal();
                }
            }
            ++panel.total_steps;
            if ((l + 1) % es == 0) {
                panel.x[panel.tick_index(day, (l + 1) / es)] = x;
            }
        }
        panel.z_true[day] = mart;
    }
    panel.y = panel.x;
    finish_floor_warning(panel);
    panel.validate();
    return panel;
}

void add_noise(TickPanel& panel, double noise_sd, std::uint64_t seed) {
    panel.validate();
    if (panel.has_noise) throw DomainError("panel already carries microstructure noise");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw DomainError("noise_sd must be finite and nonnegative");
    }
    panel.noise_sd = noise_sd;
    panel.has_noise = noise_sd > 0.0;
    if (noise_sd == 0.0) {
        panel.y = panel.x;
        return;
    }
    Rng rng = make_stream(seed, Stream::micro_noise);
    for (std::size_t i = 0; i < panel.x.size(); ++i) {
        panel.y[i] = panel.x[i] + noise_sd * rng.normal();
    }
}

}  // namespace gqito
