#pragma once

#include <cstdint>

#include "gqito/model.hpp"
#include "gqito/panel.hpp"

namespace gqito {

/// Shared simulation grid settings. Time unit is one trading day; each day
/// carries m recorded tick increments, each tick split into euler_substeps
/// Euler-Maruyama steps (left-point rule), so dt = 1 / (m * euler_substeps).
struct SimGrid {
    int n_days = 250;
    int m = 2160;
    int euler_substeps = 1;
    double x0 = 10.0;  // initial log price
    std::uint64_t seed = 1;

    void validate() const;
};

/// GQARCH-Ito diffusion: within day n,
///   sigma_t^2 = s_n + (t - n)(omega + (gamma - 1) s_n) + beta I_t^2 + alpha I_t
/// with I_t the running Brownian integral from the day open and s_n the
/// day-open spot variance; at each day close s_{n+1} = omega + gamma s_n +
/// beta I^2 + alpha I. Spot variance is floored at kGMin (engagements are
/// counted; above 1% of steps a warning is recorded on the panel).
struct GqarchSimConfig {
    SimGrid grid;
    ModelParams params{0.2, 0.3, 0.4, 0.1, 0.0};
    double sigma0_sq = 0.667;  // day-1 open spot variance
};

TickPanel simulate_gqarch_ito(const GqarchSimConfig& cfg);

/// Square-root stochastic volatility with full-truncation Euler:
///   d log S = (r - V+/2) dt + sqrt(V+) dW1,
///   dV      = (a - b V+) dt + vol_of_vol sqrt(V+) dW2,
/// corr(dW1, dW2) = rho; V may go negative and enters drift/diffusion as
/// V+ = max(V, 0). Optional compound jumps in V: arrival probability
/// jump_intensity * dt per step (at most one per step), size N(0, jump_sd^2),
/// drawn from a dedicated stream so jump_intensity = 0 reproduces the pure
/// diffusion bit-for-bit.
struct HestonSimConfig {
    SimGrid grid{101, 2340, 1, 0.0, 1};
    double a = 0.01;
    double b = 0.001;
    double vol_of_vol = 0.075;
    double rho = -0.8;
    double r = 0.02;
    double s0 = 50.0;  // initial price level; log taken internally
    double v0 = 0.05;
    double jump_intensity = 0.0;
    double jump_sd = 0.0;

    void validate() const;
};

TickPanel simulate_heston(const HestonSimConfig& cfg);

/// Add iid N(0, noise_sd^2) microstructure noise to the observed prices:
/// y = x + eps, one draw per stored tick. noise_sd = 0 copies x unchanged.
/// The panel must still hold clean prices (not already noised).
void add_noise(TickPanel& panel, double noise_sd, std::uint64_t seed);

}  // namespace gqito
