#pragma once

// Shared helpers for the test binaries: hand-built panels with exactly known
// integrated variance, relative comparisons, and scratch directories.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "gqito/panel.hpp"
#include "gqito/rng.hpp"

namespace testutil {

/// Constant-volatility Brownian log-price panel: increments are iid
/// N(0, sigma_sq / m), so the true integrated variance of every day (and of
/// every 1/j window) is exactly sigma_sq (resp. sigma_sq / j). No simulation
/// truth is attached; tests know the truth in closed form.
inline gqito::TickPanel make_bm_panel(int n_days, int m, double sigma_sq,
                                      std::uint64_t seed) {
    gqito::TickPanel p;
    p.n_days = n_days;
    p.m = m;
    p.x.resize(static_cast<std::size_t>(n_days) * (m + 1));
    gqito::Rng rng(gqito::derive_seed(seed, 0xB1u));
    const double step_sd = std::sqrt(sigma_sq / m);
    double x = 0.0;
    for (int day = 0; day < n_days; ++day) {
        p.x[p.tick_index(day, 0)] = x;
        for (int k = 1; k <= m; ++k) {
            x += step_sd * rng.normal();
            p.x[p.tick_index(day, k)] = x;
        }
    }
    p.y = p.x;
    p.seed = seed;
    return p;
}

/// Pure-noise panel: the efficient price never moves; observations are iid
/// N(0, noise_sd^2) around it. True integrated variance is exactly 0.
inline gqito::TickPanel make_pure_noise_panel(int n_days, int m, double noise_sd,
                                              std::uint64_t seed) {
    gqito::TickPanel p;
    p.n_days = n_days;
    p.m = m;
    p.x.assign(static_cast<std::size_t>(n_days) * (m + 1), 0.0);
    p.y.resize(p.x.size());
    gqito::Rng rng(gqito::derive_seed(seed, 0xB2u));
    for (std::size_t i = 0; i < p.y.size(); ++i) p.y[i] = noise_sd * rng.normal();
    p.seed = seed;
    p.has_noise = true;
    p.noise_sd = noise_sd;
    return p;
}

/// |a - b| <= tol * max(|a|, |b|), with exact equality (including 0 == 0)
/// always passing.
inline bool rel_close(double a, double b, double tol) {
    if (a == b) return true;
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * scale;
}

/// Fresh scratch directory under the current working directory; wiped first
/// so reruns start clean.
inline std::string scratch_dir(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::path("scratch") / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace testutil
