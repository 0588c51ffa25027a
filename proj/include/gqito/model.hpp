#pragma once

#include <cstdint>

#include "gqito/common.hpp"

namespace gqito {

/// Continuous-time GQARCH-Ito parameters. The instantaneous variance over day
/// n interpolates its day-open value sigma_n^2 via
///   sigma_t^2 = sigma_n^2 + (t-n)(omega + (gamma-1) sigma_n^2)
///              + beta I_t^2 + alpha I_t,   I_t = int_n^t sigma dB,
/// and log prices follow dX = mu dt + sigma_t dB_t.
struct ModelParams {
    double omega = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;
    double mu = 0.0;
};

/// Open box for (omega, beta, gamma, alpha); mu is not constrained.
/// A coordinate with lower == upper is pinned: fixed at that value and
/// excluded from optimization.
struct ParamBox {
    double omega_lo = 1e-6, omega_hi = 5.0;
    double beta_lo = 1e-4, beta_hi = 0.999;
    double gamma_lo = 1e-4, gamma_hi = 0.999;
    double alpha_lo = -2.0, alpha_hi = 2.0;

    void validate() const;
    /// True if (omega, beta, gamma, alpha) lies in the box (pinned coordinates
    /// must match exactly).
    bool contains(const ModelParams& p) const;
};

/// Coefficients of the variance recursion on the 1/j grid:
///   g_{k+1} = omega_g + decay * g_k + beta_g * z_k^2 + alpha_g * z_k,
/// where z_k is the demeaned log return over window k.
struct GqarchCoeffs {
    double omega_g = 0.0;
    double beta_g = 0.0;
    double alpha_g = 0.0;
    double decay = 0.0;
    int j = 1;
};

/// Recursion state: current conditional window variance and the window index
/// on the 1/j grid (index k means g forecasts window k).
struct GState {
    double g = 0.0;
    std::int64_t index = 0;
};

/// Map continuous-time parameters to the window-recursion coefficients for
/// horizon j (j windows per day). With x = beta/j,
///   E1(x) = (e^x - 1)/x,            E2(x) = (e^x - 1 - x)/x^2,
///   omega_g = omega E1(x) / j^2,
///   beta_g  = (gamma-1)(x/j) E2(x) + x E1(x),
///   alpha_g = alpha ((gamma-1) E2(x)/j^2 + E1(x)/j),
///   decay   = (gamma + j - 1)/j.
/// E1/E2 switch to Taylor series for |x| < 1e-4 to avoid cancellation.
/// Throws DomainError if params lie outside `box` or j is not in [1, 6].
GqarchCoeffs derive_coeffs(const ModelParams& params, int j,
                           const ParamBox& box = ParamBox{});

/// One step of the variance recursion; the result is floored at kGMin.
GState g_update(const GState& state, const GqarchCoeffs& coeffs, double z);

/// E[ integrated variance of the next 1/j window | spot variance at window
/// open = spot_var ], in closed form:
///   omega E2(x)/j^2 + spot_var * beta_g / beta,  x = beta/j.
double expected_window_iv(const ModelParams& params, double spot_var, int j,
                          const ParamBox& box = ParamBox{});

/// Truncated-series form of the same expectation,
///   sum_{k=0}^{k_max} beta^k (omega + (gamma + j(k+2) - 1) spot_var)
///                     / (k+2)! * (1/j)^{k+2},
/// kept as an independent reference for tests; converges to
/// expected_window_iv as k_max grows.
double g_series_truncated(const ModelParams& params, double spot_var, int j,
                          int k_max);

}  // namespace gqito
