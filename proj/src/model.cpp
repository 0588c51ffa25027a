#include "gqito/model.hpp"

#include <cmath>
#include <string>

namespace gqito {

namespace {

// (e^x - 1)/x with a 6-term Taylor branch; relative error < 1e-13 at the
// 1e-4 switch point.
double e1(double x) {
    if (std::abs(x) < 1e-4) {
        return 1.0 + x * (1.0 / 2 + x * (1.0 / 6 + x * (1.0 / 24 + x * (1.0 / 120 + x / 720))));
    }
    return std::expm1(x) / x;
}

// (e^x - 1 - x)/x^2, same switching rule.
double e2(double x) {
    if (std::abs(x) < 1e-4) {
        return 1.0 / 2 + x * (1.0 / 6 + x * (1.0 / 24 + x * (1.0 / 120 + x * (1.0 / 720 + x / 5040))));
    }
    return (std::expm1(x) - x) / (x * x);
}

void check_horizon(int j) {
    if (j < 1 || j > kMaxHorizon) {
        throw DomainError("horizon j = " + std::to_string(j) + " outside [1, " +
                          std::to_string(kMaxHorizon) + "]");
    }
}

void check_in_box(const ModelParams& p, const ParamBox& box) {
    box.validate();
    if (!box.contains(p)) {
        throw DomainError(
            "params (omega=" + fmt_full(p.omega) + ", beta=" + fmt_full(p.beta) +
            ", gamma=" + fmt_full(p.gamma) + ", alpha=" + fmt_full(p.alpha) +
            ") outside the parameter box");
    }
}

}  // namespace

void ParamBox::validate() const {
    const double lo[4] = {omega_lo, beta_lo, gamma_lo, alpha_lo};
    const double hi[4] = {omega_hi, beta_hi, gamma_hi, alpha_hi};
    for (int c = 0; c < 4; ++c) {
        if (!std::isfinite(lo[c]) || !std::isfinite(hi[c]) || lo[c] > hi[c]) {
            throw DomainError("parameter box has an empty or non-finite range");
        }
    }
    if (omega_lo <= 0.0) throw DomainError("omega lower bound must be positive");
    if (beta_lo <= 0.0 || beta_hi >= 1.0) throw DomainError("beta box must stay inside (0, 1)");
    if (gamma_lo <= 0.0 || gamma_hi >= 1.0) throw DomainError("gamma box must stay inside (0, 1)");
}

bool ParamBox::contains(const ModelParams& p) const {
    const double lo[4] = {omega_lo, beta_lo, gamma_lo, alpha_lo};
    const double hi[4] = {omega_hi, beta_hi, gamma_hi, alpha_hi};
    const double v[4] = {p.omega, p.beta, p.gamma, p.alpha};
    for (int c = 0; c < 4; ++c) {
        if (!std::isfinite(v[c])) return false;
        if (lo[c] == hi[c]) {
            if (v[c] != lo[c]) return false;
        } else if (v[c] <= lo[c] || v[c] >= hi[c]) {
            return false;
        }
    }
    return std::isfinite(p.mu);
}

GqarchCoeffs derive_coeffs(const ModelParams& params, int j, const ParamBox& box) {
    check_horizon(j);
    check_in_box(params, box);
    const double jd = j;
    const double x = params.beta / jd;
    const double v1 = e1(x);
    const double v2 = e2(x);
    GqarchCoeffs c;
    c.j = j;
    c.omega_g = params.omega * v1 / (jd * jd);
    c.beta_g = (params.gamma - 1.0) * (x / jd) * v2 + x * v1;
    c.alpha_g = params.alpha * ((params.gamma - 1.0) * v2 / (jd * jd) + v1 / jd);
    // j == 1 keeps decay == gamma exactly (no rounding through gamma + 0).
    c.decay = j == 1 ? params.gamma : (params.gamma + jd - 1.0) / jd;
    return c;
}

GState g_update(const GState& state, const GqarchCoeffs& coeffs, double z) {
    if (!std::isfinite(z)) throw DomainError("non-finite return fed to g_update");
    double g = coeffs.omega_g + coeffs.decay * state.g +
               coeffs.beta_g * z * z + coeffs.alpha_g * z;
    if (g < kGMin) g = kGMin;
    return GState{g, state.index + 1};
}

double expected_window_iv(const ModelParams& params, double spot_var, int j,
                          const ParamBox& box) {
    check_horizon(j);
    check_in_box(params, box);
    if (!(spot_var >= 0.0) || !std::isfinite(spot_var)) {
        throw DomainError("spot variance must be finite and nonnegative");
    }
    const double jd = j;
    const double x = params.beta / jd;
    const GqarchCoeffs c = derive_coeffs(params, j, box);
    return params.omega * e2(x) / (jd * jd) + spot_var * c.beta_g / params.beta;
}

double g_series_truncated(const ModelParams& params, double spot_var, int j,
                          int k_max) {
    check_horizon(j);
    if (k_max < 0) throw DomainError("series truncation order must be nonnegative");
    if (!(spot_var >= 0.0) || !std::isfinite(spot_var)) {
        throw DomainError("spot variance must be finite and nonnegative");
    }
    const double jd = j;
    // term_k = beta^k / (k+2)! * (1/j)^(k+2); built up incrementally.
    double weight = 1.0 / (2.0 * jd * jd);
    double total = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        total += weight * (params.omega + (params.gamma + jd * (k + 2) - 1.0) * spot_var);
        weight *= params.beta / (jd * (k + 3));
    }
    return total;
}

}  // namespace gqito
