#pragma once

#include <array>
#include <string>
#include <vector>

#include "gqito/model.hpp"
#include "gqito/panel.hpp"
#include "gqito/realized.hpp"

namespace gqito {

/// Window-frequency observations on the 1/j grid: demeaned log returns and
/// realized variances per window. j = 1 is the daily series used for fitting;
/// fractional grids (j > 1) drive the intraday forecast recursion.
struct LowFreqSeries {
    int j = 1;
    long n = 0;                 // windows
    double mu_hat = 0.0;        // sample mean of raw daily returns
    std::vector<double> z;      // demeaned window log returns, size n
    std::vector<double> rv;     // window realized variances, size n
    std::vector<char> skipped;  // windows excluded from likelihood terms
};

/// Daily series from a panel: returns are close-to-close on clean prices
/// (day 1 uses its own open), demeaned by their sample mean; realized
/// variances come from `daily_rv` (must have j == 1 and match the panel).
/// `use_days` > 0 restricts to the first use_days days.
LowFreqSeries build_lowfreq(const TickPanel& panel, const RvSeries& daily_rv,
                            int use_days = 0);

/// Fractional series at rv_j.j windows per day; window returns are demeaned
/// by mu_daily / j. mu_daily should be the in-sample daily mean return.
LowFreqSeries build_fractional(const TickPanel& panel, const RvSeries& rv_j,
                               double mu_daily);

struct LoglikResult {
    double loglik = 0.0;           // -(1/2n) sum (log g_i + rv_i / g_i)
    double g1 = 0.0;               // initializer actually used
    long n_used = 0;               // non-skipped windows
    long floor_hits = 0;           // g-floor engagements along the path
    std::vector<double> g;         // conditional variance path, size series.n
};

/// Quasi log-likelihood of the window-variance recursion at horizon series.j.
/// g_1 is the mean of the first max(5, n/10) non-skipped realized variances;
/// subsequent g's follow g_update driven by the demeaned returns. Skipped
/// windows contribute no likelihood term but the recursion still advances.
LoglikResult quasi_loglik(const LowFreqSeries& series, const ModelParams& params,
                          const ParamBox& box = ParamBox{});

/// Per-window likelihood terms l_i = -(log g_i + rv_i/g_i)/2 (NaN for skipped
/// windows); used by the sandwich covariance.
std::vector<double> loglik_terms(const LowFreqSeries& series, const ModelParams& params,
                                 const ParamBox& box = ParamBox{});

struct FitOptions {
    ParamBox box{};
    int max_evals_per_start = 20000;
    double tol = 1e-8;       // simplex diameter in transformed space
    bool compute_se = true;
    std::vector<ModelParams> extra_starts;
};

struct FitResult {
    ModelParams params{};            // mu carries the series' mu_hat
    double loglik = 0.0;
    std::array<double, 4> se{};      // NaN where pinned or unavailable
    std::vector<int> free_coords;    // 0=omega 1=beta 2=gamma 3=alpha
    std::vector<double> score_cov;   // A-hat over free coords, row-major
    std::vector<double> hessian;     // B-hat over free coords, row-major
    bool converged = false;          // best start hit the diameter tolerance
    int evals = 0;                   // objective evaluations across all starts
    int n_starts = 0;
    double g1 = 0.0;
    long n_used = 0;
    long floor_hits = 0;
    std::vector<double> g_path;
    bool se_ok = false;
    std::string se_message;          // why standard errors are missing
};

/// Quasi-maximum-likelihood fit by Nelder-Mead multistart on a smooth
/// bijection of the box onto R^d (per-coordinate scaled logistic). Starts are
/// the box center plus dyadic corner fractions {0.25, 0.75}^d (even-parity
/// subset when d = 4), so the whole procedure is deterministic; ties between
/// starts break toward lexicographically smaller transformed coordinates.
/// Coordinates pinned in the box (lower == upper) are held fixed.
FitResult fit_qmle(const LowFreqSeries& series, const FitOptions& opts = {});

struct SandwichResult {
    std::array<double, 4> se{};      // NaN where pinned
    std::vector<int> free_coords;
    std::vector<double> score_cov;   // A-hat
    std::vector<double> hessian;     // B-hat
    std::vector<double> b_eigenvalues;
};

/// Sandwich covariance B^{-1} A B^{-1} / n at `params`:
///   A = (1/n) sum_i s_i s_i^T with per-window scores s_i by central
///       differences (relative step 1e-5),
///   B = -(1/n) Hessian of the summed terms by central differences
///       (relative step 1e-3).
/// Throws DomainError (listing eigenvalues) when B is not positive definite.
SandwichResult sandwich_se(const LowFreqSeries& series, const ModelParams& params,
                           const ParamBox& box = ParamBox{});

/// JSON round trip for fit results (fit.json artifact).
std::string fit_result_to_json(const FitResult& fit, const LowFreqSeries& series,
                               RvEstimator estimator);
ModelParams params_from_fit_json(const std::string& path);

}  // namespace gqito
