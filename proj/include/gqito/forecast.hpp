#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gqito/estimate.hpp"

namespace gqito {

struct Metrics {
    double mae = 0.0;    // mean |rv - f|
    double mse = 0.0;    // mean (rv - f)^2
    double amape = 0.0;  // mean |f - rv| / (f + rv)
    double ll = 0.0;     // mean (log f - log rv)^2
};

/// Forecast/realized pairs must be positive (callers floor at kRvFloor).
Metrics compute_metrics(const std::vector<double>& forecast,
                        const std::vector<double>& realized);

struct ForecastRow {
    int horizon = 0;
    long window = 0;  // global window index day * j + intraday window
    double forecast = 0.0;
    double realized = 0.0;
    bool skipped = false;
};

struct HorizonSummary {
    int horizon = 0;
    long n_used = 0;
    long n_skipped = 0;
    Metrics metrics{};  // NaN-filled when n_used == 0
};

struct EvalReport {
    std::vector<ForecastRow> rows;        // out-of-sample windows, all horizons
    std::vector<HorizonSummary> summary;  // one row per horizon
    FitResult daily_fit{};                // in-sample fit the forecasts used
};

struct ForecastTask {
    std::vector<int> horizons{1, 2, 3, 4, 5, 6};
    int in_sample_days = 0;  // fit window; forecasts cover the remaining days
    RvOptions rv_opts{};
    /// false: fit once on the daily grid and map the parameters to each
    /// horizon; true: re-estimate the recursion on each fractional grid.
    bool refit_per_horizon = false;
    FitOptions fit{};
    /// When set, skip the in-sample fit and forecast with these parameters
    /// (mu supplies the daily mean used to demean fractional returns).
    std::optional<ModelParams> fixed_params;
};

/// One-step-ahead conditional window variances along a fractional series:
/// out[w] is the variance forecast for window w given windows < w, seeded
/// with g1 and driven by the series' demeaned returns.
std::vector<double> forecast_path(const LowFreqSeries& frac, const GqarchCoeffs& coeffs,
                                  double g1);

/// Fixed-parameter rolling evaluation. Fits on the first in_sample_days days,
/// then for each horizon walks the fractional grid across the whole panel and
/// scores the out-of-sample windows against their realized variances
/// (realized variance is the evaluation target throughout). Skipped windows
/// are excluded from the metrics and counted.
EvalReport rolling_eval(const ForecastTask& task, const TickPanel& panel);

/// CSV with header horizon,window,forecast,rv,skipped.
void export_forecast_csv(const EvalReport& report, const std::string& path);
/// CSV with header horizon,n_used,n_skipped,mae,mse,amape,ll.
void export_summary_csv(const EvalReport& report, const std::string& path);

}  // namespace gqito
