#pragma once

#include <string>
#include <vector>

#include "gqito/panel.hpp"

namespace gqito {

enum class RvEstimator { naive, tsrv, msrv };

RvEstimator rv_estimator_from_string(const std::string& name);
std::string to_string(RvEstimator est);

struct RvOptions {
    RvEstimator estimator = RvEstimator::msrv;
    /// TSRV slow-scale spacing; 0 picks round(M^(2/3)) clamped to
    /// [10, M/4] (M = increments in the window), then to [2, M-1].
    int tsrv_k = 0;
    /// MSRV number of scales; 0 picks round(sqrt(M)) clamped to [2, M/2].
    int msrv_scales = 0;
};

/// Realized variances for horizon j over a panel: one value per 1/j window,
/// windows indexed w = day * j + (intraday window). Values are floored at
/// kRvFloor. A window whose prices are not all finite is flagged skipped
/// (value 0, skipped = true).
struct RvSeries {
    int j = 1;
    int n_days = 0;
    RvEstimator estimator = RvEstimator::msrv;
    int tsrv_k = 0;       // spacing actually used (0 unless TSRV)
    int msrv_scales = 0;  // scales actually used (0 unless MSRV)
    std::vector<double> value;   // size n_days * j
    std::vector<char> skipped;   // same size

    std::size_t size() const { return value.size(); }
};

/// Sum of squared increments of log prices p_0..p_M (M increments).
double rv_naive(const std::vector<double>& prices);

/// Two-scale estimator: subsampled average RV at spacing k, bias-corrected by
/// the full-grid RV,
///   avg_k - ((M - k + 1) / (k M)) * rv_all,
/// floored at kRvFloor. Requires 1 <= k <= M - 1.
double rv_tsrv(const std::vector<double>& prices, int k);

/// Multi-scale estimator: sum_{i=1..M_s} a_i * avg_i with the quadratic
/// weights a_i = 12 i (i - (M_s+1)/2) / (M_s (M_s^2-1)), which satisfy
/// sum a_i = 1 and sum a_i / i = 0 exactly, cancelling the noise bias.
/// Floored at kRvFloor. Requires 2 <= n_scales <= M / 2.
double rv_msrv(const std::vector<double>& prices, int n_scales);

/// The multi-scale combination weights a_1..a_{n_scales} (index 0 is a_1).
std::vector<double> msrv_weights(int n_scales);

/// Apply the chosen estimator windowwise over the panel's observed prices.
/// m must be divisible by j.
RvSeries rv_panel(const TickPanel& panel, int j, const RvOptions& opts = {});

/// CSV with header day,horizon,window,rv,skipped (17-digit values).
void export_rv_csv(const RvSeries& rv, const std::string& path);
RvSeries ingest_rv_csv(const std::string& path);

}  // namespace gqito
