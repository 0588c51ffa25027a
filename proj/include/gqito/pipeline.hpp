#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gqito/forecast.hpp"
#include "gqito/simulate.hpp"

namespace gqito {

/// Parsed experiment configuration (see README for the JSON schema). A panel
/// comes either from `simulate` (one of the configured DGPs plus optional
/// microstructure noise) or from `input.panel_csv`; exactly one source must
/// be present for stages that need prices.
struct RunConfig {
    std::uint64_t seed = 1;
    int threads = 1;

    enum class Dgp { none, gqarch, heston, heston_jump };
    Dgp dgp = Dgp::none;
    GqarchSimConfig gqarch{};
    HestonSimConfig heston{};
    double noise_sd = 0.0;

    std::optional<std::string> input_panel_csv;
    std::optional<std::string> input_rv_csv;    // daily series for fit
    std::optional<std::string> input_fit_json;  // params for forecast

    RvOptions rv_opts{};
    std::vector<int> rv_horizons{1, 2, 3, 4, 5, 6};

    FitOptions fit{};
    bool have_fit_section = false;

    std::vector<int> forecast_horizons{1, 2, 3, 4, 5, 6};
    int in_sample_days = 0;  // 0: 80% of the panel, at least 2 days
    bool refit_per_horizon = false;

    /// Normalized JSON text of the loaded config, echoed into manifests;
    /// empty for configs built in memory.
    std::string config_echo;
};

/// Parse and validate a config file; ConfigError on any problem.
RunConfig load_config(const std::string& path);

/// Resolve the panel for a config (simulate + noise, or ingest).
TickPanel resolve_panel(const RunConfig& cfg);

/// In-sample day count a config implies for an n_days panel (explicit value,
/// or 80% rounded down, minimum 2); DomainError when the split is impossible.
int effective_in_sample_days(const RunConfig& cfg, int n_days);

/// Full pipeline into out_dir: panel, realized variances, fit, forecasts,
/// evaluation summary, manifest.json. Returns the manifest as JSON text.
/// On a stage failure, artifacts already written are renamed with a .partial
/// suffix and a manifest recording the failed stage is still written before
/// the exception propagates.
std::string run_experiment(const RunConfig& cfg, const std::string& out_dir);

/// Parameter-recovery study: `reps` independent panels from the default
/// GQARCH-Ito configuration, each fitted from noisy prices; writes
/// theta_hat.csv (rep,omega,beta,gamma,alpha,converged) and summary.json
/// (per-coordinate medians and median absolute errors).
void replicate_param_recovery(const std::string& out_dir, std::uint64_t seed, int reps,
                              int threads);

/// Forecast-evaluation study under misspecification: `reps` panels from the
/// square-root stochastic-volatility DGP (with jumps when with_jumps), fit on
/// all but the last day, evaluated on the last day's windows at horizons
/// 1..6; writes windows_<tag>.csv plus summary_<tag>.csv aggregated over all
/// replications (rows = horizons, columns = metrics).
void replicate_forecast_eval(const std::string& out_dir, bool with_jumps,
                             std::uint64_t seed, int reps, int threads);

/// Deterministic parallel map: body(i) for i in [0, n), distributed over
/// `threads` workers; exceptions are collected and the first (lowest index)
/// is rethrown after all workers join.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

}  // namespace gqito
