// Command-line front end: simulate tick panels, estimate realized variance,
// fit the variance recursion by QMLE, forecast fractional-day windows, and
// reproduce the two built-in replication studies.
//
// Exit codes: 0 success, 1 numeric/domain failure, 2 unusable flags or config.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gqito/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gqito;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
    auto* cfg = cmd->add_option("--config", args.config_path, "JSON config file");
    if (needs_config) cfg->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--seed", args.seed, "master RNG seed (overrides config)")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker threads for replications")
        ->check(CLI::PositiveNumber);
}

RunConfig prepared_config(const CommonArgs& args) {
    RunConfig cfg = load_config(args.config_path);
    if (args.seed_set) {
        cfg.seed = args.seed;
        cfg.gqarch.grid.seed = args.seed;
        cfg.heston.grid.seed = args.seed;
    }
    if (args.threads > 0) cfg.threads = args.threads;
    return cfg;
}

void ensure_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DomainError("cannot open " + p.string() + " for writing");
    out << text;
    if (!out) throw DomainError("failed writing " + p.string());
}

RvSeries daily_rv_for_fit(const RunConfig& cfg, const TickPanel& panel) {
    if (cfg.input_rv_csv) {
        RvSeries rv = ingest_rv_csv(*cfg.input_rv_csv);
        if (rv.j != 1) throw ConfigError("input.rv_csv must hold a horizon-1 series");
        if (rv.n_days != panel.n_days) {
            throw ConfigError("input.rv_csv day count does not match the panel");
        }
        return rv;
    }
    return rv_panel(panel, 1, cfg.rv_opts);
}

ForecastTask task_from_config(const RunConfig& cfg, const TickPanel& panel) {
    ForecastTask task;
    task.horizons = cfg.forecast_horizons;
    task.in_sample_days = effective_in_sample_days(cfg, panel.n_days);
    task.rv_opts = cfg.rv_opts;
    task.refit_per_horizon = cfg.refit_per_horizon;
    task.fit = cfg.fit;
    if (cfg.input_fit_json) task.fixed_params = params_from_fit_json(*cfg.input_fit_json);
    return task;
}

int dispatch(const std::string& cmd, const CommonArgs& args, int reps,
             const std::string& dgp_choice) {
    if (cmd == "replicate-4.1") {
        ensure_out(args.out_dir);
        replicate_param_recovery(args.out_dir, args.seed_set ? args.seed : 1,
                                 reps > 0 ? reps : 100,
                                 args.threads > 0 ? args.threads : 1);
        return 0;
    }
    if (cmd == "replicate-4.2") {
        ensure_out(args.out_dir);
        const int n = reps > 0 ? reps : 30;
        const std::uint64_t seed = args.seed_set ? args.seed : 1;
        const int threads = args.threads > 0 ? args.threads : 1;
        if (dgp_choice == "sv" || dgp_choice == "both") {
            replicate_forecast_eval(args.out_dir, false, seed, n, threads);
        }
        if (dgp_choice == "jump" || dgp_choice == "both") {
            replicate_forecast_eval(args.out_dir, true, seed, n, threads);
        }
        return 0;
    }

    RunConfig cfg = prepared_config(args);
    if (cmd == "run") {
        run_experiment(cfg, args.out_dir);
        return 0;
    }

    ensure_out(args.out_dir);
    const fs::path dir(args.out_dir);
    TickPanel panel = resolve_panel(cfg);

    if (cmd == "simulate") {
        export_panel_csv(panel, (dir / "panel.csv").string());
        if (panel.has_truth) export_truth_csv(panel, (dir / "truth.csv").string());
        for (const std::string& w : panel.warnings) std::cerr << "warning: " << w << '\n';
        return 0;
    }
    if (cmd == "rv") {
        for (int j : cfg.rv_horizons) {
            const RvSeries rv = rv_panel(panel, j, cfg.rv_opts);
            export_rv_csv(rv, (dir / ("rv_j" + std::to_string(j) + ".csv")).string());
        }
        return 0;
    }
    if (cmd == "fit") {
        const RvSeries daily = daily_rv_for_fit(cfg, panel);
        const LowFreqSeries series = build_lowfreq(panel, daily);
        const FitResult fit = fit_qmle(series, cfg.fit);
        write_file(dir / "fit.json", fit_result_to_json(fit, series, cfg.rv_opts.estimator));
        return 0;
    }
    if (cmd == "forecast" || cmd == "evaluate") {
        const ForecastTask task = task_from_config(cfg, panel);
        const EvalReport report = rolling_eval(task, panel);
        if (cmd == "forecast") {
            export_forecast_csv(report, (dir / "forecasts.csv").string());
        } else {
            export_forecast_csv(report, (dir / "eval_windows.csv").string());
            export_summary_csv(report, (dir / "eval_summary.csv").string());
        }
        return 0;
    }
    throw ConfigError("unknown subcommand " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GQARCH-Ito volatility toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    int reps = 0;
    std::string dgp_choice = "both";

    for (const char* name : {"simulate", "rv", "fit", "forecast", "evaluate", "run"}) {
        add_common(app.add_subcommand(name), args, true);
    }
    auto* r41 = app.add_subcommand("replicate-4.1",
                                   "parameter-recovery study on simulated noisy panels");
    add_common(r41, args, false);
    r41->add_option("--reps", reps, "replications (default 100)")->check(CLI::PositiveNumber);
    auto* r42 = app.add_subcommand("replicate-4.2",
                                   "forecast evaluation under misspecified volatility DGPs");
    add_common(r42, args, false);
    r42->add_option("--reps", reps, "replications per DGP (default 30)")
        ->check(CLI::PositiveNumber);
    r42->add_option("--dgp", dgp_choice, "sv, jump, or both (default both)")
        ->check(CLI::IsMember({"sv", "jump", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), args, reps, dgp_choice);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
