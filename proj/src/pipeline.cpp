#include "gqito/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gqito {

namespace {

[[noreturn]] void cfg_fail(const std::string& what) { throw ConfigError(what); }

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            cfg_fail("unknown key \"" + it.key() + "\" in " + where);
        }
    }
}

double get_num(const json& obj, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj.at(key).is_number()) cfg_fail(std::string(key) + " must be a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const char* key, int dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj.at(key).is_number_integer()) cfg_fail(std::string(key) + " must be an integer");
    return obj.at(key).get<int>();
}

std::string get_str(const json& obj, const char* key) {
    if (!obj.at(key).is_string()) cfg_fail(std::string(key) + " must be a string");
    return obj.at(key).get<std::string>();
}

std::vector<int> get_horizons(const json& obj, const char* key) {
    std::vector<int> out;
    if (!obj.contains(key)) return {1, 2, 3, 4, 5, 6};
    if (!obj.at(key).is_array() || obj.at(key).empty()) {
        cfg_fail(std::string(key) + " must be a non-empty array of integers");
    }
    for (const auto& v : obj.at(key)) {
        if (!v.is_number_integer()) cfg_fail(std::string(key) + " entries must be integers");
        const int j = v.get<int>();
        if (j < 1 || j > kMaxHorizon) {
            cfg_fail(std::string(key) + " entries must lie in [1, " +
                     std::to_string(kMaxHorizon) + "]");
        }
        out.push_back(j);
    }
    return out;
}

void parse_box(const json& obj, ParamBox& box) {
    check_keys(obj, "fit.box", {"omega", "beta", "gamma", "alpha"});
    auto range = [&](const char* key, double& lo, double& hi) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            cfg_fail(std::string("fit.box.") + key + " must be [lower, upper]");
        }
        lo = v[0].get<double>();
        hi = v[1].get<double>();
    };
    range("omega", box.omega_lo, box.omega_hi);
    range("beta", box.beta_lo, box.beta_hi);
    range("gamma", box.gamma_lo, box.gamma_hi);
    range("alpha", box.alpha_lo, box.alpha_hi);
    try {
        box.validate();
    } catch (const DomainError& e) {
        cfg_fail(std::string("fit.box: ") + e.what());
    }
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json hash_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DomainError("cannot reopen artifact " + p.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return json{{"path", p.filename().string()},
                {"bytes", bytes.size()},
                {"fnv1a64", hash_hex(fnv1a64(bytes.data(), bytes.size()))}};
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DomainError("cannot open " + p.string() + " for writing");
    out << text;
    if (!out) throw DomainError("failed writing " + p.string());
}

}  // namespace

int effective_in_sample_days(const RunConfig& cfg, int n_days) {
    int in_s = cfg.in_sample_days;
    if (in_s == 0) in_s = std::max(2, static_cast<int>(n_days * 0.8));
    if (in_s < 2 || in_s >= n_days) {
        throw DomainError("in_sample_days " + std::to_string(in_s) +
                          " impossible for a " + std::to_string(n_days) + "-day panel");
    }
    return in_s;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) cfg_fail("cannot open config file " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        cfg_fail("invalid JSON in " + path + ": " + e.what());
    }
    if (!root.is_object()) cfg_fail(path + ": config must be a JSON object");
    check_keys(root, "config",
               {"seed", "threads", "simulate", "input", "rv", "fit", "forecast"});

    RunConfig cfg;
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned() && !root.at("seed").is_number_integer()) {
            cfg_fail("seed must be a nonnegative integer");
        }
        const auto s = root.at("seed").get<long long>();
        if (s < 0) cfg_fail("seed must be a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    cfg.threads = get_int(root, "threads", 1);
    if (cfg.threads < 1) cfg_fail("threads must be >= 1");

    if (root.contains("simulate")) {
        const json& sim = root.at("simulate");
        check_keys(sim, "simulate",
                   {"dgp", "days", "ticks_per_day", "euler_substeps", "x0", "params",
                    "sigma0_sq", "heston", "noise_sd"});
        const std::string dgp = sim.contains("dgp") ? get_str(sim, "dgp") : "gqarch";
        SimGrid grid;
        grid.n_days = get_int(sim, "days", dgp == "gqarch" ? 250 : 101);
        grid.m = get_int(sim, "ticks_per_day", dgp == "gqarch" ? 2160 : 2340);
        grid.euler_substeps = get_int(sim, "euler_substeps", 1);
        grid.seed = cfg.seed;
        cfg.noise_sd = get_num(sim, "noise_sd", 0.0);
        if (dgp == "gqarch") {
            cfg.dgp = RunConfig::Dgp::gqarch;
            grid.x0 = get_num(sim, "x0", 10.0);
            cfg.gqarch.grid = grid;
            cfg.gqarch.sigma0_sq = get_num(sim, "sigma0_sq", 0.667);
            if (sim.contains("params")) {
                const json& p = sim.at("params");
                check_keys(p, "simulate.params", {"omega", "beta", "gamma", "alpha", "mu"});
                cfg.gqarch.params.omega = get_num(p, "omega", 0.2);
                cfg.gqarch.params.beta = get_num(p, "beta", 0.3);
                cfg.gqarch.params.gamma = get_num(p, "gamma", 0.4);
                cfg.gqarch.params.alpha = get_num(p, "alpha", 0.1);
                cfg.gqarch.params.mu = get_num(p, "mu", 0.0);
            }
        } else if (dgp == "heston" || dgp == "heston_jump") {
            cfg.dgp = dgp == "heston" ? RunConfig::Dgp::heston : RunConfig::Dgp::heston_jump;
            grid.x0 = 0.0;
            cfg.heston.grid = grid;
            const json h = sim.contains("heston") ? sim.at("heston") : json::object();
            check_keys(h, "simulate.heston",
                       {"a", "b", "vol_of_vol", "rho", "r", "s0", "v0", "jump_intensity",
                        "jump_sd"});
            cfg.heston.a = get_num(h, "a", 0.01);
            cfg.heston.b = get_num(h, "b", 0.001);
            cfg.heston.vol_of_vol = get_num(h, "vol_of_vol", 0.075);
            cfg.heston.rho = get_num(h, "rho", -0.8);
            cfg.heston.r = get_num(h, "r", 0.02);
            cfg.heston.s0 = get_num(h, "s0", 50.0);
            cfg.heston.v0 = get_num(h, "v0", 0.05);
            if (cfg.dgp == RunConfig::Dgp::heston_jump) {
                cfg.heston.jump_intensity = get_num(h, "jump_intensity", 1.0);
                cfg.heston.jump_sd = get_num(h, "jump_sd", 0.01);
            } else {
                cfg.heston.jump_intensity = 0.0;
                cfg.heston.jump_sd = 0.0;
            }
        } else {
            cfg_fail("simulate.dgp must be gqarch, heston, or heston_jump");
        }
    }

    if (root.contains("input")) {
        const json& ip = root.at("input");
        check_keys(ip, "input", {"panel_csv", "rv_csv", "fit_json"});
        if (ip.contains("panel_csv")) cfg.input_panel_csv = get_str(ip, "panel_csv");
        if (ip.contains("rv_csv")) cfg.input_rv_csv = get_str(ip, "rv_csv");
        if (ip.contains("fit_json")) cfg.input_fit_json = get_str(ip, "fit_json");
    }
    if (cfg.dgp != RunConfig::Dgp::none && cfg.input_panel_csv) {
        cfg_fail("config has both simulate and input.panel_csv; pick one price source");
    }

    if (root.contains("rv")) {
        const json& rv = root.at("rv");
        check_keys(rv, "rv", {"estimator", "horizons", "tsrv_k", "msrv_scales"});
        if (rv.contains("estimator")) {
            cfg.rv_opts.estimator = rv_estimator_from_string(get_str(rv, "estimator"));
        }
        cfg.rv_horizons = get_horizons(rv, "horizons");
        cfg.rv_opts.tsrv_k = get_int(rv, "tsrv_k", 0);
        cfg.rv_opts.msrv_scales = get_int(rv, "msrv_scales", 0);
        if (cfg.rv_opts.tsrv_k < 0) cfg_fail("rv.tsrv_k must be >= 0 (0 = automatic)");
        if (cfg.rv_opts.msrv_scales < 0) cfg_fail("rv.msrv_scales must be >= 0 (0 = automatic)");
    }

    if (root.contains("fit")) {
        cfg.have_fit_section = true;
        const json& ft = root.at("fit");
        check_keys(ft, "fit", {"box", "max_evals", "tol", "compute_se"});
        if (ft.contains("box")) parse_box(ft.at("box"), cfg.fit.box);
        cfg.fit.max_evals_per_start = get_int(ft, "max_evals", cfg.fit.max_evals_per_start);
        if (cfg.fit.max_evals_per_start < 10) cfg_fail("fit.max_evals must be >= 10");
        cfg.fit.tol = get_num(ft, "tol", cfg.fit.tol);
        if (!(cfg.fit.tol > 0.0)) cfg_fail("fit.tol must be positive");
        if (ft.contains("compute_se")) {
            if (!ft.at("compute_se").is_boolean()) cfg_fail("fit.compute_se must be a boolean");
            cfg.fit.compute_se = ft.at("compute_se").get<bool>();
        }
    }

    if (root.contains("forecast")) {
        const json& fc = root.at("forecast");
        check_keys(fc, "forecast", {"horizons", "in_sample_days", "refit_per_horizon"});
        cfg.forecast_horizons = get_horizons(fc, "horizons");
        cfg.in_sample_days = get_int(fc, "in_sample_days", 0);
        if (cfg.in_sample_days < 0) cfg_fail("forecast.in_sample_days must be >= 0");
        if (fc.contains("refit_per_horizon")) {
            if (!fc.at("refit_per_horizon").is_boolean()) {
                cfg_fail("forecast.refit_per_horizon must be a boolean");
            }
            cfg.refit_per_horizon = fc.at("refit_per_horizon").get<bool>();
        }
    }
    cfg.config_echo = root.dump();
    return cfg;
}

TickPanel resolve_panel(const RunConfig& cfg) {
    switch (cfg.dgp) {
        case RunConfig::Dgp::gqarch: {
            GqarchSimConfig c = cfg.gqarch;
            c.grid.seed = cfg.seed;
            TickPanel panel = simulate_gqarch_ito(c);
            add_noise(panel, cfg.noise_sd, cfg.seed);
            return panel;
        }
        case RunConfig::Dgp::heston:
        case RunConfig::Dgp::heston_jump: {
            HestonSimConfig c = cfg.heston;
            c.grid.seed = cfg.seed;
            TickPanel panel = simulate_heston(c);
            add_noise(panel, cfg.noise_sd, cfg.seed);
            return panel;
        }
        case RunConfig::Dgp::none:
            break;
    }
    if (!cfg.input_panel_csv) {
        throw ConfigError("config provides neither simulate nor input.panel_csv");
    }
    return ingest_ticks(*cfg.input_panel_csv);
}

std::string run_experiment(const RunConfig& cfg, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir);

    std::vector<fs::path> written;
    std::string stage = "panel";
    json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] =
        cfg.config_echo.empty() ? json() : json::parse(cfg.config_echo);

    try {
        // Panel stage.
        TickPanel panel = resolve_panel(cfg);
        export_panel_csv(panel, (dir / "panel.csv").string());
        written.push_back(dir / "panel.csv");
        if (panel.has_truth) {
            export_truth_csv(panel, (dir / "truth.csv").string());
            written.push_back(dir / "truth.csv");
        }

        // Realized-variance stage.
        stage = "rv";
        RvSeries daily;
        bool have_daily = false;
        for (int j : cfg.rv_horizons) {
            const RvSeries rv = rv_panel(panel, j, cfg.rv_opts);
            const fs::path p = dir / ("rv_j" + std::to_string(j) + ".csv");
            export_rv_csv(rv, p.string());
            written.push_back(p);
            if (j == 1) {
                daily = rv;
                have_daily = true;
            }
        }
        if (!have_daily) daily = rv_panel(panel, 1, cfg.rv_opts);

        // Fit stage (in-sample, matching the forecasts downstream).
        stage = "fit";
        const int in_s = effective_in_sample_days(cfg, panel.n_days);
        ForecastTask task;
        task.horizons = cfg.forecast_horizons;
        task.in_sample_days = in_s;
        task.rv_opts = cfg.rv_opts;
        task.refit_per_horizon = cfg.refit_per_horizon;
        task.fit = cfg.fit;
        const EvalReport report = rolling_eval(task, panel);
        const LowFreqSeries in_sample = build_lowfreq(panel, daily, in_s);
        write_text(dir / "fit.json",
                   fit_result_to_json(report.daily_fit, in_sample, cfg.rv_opts.estimator));
        written.push_back(dir / "fit.json");

        // Forecast stage.
        stage = "forecast";
        export_forecast_csv(report, (dir / "forecasts.csv").string());
        written.push_back(dir / "forecasts.csv");

        // Evaluation stage.
        stage = "evaluate";
        export_summary_csv(report, (dir / "eval_summary.csv").string());
        written.push_back(dir / "eval_summary.csv");

        stage = "manifest";
        manifest["status"] = "ok";
        json outputs = json::array();
        for (const fs::path& p : written) outputs.push_back(hash_file(p));
        manifest["outputs"] = outputs;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        manifest["wall_time_s"] = secs;
        const std::string text = manifest.dump(2) + "\n";
        write_text(dir / "manifest.json", text);
        return text;
    } catch (const std::exception& e) {
        for (const fs::path& p : written) {
            fs::rename(p, fs::path(p.string() + ".partial"), ec);
        }
        manifest["status"] = "failed";
        manifest["failed_stage"] = stage;
        manifest["error"] = e.what();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        manifest["wall_time_s"] = secs;
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");
        throw;
    }
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (n <= 0) return;
    if (threads > n) threads = static_cast<int>(n);
    if (threads <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::mutex err_mu;
    long err_index = -1;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (err_index < 0 || i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

void replicate_param_recovery(const std::string& out_dir, std::uint64_t seed, int reps,
                              int threads) {
    if (reps < 1) throw ConfigError("reps must be >= 1");
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir);

    const ModelParams truth{0.2, 0.3, 0.4, 0.1, 0.0};
    struct Row {
        ModelParams p;
        bool converged;
    };
    std::vector<Row> rows(reps);
    parallel_for(reps, threads, [&](long r) {
        GqarchSimConfig sim;
        sim.params = truth;
        sim.grid.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        TickPanel panel = simulate_gqarch_ito(sim);
        add_noise(panel, 0.001, sim.grid.seed);
        const RvSeries daily = rv_panel(panel, 1, RvOptions{RvEstimator::msrv, 0, 0});
        const LowFreqSeries series = build_lowfreq(panel, daily);
        FitOptions opts;
        opts.compute_se = false;
        const FitResult fit = fit_qmle(series, opts);
        rows[r] = Row{fit.params, fit.converged};
    });

    std::ofstream csv(dir / "theta_hat.csv");
    if (!csv) throw DomainError("cannot open theta_hat.csv for writing");
    csv << "rep,omega,beta,gamma,alpha,converged\n";
    for (int r = 0; r < reps; ++r) {
        csv << r << ',' << fmt_full(rows[r].p.omega) << ',' << fmt_full(rows[r].p.beta) << ','
            << fmt_full(rows[r].p.gamma) << ',' << fmt_full(rows[r].p.alpha) << ','
            << (rows[r].converged ? 1 : 0) << '\n';
    }
    csv.close();
    if (!csv) throw DomainError("failed writing theta_hat.csv");

    auto collect = [&](auto get) {
        std::vector<double> v(reps);
        for (int r = 0; r < reps; ++r) v[r] = get(rows[r].p);
        return v;
    };
    const double tv[4] = {truth.omega, truth.beta, truth.gamma, truth.alpha};
    const char* names[4] = {"omega", "beta", "gamma", "alpha"};
    std::vector<std::vector<double>> vals{
        collect([](const ModelParams& p) { return p.omega; }),
        collect([](const ModelParams& p) { return p.beta; }),
        collect([](const ModelParams& p) { return p.gamma; }),
        collect([](const ModelParams& p) { return p.alpha; })};
    json summary;
    summary["version"] = kVersion;
    summary["reps"] = reps;
    summary["seed"] = seed;
    long conv = 0;
    for (const Row& r : rows) conv += r.converged ? 1 : 0;
    summary["converged"] = conv;
    for (int c = 0; c < 4; ++c) {
        std::vector<double> abs_err = vals[c];
        for (double& v : abs_err) v = std::abs(v - tv[c]);
        summary["truth"][names[c]] = tv[c];
        summary["median"][names[c]] = median(vals[c]);
        summary["median_abs_error"][names[c]] = median(abs_err);
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void replicate_forecast_eval(const std::string& out_dir, bool with_jumps,
                             std::uint64_t seed, int reps, int threads) {
    if (reps < 1) throw ConfigError("reps must be >= 1");
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir);
    const std::string tag = with_jumps ? "jump" : "sv";

    std::vector<EvalReport> reports(reps);
    parallel_for(reps, threads, [&](long r) {
        HestonSimConfig sim;
        sim.grid.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        if (with_jumps) {
            sim.jump_intensity = 1.0;
            sim.jump_sd = 0.01;
        }
        const TickPanel panel = simulate_heston(sim);
        ForecastTask task;
        task.in_sample_days = panel.n_days - 1;
        task.rv_opts.estimator = RvEstimator::naive;
        task.fit.compute_se = false;
        reports[r] = rolling_eval(task, panel);
    });

    std::ofstream csv(dir / ("windows_" + tag + ".csv"));
    if (!csv) throw DomainError("cannot open windows csv for writing");
    csv << "rep,horizon,window,forecast,rv\n";
    for (int r = 0; r < reps; ++r) {
        for (const ForecastRow& row : reports[r].rows) {
            if (row.skipped) continue;
            csv << r << ',' << row.horizon << ',' << row.window << ','
                << fmt_full(row.forecast) << ',' << fmt_full(row.realized) << '\n';
        }
    }
    csv.close();
    if (!csv) throw DomainError("failed writing windows csv");

    std::ofstream sum(dir / ("summary_" + tag + ".csv"));
    if (!sum) throw DomainError("cannot open summary csv for writing");
    sum << "horizon,n_used,mae,mse,amape,ll\n";
    for (int j = 1; j <= kMaxHorizon; ++j) {
        std::vector<double> f, rv;
        for (int r = 0; r < reps; ++r) {
            for (const ForecastRow& row : reports[r].rows) {
                if (row.horizon != j || row.skipped) continue;
                f.push_back(row.forecast < kRvFloor ? kRvFloor : row.forecast);
                rv.push_back(row.realized < kRvFloor ? kRvFloor : row.realized);
            }
        }
        const Metrics m = compute_metrics(f, rv);
        sum << j << ',' << f.size() << ',' << fmt_full(m.mae) << ',' << fmt_full(m.mse) << ','
            << fmt_full(m.amape) << ',' << fmt_full(m.ll) << '\n';
    }
    sum.close();
    if (!sum) throw DomainError("failed writing summary csv");
}

}  // namespace gqito
