// Python bindings over the main operations: simulation, realized variance,
// QMLE fitting, forecasting/evaluation, and the full experiment pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gqito/pipeline.hpp"

namespace py = pybind11;
using namespace gqito;

namespace {

ModelParams params_from_dict(const py::dict& d) {
    ModelParams p;
    if (d.contains("omega")) p.omega = d["omega"].cast<double>();
    if (d.contains("beta")) p.beta = d["beta"].cast<double>();
    if (d.contains("gamma")) p.gamma = d["gamma"].cast<double>();
    if (d.contains("alpha")) p.alpha = d["alpha"].cast<double>();
    if (d.contains("mu")) p.mu = d["mu"].cast<double>();
    return p;
}

py::dict params_to_dict(const ModelParams& p) {
    py::dict d;
    d["omega"] = p.omega;
    d["beta"] = p.beta;
    d["gamma"] = p.gamma;
    d["alpha"] = p.alpha;
    d["mu"] = p.mu;
    return d;
}

RvOptions rv_options(const std::string& estimator) {
    RvOptions opts;
    opts.estimator = rv_estimator_from_string(estimator);
    return opts;
}

py::dict fit_to_dict(const FitResult& fit) {
    py::dict d;
    d["params"] = params_to_dict(fit.params);
    d["loglik"] = fit.loglik;
    d["converged"] = fit.converged;
    d["evals"] = fit.evals;
    d["g1"] = fit.g1;
    d["se"] = py::make_tuple(fit.se[0], fit.se[1], fit.se[2], fit.se[3]);
    d["se_ok"] = fit.se_ok;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "GQARCH-Ito volatility toolkit core";
    m.attr("__version__") = kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<TickPanel>(m, "TickPanel")
        .def_readonly("n_days", &TickPanel::n_days)
        .def_readonly("m", &TickPanel::m)
        .def_readonly("clean", &TickPanel::x)
        .def_readonly("observed", &TickPanel::y)
        .def_readonly("spot_var_open", &TickPanel::spot_var_open)
        .def_readonly("z_true", &TickPanel::z_true)
        .def("true_iv",
             [](const TickPanel& p, int j) {
                 if (j < 1 || j > kMaxHorizon) throw DomainError("horizon outside [1, 6]");
                 if (!p.has_truth) throw DomainError("panel has no simulation truth");
                 return p.true_iv[j - 1];
             },
             py::arg("j"))
        .def("export_csv",
             [](const TickPanel& p, const std::string& path) { export_panel_csv(p, path); },
             py::arg("path"));

    m.def("derive_coeffs",
          [](const py::dict& params, int j) {
              const GqarchCoeffs c = derive_coeffs(params_from_dict(params), j);
              py::dict d;
              d["omega_g"] = c.omega_g;
              d["beta_g"] = c.beta_g;
              d["alpha_g"] = c.alpha_g;
              d["decay"] = c.decay;
              d["j"] = c.j;
              return d;
          },
          py::arg("params"), py::arg("j") = 1,
          "Window-recursion coefficients for horizon j");

    m.def("expected_window_iv",
          [](const py::dict& params, double spot_var, int j) {
              return expected_window_iv(params_from_dict(params), spot_var, j);
          },
          py::arg("params"), py::arg("spot_var"), py::arg("j") = 1);

    m.def("g_series_truncated",
          [](const py::dict& params, double spot_var, int j, int k_max) {
              return g_series_truncated(params_from_dict(params), spot_var, j, k_max);
          },
          py::arg("params"), py::arg("spot_var"), py::arg("j") = 1, py::arg("k_max") = 60);

    m.def("simulate_gqarch",
          [](const py::dict& params, int days, int m, int substeps, double x0,
             double sigma0_sq, double noise_sd, std::uint64_t seed) {
              GqarchSimConfig cfg;
              cfg.params = params_from_dict(params);
              cfg.grid.n_days = days;
              cfg.grid.m = m;
              cfg.grid.euler_substeps = substeps;
              cfg.grid.x0 = x0;
              cfg.grid.seed = seed;
              cfg.sigma0_sq = sigma0_sq;
              TickPanel panel = simulate_gqarch_ito(cfg);
              add_noise(panel, noise_sd, seed);
              return panel;
          },
          py::arg("params"), py::arg("days") = 250, py::arg("m") = 2160,
          py::arg("substeps") = 1, py::arg("x0") = 10.0, py::arg("sigma0_sq") = 0.667,
          py::arg("noise_sd") = 0.0, py::arg("seed") = 1);

    m.def("simulate_heston",
          [](int days, int m, double a, double b, double vol_of_vol, double rho, double r,
             double s0, double v0, double jump_intensity, double jump_sd,
             std::uint64_t seed) {
              HestonSimConfig cfg;
              cfg.grid.n_days = days;
              cfg.grid.m = m;
              cfg.grid.seed = seed;
              cfg.a = a;
              cfg.b = b;
              cfg.vol_of_vol = vol_of_vol;
              cfg.rho = rho;
              cfg.r = r;
              cfg.s0 = s0;
              cfg.v0 = v0;
              cfg.jump_intensity = jump_intensity;
              cfg.jump_sd = jump_sd;
              return simulate_heston(cfg);
          },
          py::arg("days") = 101, py::arg("m") = 2340, py::arg("a") = 0.01,
          py::arg("b") = 0.001, py::arg("vol_of_vol") = 0.075, py::arg("rho") = -0.8,
          py::arg("r") = 0.02, py::arg("s0") = 50.0, py::arg("v0") = 0.05,
          py::arg("jump_intensity") = 0.0, py::arg("jump_sd") = 0.0, py::arg("seed") = 1);

    m.def("ingest_ticks", &ingest_ticks, py::arg("path"));

    m.def("rv",
          [](const TickPanel& panel, int j, const std::string& estimator) {
              return rv_panel(panel, j, rv_options(estimator)).value;
          },
          py::arg("panel"), py::arg("j") = 1, py::arg("estimator") = "msrv",
          "Realized variance per 1/j window over the panel's observed prices");

    m.def("fit",
          [](const TickPanel& panel, const std::string& estimator, bool compute_se) {
              const RvSeries daily = rv_panel(panel, 1, rv_options(estimator));
              const LowFreqSeries series = build_lowfreq(panel, daily);
              FitOptions opts;
              opts.compute_se = compute_se;
              return fit_to_dict(fit_qmle(series, opts));
          },
          py::arg("panel"), py::arg("estimator") = "msrv", py::arg("compute_se") = false,
          "Daily QMLE fit of the variance recursion");

    m.def("evaluate",
          [](const TickPanel& panel, int in_sample_days, const std::vector<int>& horizons,
             const std::string& estimator) {
              ForecastTask task;
              task.horizons = horizons;
              task.in_sample_days = in_sample_days;
              task.rv_opts = rv_options(estimator);
              task.fit.compute_se = false;
              const EvalReport report = rolling_eval(task, panel);
              py::list rows;
              for (const ForecastRow& r : report.rows) {
                  py::dict d;
                  d["horizon"] = r.horizon;
                  d["window"] = r.window;
                  d["forecast"] = r.forecast;
                  d["rv"] = r.realized;
                  d["skipped"] = r.skipped;
                  rows.append(d);
              }
              py::list summary;
              for (const HorizonSummary& h : report.summary) {
                  py::dict d;
                  d["horizon"] = h.horizon;
                  d["n_used"] = h.n_used;
                  d["n_skipped"] = h.n_skipped;
                  d["mae"] = h.metrics.mae;
                  d["mse"] = h.metrics.mse;
                  d["amape"] = h.metrics.amape;
                  d["ll"] = h.metrics.ll;
                  summary.append(d);
              }
              py::dict out;
              out["rows"] = rows;
              out["summary"] = summary;
              out["fit"] = fit_to_dict(report.daily_fit);
              return out;
          },
          py::arg("panel"), py::arg("in_sample_days"),
          py::arg("horizons") = std::vector<int>{1, 2, 3, 4, 5, 6},
          py::arg("estimator") = "msrv",
          "Fit in-sample, forecast and score the out-of-sample windows");

    m.def("run_experiment",
          [](const std::string& config_path, const std::string& out_dir) {
              return run_experiment(load_config(config_path), out_dir);
          },
          py::arg("config_path"), py::arg("out_dir"),
          "Full pipeline from a JSON config; returns the manifest JSON text");
}
