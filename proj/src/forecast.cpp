#include "gqito/forecast.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace gqito {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double floored(double v) { return v < kRvFloor ? kRvFloor : v; }

}  // namespace

Metrics compute_metrics(const std::vector<double>& forecast,
                        const std::vector<double>& realized) {
    if (forecast.size() != realized.size()) {
        throw DomainError("forecast/realized length mismatch");
    }
    if (forecast.empty()) throw DomainError("metrics need at least one pair");
    Metrics m;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const double f = forecast[i];
        const double rv = realized[i];
        if (!(f > 0.0) || !(rv > 0.0) || !std::isfinite(f) || !std::isfinite(rv)) {
            throw DomainError("metrics need positive finite pairs");
        }
        const double d = rv - f;
        m.mae += std::abs(d);
        m.mse += d * d;
        m.amape += std::abs(d) / (f + rv);
        const double ld = std::log(f) - std::log(rv);
        m.ll += ld * ld;
    }
    const double n = static_cast<double>(forecast.size());
    m.mae /= n;
    m.mse /= n;
    m.amape /= n;
    m.ll /= n;
    return m;
}

std::vector<double> forecast_path(const LowFreqSeries& frac, const GqarchCoeffs& coeffs,
                                  double g1) {
    if (frac.j != coeffs.j) throw DomainError("series and coefficients disagree on horizon");
    if (!(g1 > 0.0) || !std::isfinite(g1)) throw DomainError("g1 must be positive and finite");
    std::vector<double> out(frac.n);
    GState st{floored(g1), 0};
    out[0] = st.g;
    for (long w = 1; w < frac.n; ++w) {
        // Broken-data windows advance the recursion as a zero return.
        const double z = std::isfinite(frac.z[w - 1]) ? frac.z[w - 1] : 0.0;
        st = g_update(st, coeffs, z);
        out[w] = st.g;
    }
    return out;
}

EvalReport rolling_eval(const ForecastTask& task, const TickPanel& panel) {
    panel.validate();
    if (task.in_sample_days < 2 || task.in_sample_days >= panel.n_days) {
        throw DomainError("in_sample_days must lie in [2, n_days - 1]");
    }
    if (task.horizons.empty()) throw DomainError("no horizons requested");

    EvalReport report;
    double mu_daily;
    if (task.fixed_params) {
        report.daily_fit.params = *task.fixed_params;
        report.daily_fit.converged = true;
        mu_daily = task.fixed_params->mu;
    } else {
        // Daily fit on the in-sample window.
        const RvSeries daily = rv_panel(panel, 1, task.rv_opts);
        const LowFreqSeries in_sample = build_lowfreq(panel, daily, task.in_sample_days);
        report.daily_fit = fit_qmle(in_sample, task.fit);
        mu_daily = in_sample.mu_hat;
    }

    for (int j : task.horizons) {
        const RvSeries rv_j = rv_panel(panel, j, task.rv_opts);
        const LowFreqSeries frac = build_fractional(panel, rv_j, mu_daily);

        ModelParams params = report.daily_fit.params;
        if (task.refit_per_horizon && !task.fixed_params) {
            LowFreqSeries frac_in = frac;
            frac_in.n = static_cast<long>(task.in_sample_days) * j;
            frac_in.z.resize(frac_in.n);
            frac_in.rv.resize(frac_in.n);
            frac_in.skipped.resize(frac_in.n);
            params = fit_qmle(frac_in, task.fit).params;
        }
        const GqarchCoeffs coeffs = derive_coeffs(params, j, task.fit.box);

        // Initializer: mean in-sample realized variance on this grid.
        double acc = 0.0;
        long cnt = 0;
        const long in_windows = static_cast<long>(task.in_sample_days) * j;
        for (long w = 0; w < in_windows; ++w) {
            if (!frac.skipped[w]) {
                acc += frac.rv[w];
                ++cnt;
            }
        }
        if (cnt == 0) throw DomainError("all in-sample windows skipped at horizon " +
                                        std::to_string(j));
        const std::vector<double> path = forecast_path(frac, coeffs, acc / cnt);

        HorizonSummary hs;
        hs.horizon = j;
        std::vector<double> f_used, rv_used;
        for (long w = in_windows; w < frac.n; ++w) {
            ForecastRow row;
            row.horizon = j;
            row.window = w;
            row.forecast = path[w];
            row.realized = frac.rv[w];
            row.skipped = frac.skipped[w] != 0;
            report.rows.push_back(row);
            if (row.skipped) {
                ++hs.n_skipped;
            } else {
                ++hs.n_used;
                f_used.push_back(floored(row.forecast));
                rv_used.push_back(floored(row.realized));
            }
        }
        if (hs.n_used > 0) {
            hs.metrics = compute_metrics(f_used, rv_used);
        } else {
            hs.metrics = Metrics{kNaN, kNaN, kNaN, kNaN};
        }
        report.summary.push_back(hs);
    }
    return report;
}

void export_forecast_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    out << "horizon,window,forecast,rv,skipped\n";
    for (const ForecastRow& r : report.rows) {
        out << r.horizon << ',' << r.window << ',' << fmt_full(r.forecast) << ','
            << fmt_full(r.realized) << ',' << (r.skipped ? 1 : 0) << '\n';
    }
    if (!out) throw DomainError("failed writing " + path);
}

void export_summary_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    out << "horizon,n_used,n_skipped,mae,mse,amape,ll\n";
    for (const HorizonSummary& h : report.summary) {
        out << h.horizon << ',' << h.n_used << ',' << h.n_skipped << ','
            << fmt_full(h.metrics.mae) << ',' << fmt_full(h.metrics.mse) << ','
            << fmt_full(h.metrics.amape) << ',' << fmt_full(h.metrics.ll) << '\n';
    }
    if (!out) throw DomainError("failed writing " + path);
}

}  // namespace gqito
