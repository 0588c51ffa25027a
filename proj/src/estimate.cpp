#include "gqito/estimate.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "gqito/nelder_mead.hpp"
#include "gqito/symmat.hpp"
#include "json.hpp"

namespace gqito {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const char* const kCoordNames[4] = {"omega", "beta", "gamma", "alpha"};

void check_series(const LowFreqSeries& s) {
    if (s.n < 1) throw DomainError("series has no windows");
    const auto n = static_cast<std::size_t>(s.n);
    if (s.z.size() != n || s.rv.size() != n || s.skipped.size() != n) {
        throw DomainError("series arrays do not match n");
    }
    if (s.j < 1 || s.j > kMaxHorizon) throw DomainError("series horizon outside [1, 6]");
}

double sigmoid(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    const double e = std::exp(u);
    return e / (1.0 + e);
}

/// Box <-> R^d bijection over the free coordinates (lower < upper).
struct BoxTransform {
    std::array<double, 4> lo{}, hi{};
    std::vector<int> free;

    explicit BoxTransform(const ParamBox& box) {
        box.validate();
        lo = {box.omega_lo, box.beta_lo, box.gamma_lo, box.alpha_lo};
        hi = {box.omega_hi, box.beta_hi, box.gamma_hi, box.alpha_hi};
        for (int c = 0; c < 4; ++c) {
            if (lo[c] < hi[c]) free.push_back(c);
        }
    }

    ModelParams params(const std::vector<double>& u, double mu) const {
        std::array<double, 4> v = lo;  // pinned coordinates stay at lo == hi
        for (std::size_t i = 0; i < free.size(); ++i) {
            const int c = free[i];
            double f = sigmoid(u[i]);
            // Keep strictly inside the open box even for extreme u.
            if (f < 1e-15) f = 1e-15;
            if (f > 1.0 - 1e-15) f = 1.0 - 1e-15;
            v[c] = lo[c] + (hi[c] - lo[c]) * f;
        }
        return ModelParams{v[0], v[1], v[2], v[3], mu};
    }

    std::vector<double> u_from(const ModelParams& p) const {
        const double v[4] = {p.omega, p.beta, p.gamma, p.alpha};
        std::vector<double> u(free.size());
        for (std::size_t i = 0; i < free.size(); ++i) {
            const int c = free[i];
            const double f = (v[c] - lo[c]) / (hi[c] - lo[c]);
            if (!(f > 0.0 && f < 1.0)) {
                throw DomainError(std::string("start value for ") + kCoordNames[c] +
                                  " lies outside the open box");
            }
            u[i] = std::log(f / (1.0 - f));
        }
        return u;
    }
};

long init_window_count(long n) {
    long k = n / 10;
    if (k < 5) k = 5;
    if (k > n) k = n;
    return k;
}

}  // namespace

LowFreqSeries build_lowfreq(const TickPanel& panel, const RvSeries& daily_rv, int use_days) {
    panel.validate();
    if (daily_rv.j != 1) throw DomainError("daily series needs a j = 1 realized-variance series");
    if (daily_rv.n_days != panel.n_days) {
        throw DomainError("realized-variance series does not match the panel's day count");
    }
    int n = use_days > 0 ? use_days : panel.n_days;
    if (n > panel.n_days) throw DomainError("use_days exceeds the panel's day count");

    LowFreqSeries s;
    s.j = 1;
    s.n = n;
    std::vector<double> raw(n);
    for (int i = 0; i < n; ++i) {
        const double prev = i == 0 ? panel.x[panel.tick_index(0, 0)]
                                   : panel.x[panel.tick_index(i - 1, panel.m)];
        raw[i] = panel.x[panel.tick_index(i, panel.m)] - prev;
    }
    s.mu_hat = mean(raw);
    s.z.resize(n);
    for (int i = 0; i < n; ++i) s.z[i] = raw[i] - s.mu_hat;
    s.rv.assign(daily_rv.value.begin(), daily_rv.value.begin() + n);
    s.skipped.assign(daily_rv.skipped.begin(), daily_rv.skipped.begin() + n);
    return s;
}

LowFreqSeries build_fractional(const TickPanel& panel, const RvSeries& rv_j, double mu_daily) {
    panel.validate();
    const int j = rv_j.j;
    if (rv_j.n_days != panel.n_days) {
        throw DomainError("realized-variance series does not match the panel's day count");
    }
    if (panel.m % j != 0) throw DomainError("ticks per day not divisible by horizon");
    const int mw = panel.m / j;

    LowFreqSeries s;
    s.j = j;
    s.n = static_cast<long>(panel.n_days) * j;
    s.mu_hat = mu_daily;
    s.z.resize(s.n);
    for (int day = 0; day < panel.n_days; ++day) {
        for (int w = 0; w < j; ++w) {
            const double ret = panel.x[panel.tick_index(day, (w + 1) * mw)] -
                               panel.x[panel.tick_index(day, w * mw)];
            s.z[static_cast<std::size_t>(day) * j + w] = ret - mu_daily / j;
        }
    }
    s.rv = rv_j.value;
    s.skipped = rv_j.skipped;
    return s;
}

LoglikResult quasi_loglik(const LowFreqSeries& series, const ModelParams& params,
                          const ParamBox& box) {
    check_series(series);
    const GqarchCoeffs coeffs = derive_coeffs(params, series.j, box);

    LoglikResult out;
    out.g.resize(series.n);

    const long k_init = init_window_count(series.n);
    double acc = 0.0;
    long cnt = 0;
    for (long i = 0; i < k_init; ++i) {
        if (!series.skipped[i]) {
            acc += series.rv[i];
            ++cnt;
        }
    }
    if (cnt == 0) throw DomainError("all initializer windows are skipped");
    out.g1 = acc / cnt;
    if (out.g1 < kGMin) out.g1 = kGMin;

    out.g[0] = out.g1;
    GState st{out.g1, 0};
    for (long i = 1; i < series.n; ++i) {
        // Broken-data windows advance the recursion as a zero return.
        const double z = std::isfinite(series.z[i - 1]) ? series.z[i - 1] : 0.0;
        st = g_update(st, coeffs, z);
        out.g[i] = st.g;
        if (st.g <= kGMin) ++out.floor_hits;
    }

    double sum = 0.0;
    for (long i = 0; i < series.n; ++i) {
        if (series.skipped[i]) continue;
        sum += std::log(out.g[i]) + series.rv[i] / out.g[i];
        ++out.n_used;
    }
    if (out.n_used == 0) throw DomainError("all windows are skipped");
    out.loglik = -sum / (2.0 * out.n_used);
    return out;
}

std::vector<double> loglik_terms(const LowFreqSeries& series, const ModelParams& params,
                                 const ParamBox& box) {
    const LoglikResult r = quasi_loglik(series, params, box);
    std::vector<double> terms(series.n, kNaN);
    for (long i = 0; i < series.n; ++i) {
        if (!series.skipped[i]) {
            terms[i] = -0.5 * (std::log(r.g[i]) + series.rv[i] / r.g[i]);
        }
    }
    return terms;
}

FitResult fit_qmle(const LowFreqSeries& series, const FitOptions& opts) {
    check_series(series);
    const BoxTransform tf(opts.box);
    const std::size_t d = tf.free.size();

    auto objective = [&](const std::vector<double>& u) {
        try {
            return -quasi_loglik(series, tf.params(u, series.mu_hat), opts.box).loglik;
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    FitResult fit;
    fit.free_coords = tf.free;

    std::vector<std::vector<double>> starts;
    if (d > 0) {
        starts.emplace_back(d, 0.0);  // box center
        const double corner = std::log(3.0);  // logit(0.75)
        const int total = 1 << d;
        for (int mask = 0; mask < total; ++mask) {
            int parity = 0;
            std::vector<double> u(d);
            for (std::size_t c = 0; c < d; ++c) {
                const bool up = (mask >> c) & 1;
                parity ^= up ? 1 : 0;
                u[c] = up ? corner : -corner;
            }
            // Keep all 2^d corners through d = 3; at d = 4 the even-parity
            // half caps the start count at 8 (plus the center).
            if (d == 4 && parity != 0) continue;
            starts.push_back(std::move(u));
        }
        for (const ModelParams& p : opts.extra_starts) starts.push_back(tf.u_from(p));
    }

    NmOptions nm;
    nm.max_evals = opts.max_evals_per_start;
    nm.diam_tol = opts.tol;

    bool have_best = false;
    NmResult best;
    for (const std::vector<double>& u0 : starts) {
        NmResult r = nelder_mead(objective, u0, 0.5, nm);
        fit.evals += r.evals;
        const bool better =
            !have_best || r.f < best.f || (r.f == best.f && r.x < best.x);
        if (better) {
            best = std::move(r);
            have_best = true;
        }
    }
    fit.n_starts = static_cast<int>(starts.size());

    ModelParams params;
    if (d == 0) {
        params = tf.params({}, series.mu_hat);
        fit.converged = true;
    } else {
        if (!have_best) throw DomainError("no optimizer start succeeded");
        params = tf.params(best.x, series.mu_hat);
        fit.converged = best.converged;
    }
    const LoglikResult ll = quasi_loglik(series, params, opts.box);
    fit.params = params;
    fit.loglik = ll.loglik;
    fit.g1 = ll.g1;
    fit.n_used = ll.n_used;
    fit.floor_hits = ll.floor_hits;
    fit.g_path = ll.g;
    fit.se = {kNaN, kNaN, kNaN, kNaN};

    if (opts.compute_se) {
        try {
            SandwichResult sw = sandwich_se(series, params, opts.box);
            fit.se = sw.se;
            fit.score_cov = std::move(sw.score_cov);
            fit.hessian = std::move(sw.hessian);
            fit.se_ok = true;
        } catch (const DomainError& e) {
            fit.se_ok = false;
            fit.se_message = e.what();
        }
    } else {
        fit.se_message = "not requested";
    }
    return fit;
}

SandwichResult sandwich_se(const LowFreqSeries& series, const ModelParams& params,
                           const ParamBox& box) {
    check_series(series);
    const BoxTransform tf(box);
    const int d = static_cast<int>(tf.free.size());
    if (d == 0) throw DomainError("sandwich_se needs at least one free coordinate");

    SandwichResult out;
    out.free_coords = tf.free;
    out.se = {kNaN, kNaN, kNaN, kNaN};

    auto with = [&](int coord, double delta) {
        ModelParams p = params;
        switch (coord) {
            case 0: p.omega += delta; break;
            case 1: p.beta += delta; break;
            case 2: p.gamma += delta; break;
            case 3: p.alpha += delta; break;
        }
        return p;
    };
    const double base[4] = {params.omega, params.beta, params.gamma, params.alpha};

    // A-hat: outer products of per-window central-difference scores.
    std::vector<std::vector<double>> scores(d);
    for (int i = 0; i < d; ++i) {
        const int c = tf.free[i];
        const double h = 1e-5 * std::max(std::abs(base[c]), 0.01);
        const std::vector<double> up = loglik_terms(series, with(c, +h), box);
        const std::vector<double> dn = loglik_terms(series, with(c, -h), box);
        scores[i].resize(series.n, kNaN);
        for (long w = 0; w < series.n; ++w) {
            if (!series.skipped[w]) scores[i][w] = (up[w] - dn[w]) / (2.0 * h);
        }
    }
    long n_used = 0;
    SymMat a(d);
    for (long w = 0; w < series.n; ++w) {
        if (series.skipped[w]) continue;
        ++n_used;
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) a.at(r, c) += scores[r][w] * scores[c][w];
        }
    }
    for (double& v : a.a) v /= static_cast<double>(n_used);

    // B-hat = -Hessian of the average quasi log-likelihood.
    auto avg_ll = [&](const ModelParams& p) { return quasi_loglik(series, p, box).loglik; };
    const double f0 = avg_ll(params);
    std::vector<double> h(d);
    for (int i = 0; i < d; ++i) h[i] = 1e-3 * std::max(std::abs(base[tf.free[i]]), 0.01);

    SymMat b(d);
    for (int i = 0; i < d; ++i) {
        const int ci = tf.free[i];
        const double fp = avg_ll(with(ci, +h[i]));
        const double fm = avg_ll(with(ci, -h[i]));
        b.at(i, i) = -(fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (int k = i + 1; k < d; ++k) {
            const int ck = tf.free[k];
            ModelParams pp = with(ci, +h[i]);
            ModelParams pm = with(ci, +h[i]);
            ModelParams mp = with(ci, -h[i]);
            ModelParams mm = with(ci, -h[i]);
            switch (ck) {
                case 0: pp.omega += h[k]; pm.omega -= h[k]; mp.omega += h[k]; mm.omega -= h[k]; break;
                case 1: pp.beta += h[k]; pm.beta -= h[k]; mp.beta += h[k]; mm.beta -= h[k]; break;
                case 2: pp.gamma += h[k]; pm.gamma -= h[k]; mp.gamma += h[k]; mm.gamma -= h[k]; break;
                case 3: pp.alpha += h[k]; pm.alpha -= h[k]; mp.alpha += h[k]; mm.alpha -= h[k]; break;
            }
            const double mixed = (avg_ll(pp) - avg_ll(pm) - avg_ll(mp) + avg_ll(mm)) /
                                 (4.0 * h[i] * h[k]);
            b.at(i, k) = -mixed;
            b.at(k, i) = -mixed;
        }
    }

    const EigResult eig = jacobi_eig(b);
    out.b_eigenvalues = eig.values;
    const SymMat cov = pd_sandwich_inverse(b, a);  // throws when B is not PD

    for (int i = 0; i < d; ++i) {
        out.se[tf.free[i]] = std::sqrt(cov.at(i, i) / static_cast<double>(n_used));
    }
    out.score_cov = a.a;
    out.hessian = b.a;
    return out;
}

std::string fit_result_to_json(const FitResult& fit, const LowFreqSeries& series,
                               RvEstimator estimator) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["params"] = {{"omega", fit.params.omega},
                   {"beta", fit.params.beta},
                   {"gamma", fit.params.gamma},
                   {"alpha", fit.params.alpha},
                   {"mu", fit.params.mu}};
    nlohmann::json se;
    for (int c = 0; c < 4; ++c) {
        if (std::isfinite(fit.se[c])) {
            se[kCoordNames[c]] = fit.se[c];
        } else {
            se[kCoordNames[c]] = nullptr;
        }
    }
    j["se"] = se;
    nlohmann::json freec = nlohmann::json::array();
    for (int c : fit.free_coords) freec.push_back(kCoordNames[c]);
    j["free_coords"] = freec;
    j["loglik"] = fit.loglik;
    j["converged"] = fit.converged;
    j["evals"] = fit.evals;
    j["n_starts"] = fit.n_starts;
    j["horizon"] = series.j;
    j["n_windows"] = series.n;
    j["n_used"] = fit.n_used;
    j["g1"] = fit.g1;
    j["floor_hits"] = fit.floor_hits;
    j["estimator"] = to_string(estimator);
    j["se_ok"] = fit.se_ok;
    j["se_message"] = fit.se_message;
    j["score_cov"] = fit.score_cov;
    j["hessian"] = fit.hessian;
    j["g_path"] = fit.g_path;
    return j.dump(2) + "\n";
}

ModelParams params_from_fit_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fit file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    try {
        const auto& p = j.at("params");
        return ModelParams{p.at("omega").get<double>(), p.at("beta").get<double>(),
                           p.at("gamma").get<double>(), p.at("alpha").get<double>(),
                           p.at("mu").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("fit file " + path + " lacks params: " + e.what());
    }
}

}  // namespace gqito
