#include "gqito/realized.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gqito {

namespace {

double sq(double v) { return v * v; }

// (1/k) * sum_{i=k..M} (p_i - p_{i-k})^2 over p_0..p_M.
double avg_rv(const double* p, int M, int k) {
    double acc = 0.0;
    for (int i = k; i <= M; ++i) acc += sq(p[i] - p[i - k]);
    return acc / k;
}

double naive_span(const double* p, int M) {
    double acc = 0.0;
    for (int i = 1; i <= M; ++i) acc += sq(p[i] - p[i - 1]);
    return acc;
}

double tsrv_span(const double* p, int M, int k) {
    if (M < 2) throw DomainError("TSRV needs at least 2 increments");
    if (k < 1 || k > M - 1) {
        throw DomainError("TSRV spacing k must lie in [1, M-1], got k=" + std::to_string(k) +
                          " with M=" + std::to_string(M));
    }
    const double slow = avg_rv(p, M, k);
    const double fast = naive_span(p, M);
    const double mbar = static_cast<double>(M - k + 1) / k;
    double v = slow - (mbar / M) * fast;
    return v < kRvFloor ? kRvFloor : v;
}

double msrv_weight(int i, int n_scales) {
    const double ms = n_scales;
    return 12.0 * i * (i - (ms + 1.0) / 2.0) / (ms * (ms * ms - 1.0));
}

double msrv_span(const double* p, int M, int n_scales) {
    if (n_scales < 2 || 2 * n_scales > M) {
        throw DomainError("MSRV scales must lie in [2, M/2], got " + std::to_string(n_scales) +
                          " with M=" + std::to_string(M));
    }
    double v = 0.0;
    for (int i = 1; i <= n_scales; ++i) {
        v += msrv_weight(i, n_scales) * avg_rv(p, M, i);
    }
    return v < kRvFloor ? kRvFloor : v;
}

int default_tsrv_k(int M) {
    int k = static_cast<int>(std::lround(std::pow(static_cast<double>(M), 2.0 / 3.0)));
    if (k < 10) k = 10;
    if (k > M / 4) k = M / 4;
    if (k < 2) k = 2;
    if (k > M - 1) k = M - 1;
    return k;
}

int default_msrv_scales(int M) {
    int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M))));
    if (s < 2) s = 2;
    if (s > M / 2) s = M / 2;
    return s;
}

}  // namespace

RvEstimator rv_estimator_from_string(const std::string& name) {
    if (name == "naive") return RvEstimator::naive;
    if (name == "tsrv") return RvEstimator::tsrv;
    if (name == "msrv") return RvEstimator::msrv;
    throw ConfigError("unknown realized-variance estimator \"" + name +
                      "\" (expected naive, tsrv, or msrv)");
}

std::string to_string(RvEstimator est) {
    switch (est) {
        case RvEstimator::naive: return "naive";
        case RvEstimator::tsrv: return "tsrv";
        case RvEstimator::msrv: return "msrv";
    }
    throw DomainError("invalid estimator enum");
}

double rv_naive(const std::vector<double>& prices) {
    if (prices.size() < 2) throw DomainError("realized variance needs at least 2 prices");
    return naive_span(prices.data(), static_cast<int>(prices.size()) - 1);
}

double rv_tsrv(const std::vector<double>& prices, int k) {
    if (prices.size() < 2) throw DomainError("realized variance needs at least 2 prices");
    return tsrv_span(prices.data(), static_cast<int>(prices.size()) - 1, k);
}

double rv_msrv(const std::vector<double>& prices, int n_scales) {
    if (prices.size() < 2) throw DomainError("realized variance needs at least 2 prices");
    return msrv_span(prices.data(), static_cast<int>(prices.size()) - 1, n_scales);
}

std::vector<double> msrv_weights(int n_scales) {
    if (n_scales < 2) throw DomainError("MSRV needs at least 2 scales");
    std::vector<double> w(n_scales);
    for (int i = 1; i <= n_scales; ++i) w[i - 1] = msrv_weight(i, n_scales);
    return w;
}

RvSeries rv_panel(const TickPanel& panel, int j, const RvOptions& opts) {
    panel.validate();
    if (j < 1 || j > kMaxHorizon) {
        throw DomainError("horizon j = " + std::to_string(j) + " outside [1, " +
                          std::to_string(kMaxHorizon) + "]");
    }
    if (panel.m % j != 0) {
        throw DomainError("ticks per day m = " + std::to_string(panel.m) +
                          " not divisible by horizon j = " + std::to_string(j));
    }
    const int mw = panel.m / j;  // increments per window

    RvSeries out;
    out.j = j;
    out.n_days = panel.n_days;
    out.estimator = opts.estimator;
    if (opts.estimator == RvEstimator::tsrv) {
        out.tsrv_k = opts.tsrv_k > 0 ? opts.tsrv_k : default_tsrv_k(mw);
    } else if (opts.estimator == RvEstimator::msrv) {
        out.msrv_scales = opts.msrv_scales > 0 ? opts.msrv_scales : default_msrv_scales(mw);
    }
    out.value.assign(static_cast<std::size_t>(panel.n_days) * j, 0.0);
    out.skipped.assign(out.value.size(), 0);

    for (int day = 0; day < panel.n_days; ++day) {
        for (int w = 0; w < j; ++w) {
            const double* p = panel.y.data() + panel.tick_index(day, w * mw);
            bool ok = true;
            for (int k = 0; k <= mw; ++k) {
                if (!std::isfinite(p[k])) {
                    ok = false;
                    break;
                }
            }
            const std::size_t idx = static_cast<std::size_t>(day) * j + w;
            if (!ok) {
                out.skipped[idx] = 1;
                continue;
            }
            double v;
            switch (opts.estimator) {
                case RvEstimator::naive: v = naive_span(p, mw); break;
                case RvEstimator::tsrv: v = tsrv_span(p, mw, out.tsrv_k); break;
                case RvEstimator::msrv: v = msrv_span(p, mw, out.msrv_scales); break;
                default: throw DomainError("invalid estimator enum");
            }
            out.value[idx] = v < kRvFloor ? kRvFloor : v;
        }
    }
    return out;
}

void export_rv_csv(const RvSeries& rv, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    out << "day,horizon,window,rv,skipped\n";
    for (std::size_t i = 0; i < rv.value.size(); ++i) {
        out << (i / rv.j) << ',' << rv.j << ',' << (i % rv.j) << ','
            << fmt_full(rv.value[i]) << ',' << static_cast<int>(rv.skipped[i]) << '\n';
    }
    if (!out) throw DomainError("failed writing " + path);
}

RvSeries ingest_rv_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open rv file " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    RvSeries rv;
    rv.j = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        long day = 0, horizon = 0, window = 0, skipped = 0;
        double value = 0.0;
        char c1, c2, c3, c4;
        std::istringstream row(line);
        if (!(row >> day >> c1 >> horizon >> c2 >> window >> c3 >> value >> c4 >> skipped) ||
            c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',') {
            throw ConfigError(path + ": line " + std::to_string(line_no) + ": malformed rv row");
        }
        if (rv.j == 0) rv.j = static_cast<int>(horizon);
        if (horizon != rv.j) {
            throw ConfigError(path + ": line " + std::to_string(line_no) +
                              ": mixed horizons in one rv file");
        }
        rv.value.push_back(value);
        rv.skipped.push_back(skipped != 0);
    }
    if (rv.j < 1 || rv.value.empty() || rv.value.size() % rv.j != 0) {
        throw ConfigError(path + ": rv rows do not fill whole days");
    }
    rv.n_days = static_cast<int>(rv.value.size()) / rv.j;
    return rv;
}

}  // namespace gqito
