#include "gqito/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gqito {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

bool vertex_less(const Vertex& a, const Vertex& b) {
    if (a.f != b.f) return a.f < b.f;
    return a.x < b.x;
}

}  // namespace

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, double step,
                     const NmOptions& opts) {
    const std::size_t d = x0.size();
    if (d == 0) throw DomainError("nelder_mead needs at least 1 dimension");
    if (!(step > 0.0)) throw DomainError("nelder_mead needs a positive step");

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<Vertex> s;
    s.reserve(d + 1);
    s.push_back({x0, eval(x0)});
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<double> x = x0;
        x[c] += step;
        s.push_back({x, eval(x)});
    }
    std::sort(s.begin(), s.end(), vertex_less);

    auto diameter = [&] {
        double dm = 0.0;
        for (std::size_t i = 1; i <= d; ++i) {
            for (std::size_t c = 0; c < d; ++c) {
                dm = std::max(dm, std::abs(s[i].x[c] - s[0].x[c]));
            }
        }
        return dm;
    };

    bool converged = false;
    while (evals < opts.max_evals) {
        if (diameter() < opts.diam_tol) {
            converged = true;
            break;
        }
        // Centroid of all but the worst vertex.
        std::vector<double> cen(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t c = 0; c < d; ++c) cen[c] += s[i].x[c];
        }
        for (double& v : cen) v /= static_cast<double>(d);
        const Vertex& worst = s[d];

        auto blend = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t c = 0; c < d; ++c) x[c] = cen[c] + t * (worst.x[c] - cen[c]);
            return x;
        };

        std::vector<double> xr = blend(-1.0);
        const double fr = eval(xr);
        if (fr < s[0].f) {
            std::vector<double> xe = blend(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                s[d] = {std::move(xe), fe};
            } else {
                s[d] = {std::move(xr), fr};
            }
        } else if (fr < s[d - 1].f) {
            s[d] = {std::move(xr), fr};
        } else {
            const bool outside = fr < worst.f;
            std::vector<double> xc = blend(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < (outside ? fr : worst.f)) {
                s[d] = {std::move(xc), fc};
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t c = 0; c < d; ++c) {
                        s[i].x[c] = s[0].x[c] + 0.5 * (s[i].x[c] - s[0].x[c]);
                    }
                    s[i].f = eval(s[i].x);
                }
            }
        }
        std::sort(s.begin(), s.end(), vertex_less);
    }

    return NmResult{s[0].x, s[0].f, evals, converged};
}

}  // namespace gqito
