#include "gqito/symmat.hpp"

#include <algorithm>
#include <numeric>

namespace gqito {

EigResult jacobi_eig(const SymMat& m) {
    const int n = m.n;
    if (n < 1) throw DomainError("jacobi_eig needs order >= 1");
    SymMat a = m;
    SymMat v(n);
    for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) s += a.at(p, q) * a.at(p, q);
        return std::sqrt(s);
    };
    double base = 0.0;
    for (double x : a.a) base += x * x;
    const double tol = 1e-15 * std::max(std::sqrt(base), 1e-300);

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i) < a.at(j, j); });
    EigResult out{std::vector<double>(n), SymMat(n)};
    for (int c = 0; c < n; ++c) {
        out.values[c] = a.at(order[c], order[c]);
        for (int r = 0; r < n; ++r) out.vectors.at(r, c) = v.at(r, order[c]);
    }
    return out;
}

SymMat pd_sandwich_inverse(const SymMat& b, const SymMat& x) {
    if (b.n != x.n) throw DomainError("sandwich matrices must share order");
    const EigResult e = jacobi_eig(b);
    for (double lam : e.values) {
        if (!(lam > 0.0)) {
            std::string msg = "matrix not positive definite; eigenvalues:";
            for (double l : e.values) msg += " " + fmt_full(l);
            throw DomainError(msg);
        }
    }
    const int n = b.n;
    // binv = V diag(1/lambda) V^T
    SymMat binv(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += e.vectors.at(r, k) * e.vectors.at(c, k) / e.values[k];
            }
            binv.at(r, c) = s;
        }
    }
    SymMat tmp(n), out(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += binv.at(r, k) * x.at(k, c);
            tmp.at(r, c) = s;
        }
    }
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += tmp.at(r, k) * binv.at(k, c);
            out.at(r, c) = s;
        }
    }
    return out;
}

}  // namespace gqito
