#pragma once

#include <functional>
#include <vector>

#include "gqito/common.hpp"

namespace gqito {

struct NmOptions {
    int max_evals = 20000;
    /// Convergence: max infinity-norm distance from the best vertex to any
    /// other vertex falls below this.
    double diam_tol = 1e-8;
};

struct NmResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Classic Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink
/// 1/2) minimizing f from x0 with an axis-aligned initial simplex of the
/// given step. Fully deterministic: vertex ordering breaks value ties
/// lexicographically on coordinates.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, double step,
                     const NmOptions& opts = {});

}  // namespace gqito
