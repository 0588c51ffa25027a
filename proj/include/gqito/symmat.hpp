#pragma once

#include <cmath>
#include <vector>

#include "gqito/common.hpp"

namespace gqito {

/// Dense symmetric matrix of small fixed order (the sandwich covariance needs
/// at most 4x4). Row-major storage.
struct SymMat {
    int n = 0;
    std::vector<double> a;  // n * n

    explicit SymMat(int order = 0) : n(order), a(static_cast<std::size_t>(order) * order, 0.0) {}
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }
};

/// Eigenvalues (ascending) and eigenvectors (columns of V) by cyclic Jacobi.
struct EigResult {
    std::vector<double> values;
    SymMat vectors;
};

EigResult jacobi_eig(const SymMat& m);

/// B^{-1} X B^{-1} computed through B's eigendecomposition. Throws DomainError
/// listing the eigenvalues when B is not positive definite.
SymMat pd_sandwich_inverse(const SymMat& b, const SymMat& x);

}  // namespace gqito
