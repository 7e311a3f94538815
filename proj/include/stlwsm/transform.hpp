#pragma once

#include "stlwsm/numerics.hpp"

#include <cstddef>

namespace stlwsm {

/// Per-group transform W (p x p) with its sparse code mu (p x M).
struct TransformState {
    Matrix w;
    Matrix mu;
    double lambda = 0.0;
    std::size_t sparsity = 0;
};

/// w * x with every column hard-thresholded to its `s` largest-magnitude
/// entries. On equal magnitudes the lower row index is kept.
Matrix sparse_code(const Matrix& w, const Matrix& x, std::size_t s);

/// Minimizer of the singular-value subproblem
///   phi^2 - 2 psi phi - lambda log10(phi),  phi > 0,
/// i.e. the positive root of 2 phi^2 - 2 psi phi - lambda / ln 10 = 0.
double stationary_singular_value(double psi, double lambda);

/// Closed-form minimizer over W of
///   ||W x - mu||_F^2 + lambda (||W||_F^2 - log10 |det W|).
///
/// With x x^T + lambda I = Z Z^T (Cholesky) and Z^{-1} x mu^T = P Psi Q^T,
/// the minimizer is Q diag(phi) P^T Z^{-1}, phi_k = stationary_singular_value(psi_k, lambda).
/// Requires lambda > 0.
Matrix update_transform(const Matrix& x, const Matrix& mu, double lambda);

/// The updated transform together with its exact inverse Z P diag(1/phi) Q^T,
/// which exists because every phi is positive.
struct TransformUpdate {
    Matrix w;
    Matrix w_inverse;
};
TransformUpdate update_transform_factored(const Matrix& x, const Matrix& mu, double lambda);

/// ||w x - mu||_F^2 + lambda (||w||_F^2 - log10 |det w|); +inf for singular w.
double transform_objective(const Matrix& w, const Matrix& x, const Matrix& mu, double lambda);

} // namespace stlwsm
