#pragma once

#include "stlwsm/numerics.hpp"

#include <cstddef>

namespace stlwsm {

struct WeightVector {
    Vector weights;
    double c = 1.0;
    double eps = 1e-16;
};

inline constexpr double kWeightEps = 1e-16;

/// Image-domain group estimate W^+ mu.
Matrix reconstruct(const Matrix& w, const Matrix& mu);

/// w_k = c sqrt(m) / (sigma_k + eps) for singular values sorted non-increasing.
WeightVector compute_weights(const Vector& singulars, double c, std::size_t m,
                             double eps = kWeightEps);

/// L diag(max(sigma_k - w_k, 0)) R^T for x = L diag(sigma) R^T.
/// The weights must be non-decreasing, the regime where this is the exact
/// proximal map of the weighted nuclear norm.
Matrix weighted_svt(const Matrix& x, const WeightVector& w);
Matrix weighted_svt(const SvdResult& x_svd, const WeightVector& w);

/// Weights from the singular values of x itself, then one shrinkage pass.
Matrix weighted_svt_self(const Matrix& x, double c, std::size_t m, double eps = kWeightEps);

/// sum_k w_k sigma_k(x).
double weighted_nuclear_norm(const Matrix& x, const Vector& weights);

} // namespace stlwsm
