#include "stlwsm/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stlwsm {

Matrix reconstruct(const Matrix& w, const Matrix& mu) {
    if (w.rows() != w.cols() || w.cols() != mu.rows())
        throw std::invalid_argument("reconstruct: dimension mismatch");
    return pinv_square(w) * mu;
}

WeightVector compute_weights(const Vector& singulars, double c, std::size_t m, double eps) {
    if (!(c > 0.0))
        throw std::invalid_argument("compute_weights: c must be positive");
    for (Eigen::Index k = 0; k < singulars.size(); ++k) {
        if (singulars(k) < 0.0 || (k > 0 && singulars(k) > singulars(k - 1)))
            throw std::invalid_argument("compute_weights: singular values must be non-negative "
                                        "and non-increasing");
    }
    WeightVector out;
    out.c = c;
    out.eps = eps;
    out.weights = (c * std::sqrt(static_cast<double>(m))) / (singulars.array() + eps);
    return out;
}

Matrix weighted_svt(const SvdResult& f, const WeightVector& w) {
    if (w.weights.size() != f.s.size())
        throw std::invalid_argument("weighted_svt: expected " + std::to_string(f.s.size()) +
                                    " weights, got " + std::to_string(w.weights.size()));
    for (Eigen::Index k = 0; k < w.weights.size(); ++k) {
        if (w.weights(k) < 0.0 || (k > 0 && w.weights(k) < w.weights(k - 1)))
            throw std::invalid_argument("weighted_svt: weights must be non-negative and "
                                        "non-decreasing");
    }
    const Vector shrunk = (f.s - w.weights).cwiseMax(0.0);
    return f.u * shrunk.asDiagonal() * f.v.transpose();
}

Matrix weighted_svt(const Matrix& x, const WeightVector& w) {
    return weighted_svt(svd_full(x), w);
}

Matrix weighted_svt_self(const Matrix& x, double c, std::size_t m, double eps) {
    const SvdResult f = svd_full(x);
    return weighted_svt(f, compute_weights(f.s, c, m, eps));
}

double weighted_nuclear_norm(const Matrix& x, const Vector& weights) {
    const SvdResult f = svd_full(x);
    if (weights.size() != f.s.size())
        throw std::invalid_argument("weighted_nuclear_norm: weight count mismatch");
    return weights.dot(f.s);
}

} // namespace stlwsm
