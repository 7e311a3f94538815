#include "stlwsm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace stlwsm {

namespace {
const double kLn10 = std::log(10.0);
}

Matrix sparse_code(const Matrix& w, const Matrix& x, std::size_t s) {
    if (w.cols() != x.rows())
        throw std::invalid_argument("sparse_code: dimension mismatch");
    const auto p = static_cast<std::size_t>(w.rows());
    if (s > p)
        throw std::invalid_argument("sparse_code: sparsity exceeds transform rows");

    Matrix mu = w * x;
    if (s == p)
        return mu;

    std::vector<Eigen::Index> order(p);
    for (Eigen::Index j = 0; j < mu.cols(); ++j) {
        auto col = mu.col(j);
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) {
                             const double ma = std::abs(col(a)), mb = std::abs(col(b));
                             return ma > mb || (ma == mb && a < b);
                         });
        for (std::size_t k = s; k < p; ++k)
            col(order[k]) = 0.0;
    }
    return mu;
}

double stationary_singular_value(double psi, double lambda) {
    return (psi + std::sqrt(psi * psi + 2.0 * lambda / kLn10)) / 2.0;
}

TransformUpdate update_transform_factored(const Matrix& x, const Matrix& mu, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("update_transform: lambda must be positive");
    if (x.rows() != mu.rows() || x.cols() != mu.cols())
        throw std::invalid_argument("update_transform: x and mu must have the same shape");
    const Eigen::Index p = x.rows();

    Matrix gram = x * x.transpose();
    gram.diagonal().array() += lambda;
    // Product rounding can leave the Gram matrix asymmetric in the last ulp.
    gram = 0.5 * (gram + gram.transpose()).eval();
    const Matrix z = spd_factor(gram);
    const auto zl = z.triangularView<Eigen::Lower>();

    const Matrix b = zl.solve(x * mu.transpose());
    const SvdResult f = svd_full(b);

    Vector phi(p);
    for (Eigen::Index k = 0; k < p; ++k)
        phi(k) = stationary_singular_value(f.s(k), lambda);

    // W = O Z^{-1}, O = Q diag(phi) P^T. Right-multiplying by Z^{-1} is a
    // transposed triangular solve: W^T = Z^{-T} O^T.
    const Matrix o = f.v * phi.asDiagonal() * f.u.transpose();
    TransformUpdate out;
    out.w = zl.transpose().solve(o.transpose()).transpose();
    out.w_inverse = z * f.u * phi.cwiseInverse().asDiagonal() * f.v.transpose();
    return out;
}

Matrix update_transform(const Matrix& x, const Matrix& mu, double lambda) {
    return update_transform_factored(x, mu, lambda).w;
}

double transform_objective(const Matrix& w, const Matrix& x, const Matrix& mu, double lambda) {
    if (w.rows() != w.cols() || w.cols() != x.rows() || mu.rows() != w.rows() ||
        mu.cols() != x.cols())
        throw std::invalid_argument("transform_objective: dimension mismatch");
    const Eigen::PartialPivLU<Matrix> lu(w);
    const Matrix& packed = lu.matrixLU();
    double log10_det = 0.0;
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const double d = std::abs(packed(i, i));
        if (d == 0.0 || !std::isfinite(d))
            return std::numeric_limits<double>::infinity();
        log10_det += std::log10(d);
    }
    return (w * x - mu).squaredNorm() + lambda * (w.squaredNorm() - log10_det);
}

} // namespace stlwsm
