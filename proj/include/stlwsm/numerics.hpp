#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlwsm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin SVD a = u * diag(s) * v^T with k = min(rows, cols) singular triplets.
///
/// Singular values are non-increasing; equal values keep their factorization
/// order. Each column of u is sign-normalized so that its largest-magnitude
/// entry is positive (first such entry on ties), with the matching column of
/// v flipped alongside it.
struct SvdResult {
    Matrix u;
    Vector s;
    Matrix v;
};

class SvdNoConvergence : public std::runtime_error {
public:
    SvdNoConvergence(Eigen::Index rows, Eigen::Index cols);
    Eigen::Index rows() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return cols_; }

private:
    Eigen::Index rows_, cols_;
};

class NotPositiveDefinite : public std::runtime_error {
public:
    /// `minor` is the 1-based order of the first leading minor that fails.
    explicit NotPositiveDefinite(Eigen::Index minor);
    Eigen::Index minor() const noexcept { return minor_; }

private:
    Eigen::Index minor_;
};

SvdResult svd_full(const Matrix& a);

/// Lower-triangular Cholesky factor z of a symmetric positive definite
/// matrix, z * z^T = a, diag(z) > 0.
Matrix spd_factor(const Matrix& a);

/// Orthonormal 2D type-II DCT for vectorized side x side patches (p = side^2),
/// built as kron(D, D) of the 1D DCT of size side. Row-major vectorization:
/// entry (r, c) of the patch maps to index r * side + c.
Matrix dct_matrix(std::size_t p);

/// Moore-Penrose pseudo-inverse of a square matrix via SVD. Singular values
/// below 1e-12 * s_max are treated as zero.
Matrix pinv_square(const Matrix& w);

inline constexpr double kPinvRelativeCutoff = 1e-12;

} // namespace stlwsm
