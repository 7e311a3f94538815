#include "stlwsm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <lapacke.h>

namespace stlwsm {

SvdNoConvergence::SvdNoConvergence(Eigen::Index rows, Eigen::Index cols)
    : std::runtime_error("svd_full: factorization did not converge for " +
                         std::to_string(rows) + "x" + std::to_string(cols) +
                         " input"),
      rows_(rows), cols_(cols) {}

NotPositiveDefinite::NotPositiveDefinite(Eigen::Index minor)
    : std::runtime_error("spd_factor: leading minor of order " +
                         std::to_string(minor) + " is not positive"),
      minor_(minor) {}

namespace {

struct RawSvd {
    Matrix u;
    Vector s;
    Matrix vt;
};

// LAPACK divide-and-conquer SVD, falling back to the QR-iteration driver
// when gesdd reports non-convergence.
bool lapack_svd(const Matrix& a, RawSvd& out) {
    const auto m = static_cast<lapack_int>(a.rows());
    const auto n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    out.u.resize(m, k);
    out.s.resize(k);
    out.vt.resize(k, n);

    Matrix work = a;
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, out.s.data(),
                                     out.u.data(), m, out.vt.data(), k);
    if (info == 0)
        return true;
    if (info < 0)
        throw std::logic_error("svd_full: invalid LAPACK argument " + std::to_string(-info));

    work = a;
    std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(1, k - 1)));
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m, out.s.data(),
                          out.u.data(), m, out.vt.data(), k, superb.data());
    return info == 0;
}

} // namespace

SvdResult svd_full(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument("svd_full: empty matrix");
    if (!a.allFinite())
        throw std::invalid_argument("svd_full: non-finite input");

    RawSvd raw;
    if (!lapack_svd(a, raw))
        throw SvdNoConvergence(a.rows(), a.cols());

    const Eigen::Index k = raw.s.size();
    const Vector& sv = raw.s;

    // LAPACK returns descending values; the stable sort pins the tie order regardless.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return sv(i) > sv(j); });

    SvdResult out{Matrix(a.rows(), k), Vector(k), Matrix(a.cols(), k)};
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.s(j) = sv(src);
        out.u.col(j) = raw.u.col(src);
        out.v.col(j) = raw.vt.row(src).transpose();

        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < out.u.rows(); ++r) {
            const double mag = std::abs(out.u(r, j));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (out.u(pivot, j) < 0.0) {
            out.u.col(j) *= -1.0;
            out.v.col(j) *= -1.0;
        }
    }
    return out;
}

Matrix spd_factor(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw std::invalid_argument("spd_factor: matrix must be square and non-empty");
    const Eigen::Index n = a.rows();
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (((a - a.transpose()).cwiseAbs().maxCoeff()) > 1e-10 * scale)
        throw std::invalid_argument("spd_factor: matrix is not symmetric");

    Matrix z = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            d -= z(j, k) * z(j, k);
        if (!(d > 0.0))
            throw NotPositiveDefinite(j + 1);
        const double zjj = std::sqrt(d);
        z(j, j) = zjj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double acc = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                acc -= z(i, k) * z(j, k);
            z(i, j) = acc / zjj;
        }
    }
    return z;
}

Matrix dct_matrix(std::size_t p) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p))));
    if (p == 0 || side * side != p)
        throw std::invalid_argument("dct_matrix: p = " + std::to_string(p) +
                                    " is not a positive perfect square");

    const auto n = static_cast<Eigen::Index>(side);
    Matrix d(n, n);
    const double pi = std::acos(-1.0);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double alpha = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            d(k, i) = alpha * std::cos(pi * (2.0 * static_cast<double>(i) + 1.0) *
                                       static_cast<double>(k) / (2.0 * static_cast<double>(n)));
    }

    const auto pp = static_cast<Eigen::Index>(p);
    Matrix w(pp, pp);
    for (Eigen::Index kr = 0; kr < n; ++kr)
        for (Eigen::Index kc = 0; kc < n; ++kc)
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    w(kr * n + kc, r * n + c) = d(kr, r) * d(kc, c);
    return w;
}

Matrix pinv_square(const Matrix& w) {
    if (w.rows() != w.cols())
        throw std::invalid_argument("pinv_square: matrix must be square");
    const SvdResult f = svd_full(w);
    const double cutoff = kPinvRelativeCutoff * f.s(0);
    Vector inv_s(f.s.size());
    for (Eigen::Index i = 0; i < f.s.size(); ++i)
        inv_s(i) = (f.s(i) > cutoff && f.s(i) > 0.0) ? 1.0 / f.s(i) : 0.0;
    return f.v * inv_s.asDiagonal() * f.u.transpose();
}

} // namespace stlwsm
