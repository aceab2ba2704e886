#pragma once

#include <Eigen/Dense>

#include <vector>

#include "rerisk/error.hpp"

namespace rerisk {

/// Ordinary least squares of every column of Y on the columns of X.
template <typename Scalar>
struct LeastSquares {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Matrix coef;       ///< cols(X) x cols(Y)
    Matrix residuals;  ///< rows(X) x cols(Y)
    Matrix xtx_inv;    ///< (X'X)^{-1}
    Eigen::Index rank = 0;

    /// Sum of squared residuals per column of Y.
    [[nodiscard]] Eigen::Matrix<Scalar, 1, Eigen::Dynamic> ssr() const {
        return residuals.colwise().squaredNorm();
    }
};

/// Column indices of X that are (numerically) linear combinations of the others.
template <typename Derived>
std::vector<Eigen::Index> dependent_columns(const Eigen::MatrixBase<Derived>& X) {
    using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = qr.rank(); i < X.cols(); ++i) out.push_back(qr.colsPermutation().indices()[i]);
    return out;
}

/// Solves min ||Y - X B|| column by column via pivoted QR. Throws
/// SingularMatrixError when X lacks full column rank.
template <typename DerivedX, typename DerivedY>
LeastSquares<typename DerivedX::Scalar> least_squares(const Eigen::MatrixBase<DerivedX>& X,
                                                      const Eigen::MatrixBase<DerivedY>& Y) {
    using Scalar = typename DerivedX::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (X.rows() != Y.rows()) throw ValidationError("regression: design and response row counts differ");
    if (X.rows() < X.cols()) throw InsufficientDataError("regression: fewer observations than regressors");

    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    LeastSquares<Scalar> out;
    out.rank = qr.rank();
    if (out.rank < X.cols()) throw SingularMatrixError("regression: design matrix is rank deficient");

    out.coef = qr.solve(Y.derived());
    out.residuals = Y - X * out.coef;

    const Eigen::Index p = X.cols();
    Matrix r_inv = qr.matrixR()
                       .topLeftCorner(p, p)
                       .template triangularView<Eigen::Upper>()
                       .solve(Matrix::Identity(p, p));
    Matrix unpermuted = r_inv * r_inv.transpose();
    out.xtx_inv = qr.colsPermutation() * unpermuted * qr.colsPermutation().transpose();
    return out;
}

/// Centered R^2 of a single-response fit.
template <typename DerivedY, typename DerivedE>
typename DerivedY::Scalar r_squared(const Eigen::MatrixBase<DerivedY>& y, const Eigen::MatrixBase<DerivedE>& resid) {
    const auto centered = (y.array() - y.mean());
    const auto sst = centered.square().sum();
    if (!(sst > 0)) throw DegenerateVarianceError("R-squared of a constant response is undefined");
    return 1 - resid.squaredNorm() / sst;
}

}  // namespace rerisk
