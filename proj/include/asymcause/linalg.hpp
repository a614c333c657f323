#pragma once

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "asymcause/errors.hpp"

namespace asymcause {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Reciprocal condition below which a design counts as rank deficient.
inline constexpr double min_reciprocal_condition = 1e-12;

/// Least squares on a fixed regressor matrix (observations in rows) through a
/// column-pivoted Householder QR of the column-equilibrated regressors.
class LeastSquares {
public:
    explicit LeastSquares(const Matrix& regressors) : rows_(regressors.rows()), cols_(regressors.cols()) {
        if (cols_ == 0) throw SingularityError("least squares with no regressors");
        if (rows_ < cols_) {
            throw SingularityError("rank-deficient design: " + std::to_string(rows_) + " observations for " +
                                   std::to_string(cols_) + " regressors");
        }
        scale_ = regressors.colwise().norm().transpose();
        for (Index j = 0; j < cols_; ++j) {
            if (!(scale_(j) > 0.0) || !std::isfinite(scale_(j)))
                throw SingularityError("rank-deficient design: regressor " + std::to_string(j) + " is zero or non-finite");
        }
        scaled_ = regressors * scale_.cwiseInverse().asDiagonal();
        qr_.compute(scaled_);
        const double top = std::abs(qr_.matrixQR()(0, 0));
        const double bottom = std::abs(qr_.matrixQR()(cols_ - 1, cols_ - 1));
        rcond_ = top > 0.0 ? bottom / top : 0.0;
        if (!(rcond_ >= min_reciprocal_condition)) {
            std::ostringstream msg;
            msg << "rank-deficient design: reciprocal condition estimate " << rcond_ << " is below the "
                << min_reciprocal_condition << " threshold";
            throw SingularityError(msg.str());
        }
    }

    Index observations() const noexcept { return rows_; }
    Index regressors() const noexcept { return cols_; }
    double reciprocal_condition() const noexcept { return rcond_; }

    /// Coefficients (regressors x columns of rhs) minimising ||X b - rhs||.
    Matrix solve(const Matrix& rhs) const {
        Matrix b = qr_.solve(rhs);
        return scale_.cwiseInverse().asDiagonal() * b;
    }

    /// (X'X)^{-1}.
    Matrix gram_inverse() const {
        const Matrix rinv = r_inverse();
        const auto& perm = qr_.colsPermutation();
        Matrix scaled_inv = perm * (rinv * rinv.transpose()) * perm.transpose();
        return scale_.cwiseInverse().asDiagonal() * scaled_inv * scale_.cwiseInverse().asDiagonal();
    }

    /// Diagonal of X (X'X)^{-1} X'.
    Vector hat_diagonal() const {
        const Matrix q = scaled_ * qr_.colsPermutation() * r_inverse();
        return q.rowwise().squaredNorm();
    }

private:
    Matrix r_inverse() const {
        Matrix rinv = Matrix::Identity(cols_, cols_);
        qr_.matrixQR().topLeftCorner(cols_, cols_).template triangularView<Eigen::Upper>().solveInPlace(rinv);
        return rinv;
    }

    Index rows_;
    Index cols_;
    Vector scale_;
    Matrix scaled_;
    Eigen::ColPivHouseholderQR<Matrix> qr_;
    double rcond_ = 0.0;
};

}  // namespace asymcause
