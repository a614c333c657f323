#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "asymcause/errors.hpp"
#include "asymcause/linalg.hpp"

namespace asymcause {

/// Shape of a VAR in levels with optional unrestricted augmentation lags.
struct VarSpec {
    int n_vars = 2;
    int lag_order = 1;   ///< restricted lags, l
    int extra_lags = 0;  ///< unrestricted augmentation lags, d
    bool include_intercept = true;

    int total_lags() const { return lag_order + extra_lags; }
    int intercept_columns() const { return include_intercept ? 1 : 0; }
    /// Regressors per equation: intercept plus n values for each of the l + d lags.
    int regressors() const { return intercept_columns() + n_vars * total_lags(); }

    /// Column of D (and row of X) holding variable `var`'s lag-`lag` value (lag is 1-based).
    Index column_of(int var, int lag) const { return intercept_columns() + (lag - 1) * n_vars + var; }

    void validate() const {
        if (n_vars < 1) throw ConfigError("VAR needs at least one variable");
        if (lag_order < 1) throw ConfigError("VAR lag order must be >= 1");
        if (extra_lags < 0) throw ConfigError("augmentation lags must be >= 0");
    }
};

/// Estimated VAR. Time runs along columns throughout: the design X is
/// regressors x T_eff and the residuals n x T_eff.
struct VarFit {
    VarSpec spec;
    Index sample_start = 0;  ///< data column of the first fitted observation
    Matrix coefficients;     ///< D: n x (1 + n (l + d)), [intercept, lag-1 block, ...]
    Matrix residuals;        ///< n x T_eff
    Matrix design;           ///< X: (1 + n (l + d)) x T_eff
    Matrix residual_cov;     ///< residuals residuals' / T_eff
    Matrix gram_inverse;     ///< (X X')^{-1}
    Vector leverages;        ///< diagonal of X'(X X')^{-1} X

    Index effective_sample() const { return residuals.cols(); }
};

namespace detail {

inline void check_finite(const Matrix& data) {
    if (!data.allFinite()) throw DataError("VAR data contains NaN or infinite values");
}

/// Regressor matrix X (k x T_eff) and response W (n x T_eff) for observations start..T-1.
inline std::pair<Matrix, Matrix> build_design(const Matrix& data, const VarSpec& spec, Index start) {
    const Index n = data.rows();
    const Index t_eff = data.cols() - start;
    Matrix x(spec.regressors(), t_eff);
    for (Index c = 0; c < t_eff; ++c) {
        const Index t = start + c;
        if (spec.include_intercept) x(0, c) = 1.0;
        for (int j = 1; j <= spec.total_lags(); ++j)
            x.block(spec.column_of(0, j), c, n, 1) = data.col(t - j);
    }
    return {std::move(x), data.rightCols(t_eff)};
}

inline Index resolve_start(const Matrix& data, const VarSpec& spec, std::optional<Index> sample_start) {
    spec.validate();
    if (data.rows() != spec.n_vars)
        throw StructuralError("data has " + std::to_string(data.rows()) + " rows but the VAR has " +
                              std::to_string(spec.n_vars) + " variables");
    const Index start = sample_start.value_or(spec.total_lags());
    if (start < spec.total_lags()) throw ConfigError("sample start precedes the available lags");
    const Index t_eff = data.cols() - start;
    if (t_eff < spec.regressors() + 2) {
        throw LengthError("VAR(" + std::to_string(spec.lag_order) + "+" + std::to_string(spec.extra_lags) + ") needs " +
                          std::to_string(spec.regressors() + 2) + " effective observations, have " +
                          std::to_string(t_eff));
    }
    return start;
}

}  // namespace detail

/// Equationwise OLS of the VAR. `sample_start` defaults to l + d; a later start
/// trims the sample (used to put candidate lag orders on a common sample).
inline VarFit estimate_var(const Matrix& data, const VarSpec& spec, std::optional<Index> sample_start = {}) {
    detail::check_finite(data);
    const Index start = detail::resolve_start(data, spec, sample_start);
    auto [x, w] = detail::build_design(data, spec, start);

    const LeastSquares ls(x.transpose());
    VarFit fit;
    fit.spec = spec;
    fit.sample_start = start;
    fit.coefficients = ls.solve(w.transpose()).transpose();
    fit.residuals = w - fit.coefficients * x;
    fit.residual_cov = fit.residuals * fit.residuals.transpose() / static_cast<double>(fit.residuals.cols());
    fit.gram_inverse = ls.gram_inverse();
    fit.leverages = ls.hat_diagonal();
    fit.design = std::move(x);
    return fit;
}

/// Hat-matrix diagonal of a design laid out regressors x observations.
inline Vector leverages(const Matrix& design) { return LeastSquares(design.transpose()).hat_diagonal(); }

/// Information criterion combining the Schwarz and Hannan-Quinn penalties:
///   ln|cov| + l (v^2 ln T + 2 v^2 ln ln T) / (2 T)
inline double hjc(const Matrix& residual_cov, int lag_order, double sample_size) {
    const double det = residual_cov.determinant();
    if (!(det > 0.0) || !std::isfinite(det))
        throw SingularityError("residual covariance determinant is " + std::to_string(det) + "; HJC undefined");
    const double v2 = static_cast<double>(residual_cov.rows() * residual_cov.rows());
    const double log_t = std::log(sample_size);
    return std::log(det) + lag_order * (v2 * log_t + 2.0 * v2 * std::log(log_t)) / (2.0 * sample_size);
}

/// Penalty uses the restricted lag order only; augmentation lags are not charged.
inline double hjc(const VarFit& fit, double sample_size) {
    return hjc(fit.residual_cov, fit.spec.lag_order, sample_size);
}

struct LagSelection {
    int lag = 1;
    std::vector<double> criterion;  ///< HJC for l = 1..l_max
};

/// Minimises HJC over l = 1..l_max. Every candidate is fitted without
/// augmentation on the common sample that drops the first l_max + extra_lags
/// observations. Ties go to the smaller lag.
inline LagSelection select_lag(const Matrix& data, int l_max, int extra_lags = 0) {
    if (l_max < 1) throw ConfigError("l_max must be >= 1");
    if (extra_lags < 0) throw ConfigError("augmentation lags must be >= 0");
    const Index start = l_max + extra_lags;
    const double sample = static_cast<double>(data.cols() - start);

    LagSelection out;
    double best = 0.0;
    for (int l = 1; l <= l_max; ++l) {
        const VarSpec spec{static_cast<int>(data.rows()), l, 0, true};
        double value = 0.0;
        try {
            value = hjc(estimate_var(data, spec, start), sample);
        } catch (const SingularityError& e) {
            throw SingularityError("lag " + std::to_string(l) + ": " + e.what());
        } catch (const LengthError& e) {
            throw LengthError("lag " + std::to_string(l) + ": " + e.what());
        }
        out.criterion.push_back(value);
        if (l == 1 || value < best) {
            best = value;
            out.lag = l;
        }
    }
    return out;
}

/// VAR estimated equation by equation with some regressors removed from some
/// equations (e.g. a non-causality null). Leverages are per equation, from
/// each equation's own design.
struct RestrictedVarFit {
    VarSpec spec;
    Index sample_start = 0;
    Matrix coefficients;  ///< n x k, excluded entries exactly zero
    Matrix residuals;     ///< n x T_eff
    Matrix leverages;     ///< n x T_eff
    std::vector<bool> full_design;  ///< equation used the unrestricted common design

    Index effective_sample() const { return residuals.cols(); }
};

/// `excluded[e]` lists the design columns dropped from equation e.
inline RestrictedVarFit estimate_restricted_var(const Matrix& data, const VarSpec& spec,
                                                const std::vector<std::vector<Index>>& excluded,
                                                std::optional<Index> sample_start = {}) {
    detail::check_finite(data);
    const Index start = detail::resolve_start(data, spec, sample_start);
    if (excluded.size() != static_cast<std::size_t>(spec.n_vars))
        throw StructuralError("exclusion list must have one entry per equation");
    auto [x, w] = detail::build_design(data, spec, start);
    const Index k = x.rows();

    RestrictedVarFit fit;
    fit.spec = spec;
    fit.sample_start = start;
    fit.coefficients = Matrix::Zero(spec.n_vars, k);
    fit.residuals.resize(spec.n_vars, x.cols());
    fit.leverages.resize(spec.n_vars, x.cols());
    fit.full_design.assign(spec.n_vars, false);

    std::optional<LeastSquares> common;
    std::optional<Vector> common_hat;
    for (Index e = 0; e < spec.n_vars; ++e) {
        std::vector<bool> keep(k, true);
        for (Index c : excluded[e]) {
            if (c < 0 || c >= k) throw ConfigError("excluded column out of range");
            keep[c] = false;
        }
        std::vector<Index> cols;
        for (Index c = 0; c < k; ++c)
            if (keep[c]) cols.push_back(c);

        if (static_cast<Index>(cols.size()) == k) {
            if (!common) {
                common.emplace(x.transpose());
                common_hat = common->hat_diagonal();
            }
            fit.coefficients.row(e) = common->solve(w.row(e).transpose()).transpose();
            fit.leverages.row(e) = common_hat->transpose();
            fit.full_design[e] = true;
        } else {
            Matrix xe(x.cols(), static_cast<Index>(cols.size()));
            for (std::size_t j = 0; j < cols.size(); ++j) xe.col(static_cast<Index>(j)) = x.row(cols[j]).transpose();
            const LeastSquares ls(xe);
            const Vector b = ls.solve(w.row(e).transpose());
            for (std::size_t j = 0; j < cols.size(); ++j) fit.coefficients(e, cols[j]) = b(static_cast<Index>(j));
            fit.leverages.row(e) = ls.hat_diagonal().transpose();
        }
        fit.residuals.row(e) = w.row(e) - fit.coefficients.row(e) * x;
    }
    return fit;
}

}  // namespace asymcause
