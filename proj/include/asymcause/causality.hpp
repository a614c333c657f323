#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asymcause/chi_square.hpp"
#include "asymcause/var.hpp"

namespace asymcause {

/// Column-major stacking of a coefficient matrix.
inline Vector vec_order(const Matrix& coefficients) {
    return Eigen::Map<const Vector>(coefficients.data(), coefficients.size());
}

inline Matrix unvec(const Vector& stacked, Index rows, Index cols) {
    if (stacked.size() != rows * cols) throw StructuralError("unvec: size does not match the requested shape");
    return Eigen::Map<const Matrix>(stacked.data(), rows, cols);
}

/// Position in vec(D) of variable `var`'s lag-`lag` coefficient in equation
/// `equation` (all 0-based except lag): column_of(var, lag) * n + equation.
inline Index vec_position(const VarSpec& spec, int var, int lag, int equation) {
    return spec.column_of(var, lag) * spec.n_vars + equation;
}

/// Zero restrictions for "cause does not Granger-cause effect": the effect
/// equation's coefficients on the cause's lags 1..l. Augmentation lags are
/// never restricted.
struct RestrictionSet {
    int cause_index = 0;
    int effect_index = 0;
    std::vector<int> restricted_lags;  ///< 1..l
    std::vector<Index> positions;      ///< restricted entries of vec(D), one per lag
    Matrix selector;                   ///< C: l x n(1 + n(l + d)), 0/1

    /// Design columns dropped from the effect equation under the null.
    std::vector<Index> excluded_columns(const VarSpec& spec) const {
        std::vector<Index> cols;
        for (int j : restricted_lags) cols.push_back(spec.column_of(cause_index, j));
        return cols;
    }
};

inline RestrictionSet build_restrictions(const VarSpec& spec, int cause, int effect) {
    spec.validate();
    if (cause == effect) throw InvalidRestrictionError("cause and effect must be different variables");
    if (cause < 0 || effect < 0 || cause >= spec.n_vars || effect >= spec.n_vars)
        throw InvalidRestrictionError("cause/effect index outside the VAR");

    RestrictionSet r;
    r.cause_index = cause;
    r.effect_index = effect;
    r.selector = Matrix::Zero(spec.lag_order, static_cast<Index>(spec.n_vars) * spec.regressors());
    for (int j = 1; j <= spec.lag_order; ++j) {
        const Index pos = vec_position(spec, cause, j, effect);
        r.restricted_lags.push_back(j);
        r.positions.push_back(pos);
        r.selector(j - 1, pos) = 1.0;
    }
    return r;
}

struct CriticalValues {
    double at_1 = 0.0;
    double at_5 = 0.0;
    double at_10 = 0.0;

    friend bool operator==(const CriticalValues&, const CriticalValues&) = default;
};

struct CausalityResult {
    double wald = 0.0;
    int df = 0;
    double asymptotic_p = 1.0;
    std::optional<CriticalValues> bootstrap_cvs;
    double causal_parameter = 0.0;  ///< sum of the restricted coefficient estimates
    int lag_order = 0;
    int augmentation = 0;
    std::string direction_label;
};

inline std::string direction_label(const std::string& cause, const std::string& effect) {
    return cause + " ≠> " + effect;
}

/// Wald statistic (C a)' [C ((X X')^{-1} kron cov_U) C']^{-1} (C a) with
/// a = vec(D). C only selects entries, so the bracket is assembled directly as
/// the l x l block gram_inv(c_i, c_j) * cov(e_i, e_j) without forming the
/// Kronecker product.
inline CausalityResult wald(const VarFit& fit, const RestrictionSet& restrictions, std::string label = {}) {
    const VarSpec& spec = fit.spec;
    const Index n = spec.n_vars;
    if (restrictions.selector.cols() != n * spec.regressors() ||
        static_cast<int>(restrictions.positions.size()) != spec.lag_order)
        throw StructuralError("restriction set does not match the fitted VAR");

    const auto m = static_cast<Index>(restrictions.positions.size());
    const Vector alpha = vec_order(fit.coefficients);
    Vector restricted(m);
    Matrix bracket(m, m);
    for (Index i = 0; i < m; ++i) {
        const Index pi = restrictions.positions[i];
        restricted(i) = alpha(pi);
        for (Index j = 0; j < m; ++j) {
            const Index pj = restrictions.positions[j];
            bracket(i, j) = fit.gram_inverse(pi / n, pj / n) * fit.residual_cov(pi % n, pj % n);
        }
    }

    Eigen::LDLT<Matrix> ldlt(bracket);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < min_reciprocal_condition) {
        std::ostringstream msg;
        msg << "Wald bracket matrix is singular (reciprocal condition " << ldlt.rcond() << ")";
        throw SingularityError(msg.str());
    }

    CausalityResult out;
    out.wald = std::max(0.0, restricted.dot(ldlt.solve(restricted)));
    out.df = spec.lag_order;
    out.asymptotic_p = chi_square_upper_tail(out.wald, out.df);
    out.causal_parameter = restricted.sum();
    out.lag_order = spec.lag_order;
    out.augmentation = spec.extra_lags;
    out.direction_label = std::move(label);
    return out;
}

}  // namespace asymcause
