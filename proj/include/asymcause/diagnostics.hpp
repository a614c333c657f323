#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "asymcause/causality.hpp"
#include "asymcause/chi_square.hpp"
#include "asymcause/linalg.hpp"
#include "asymcause/time_series.hpp"
#include "asymcause/var.hpp"

namespace asymcause {

// ---------------------------------------------------------------------------
// Ng-Perron MZa unit-root test on GLS-detrended data
// ---------------------------------------------------------------------------

enum class Detrending { constant, constant_trend };

inline const char* to_string(Detrending d) { return d == Detrending::constant ? "constant" : "constant+trend"; }

/// Asymptotic MZa critical values at 1%, 5%, 10%.
inline CriticalValues mza_critical_values(Detrending d) {
    if (d == Detrending::constant) return {-13.80, -8.10, -5.70};
    return {-23.80, -17.30, -14.20};
}

struct UnitRootResult {
    double statistic_mza = 0.0;
    int lag_used = 0;  ///< autoregressive spectral lag chosen by the modified AIC
    Detrending detrending = Detrending::constant;
    CriticalValues critical_values;
    /// Unit-root null rejected at 1%, 5%, 10% (statistic below the critical value).
    std::array<bool, 3> reject{};

    bool rejects_at_5() const { return reject[1]; }
};

/// GLS (quasi-differenced) detrending with c = -7 (constant) or -13.5 (trend).
inline Vector gls_detrend(std::span<const double> y, Detrending detrending) {
    const auto t_len = static_cast<Index>(y.size());
    const double cbar = detrending == Detrending::constant ? -7.0 : -13.5;
    const double abar = 1.0 + cbar / static_cast<double>(t_len);
    const Index kz = detrending == Detrending::constant ? 1 : 2;

    Matrix z(t_len, kz);
    for (Index t = 0; t < t_len; ++t) {
        z(t, 0) = 1.0;
        if (kz == 2) z(t, 1) = static_cast<double>(t + 1);
    }
    const Eigen::Map<const Vector> yv(y.data(), t_len);
    Vector ya(t_len);
    Matrix za(t_len, kz);
    ya(0) = yv(0);
    za.row(0) = z.row(0);
    for (Index t = 1; t < t_len; ++t) {
        ya(t) = yv(t) - abar * yv(t - 1);
        za.row(t) = z.row(t) - abar * z.row(t - 1);
    }
    const Vector psi = LeastSquares(za).solve(ya);
    return yv - z * psi;
}

/// Series the MAIC lag search runs on. Searching on the GLS-detrended series
/// (the original rule) picks long lags for series far from a unit root and
/// loses power there; searching on the OLS-detrended series (Perron-Qu) does not.
enum class LagSearchData { ols_detrended, gls_detrended };

namespace detail {

/// Ordinary least-squares detrending on a constant (and a linear trend).
inline Vector ols_detrend(std::span<const double> y, Detrending detrending) {
    const auto t_len = static_cast<Index>(y.size());
    Matrix z(t_len, detrending == Detrending::constant ? 1 : 2);
    for (Index t = 0; t < t_len; ++t) {
        z(t, 0) = 1.0;
        if (z.cols() == 2) z(t, 1) = static_cast<double>(t + 1);
    }
    const Eigen::Map<const Vector> yv(y.data(), t_len);
    return yv - z * LeastSquares(z).solve(yv);
}

/// ADF regression without deterministics on a common sample for every k <= kmax:
/// dy_t = b0 y_{t-1} + sum_{j<=k} b_j dy_{t-j}, 0-based t = kmax+1 .. T-1.
struct AdfSample {
    Vector dy;
    Matrix regs;  ///< [y_{t-1}, dy_{t-1}, ..., dy_{t-kmax}]

    AdfSample(const Vector& y, int kmax) {
        const Index first = kmax + 1;
        const Index n_obs = y.size() - first;
        dy.resize(n_obs);
        regs.resize(n_obs, kmax + 1);
        for (Index i = 0; i < n_obs; ++i) {
            const Index t = first + i;
            dy(i) = y(t) - y(t - 1);
            regs(i, 0) = y(t - 1);
            for (int j = 1; j <= kmax; ++j) regs(i, j) = y(t - j) - y(t - j - 1);
        }
    }

    /// Coefficients and residual variance of the k-lag regression.
    std::pair<Vector, double> fit(int k) const {
        const Matrix xk = regs.leftCols(k + 1);
        Vector b = LeastSquares(xk).solve(dy);
        const double sigma2 = (dy - xk * b).squaredNorm() / static_cast<double>(dy.size());
        if (!(sigma2 > 0.0)) throw SingularityError("unit-root regression has zero residual variance");
        return {std::move(b), sigma2};
    }
};

/// Modified AIC: ln s2_k + 2 (tau_k + k) / N, tau_k = b0^2 sum y_{t-1}^2 / s2_k.
inline int maic_lag(const AdfSample& adf, int kmax) {
    const double sum_lag_sq = adf.regs.col(0).squaredNorm();
    const auto n_obs = static_cast<double>(adf.dy.size());
    int best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kmax; ++k) {
        const auto [b, sigma2] = adf.fit(k);
        const double tau = b(0) * b(0) * sum_lag_sq / sigma2;
        const double maic = std::log(sigma2) + 2.0 * (tau + k) / n_obs;
        if (maic < best) {
            best = maic;
            best_k = k;
        }
    }
    return best_k;
}

}  // namespace detail

/// MZa = (y_T^2 / T - s2_AR) / (2 T^-2 sum y_{t-1}^2) on the GLS-detrended series,
/// with the autoregressive spectral estimate s2_AR = s2_k / (1 - sum b_j)^2 and
/// k chosen by the modified AIC up to floor(12 (T/100)^(1/4)).
inline UnitRootResult ng_perron_mza(std::span<const double> series, Detrending detrending = Detrending::constant,
                                    LagSearchData lag_search = LagSearchData::ols_detrended) {
    if (series.size() < 30)
        throw LengthError("Ng-Perron test needs at least 30 observations, got " + std::to_string(series.size()));
    for (double v : series)
        if (!std::isfinite(v)) throw DataError("unit-root input contains non-finite values");

    const Vector yd = gls_detrend(series, detrending);
    const auto t_len = yd.size();
    const double tt = static_cast<double>(t_len);
    const int kmax = static_cast<int>(std::floor(12.0 * std::pow(tt / 100.0, 0.25)));

    const detail::AdfSample gls_adf(yd, kmax);
    const int best_k = lag_search == LagSearchData::gls_detrended
                           ? detail::maic_lag(gls_adf, kmax)
                           : detail::maic_lag(detail::AdfSample(detail::ols_detrend(series, detrending), kmax), kmax);
    const auto [b, sigma2] = gls_adf.fit(best_k);
    const double lag_sum = best_k > 0 ? b.tail(best_k).sum() : 0.0;
    const double best_s2 = sigma2 / ((1.0 - lag_sum) * (1.0 - lag_sum));

    double sum_sq = 0.0;
    for (Index t = 1; t < t_len; ++t) sum_sq += yd(t - 1) * yd(t - 1);
    const double last = yd(t_len - 1);

    UnitRootResult out;
    out.statistic_mza = (last * last / tt - best_s2) / (2.0 * sum_sq / (tt * tt));
    out.lag_used = best_k;
    out.detrending = detrending;
    out.critical_values = mza_critical_values(detrending);
    out.reject = {out.statistic_mza < out.critical_values.at_1, out.statistic_mza < out.critical_values.at_5,
                  out.statistic_mza < out.critical_values.at_10};
    return out;
}

inline UnitRootResult ng_perron_mza(const TimeSeries& series, Detrending detrending = Detrending::constant,
                                    LagSearchData lag_search = LagSearchData::ols_detrended) {
    return ng_perron_mza(series.view(), detrending, lag_search);
}

// ---------------------------------------------------------------------------
// Multivariate residual diagnostics
// ---------------------------------------------------------------------------

struct TestStatistic {
    double statistic = 0.0;
    double p_value = 1.0;
    int df = 0;
};

/// Doornik-Hansen omnibus normality test. Residuals are n x T (time in columns).
inline TestStatistic doornik_hansen(const Matrix& residuals) {
    const Index p = residuals.rows();
    const Index t_len = residuals.cols();
    if (t_len <= p + 10)
        throw LengthError("Doornik-Hansen needs more than n + 10 observations, got " + std::to_string(t_len));
    if (!residuals.allFinite()) throw DataError("residuals contain non-finite values");

    const Matrix centered = residuals.colwise() - residuals.rowwise().mean();
    const Matrix cov = centered * centered.transpose() / static_cast<double>(t_len);
    const Vector inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
    if (!inv_sd.allFinite()) throw SingularityError("residual series with zero variance");
    const Matrix corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(corr);
    const Vector lambda = eig.eigenvalues();
    if (!(lambda.minCoeff() > min_reciprocal_condition * lambda.maxCoeff()))
        throw SingularityError("residual correlation matrix is singular");
    const Matrix& h = eig.eigenvectors();
    const Matrix transform = h * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * h.transpose() * inv_sd.asDiagonal();
    const Matrix y = transform * centered;

    const double n = static_cast<double>(t_len);
    const double beta = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                        ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    const double omega2 = -1.0 + std::sqrt(2.0 * (beta - 1.0));
    const double delta = 1.0 / std::sqrt(std::log(std::sqrt(omega2)));
    const double dk = (n - 3.0) * (n + 1.0) * (n * n + 15.0 * n - 4.0);
    const double a = (n - 2.0) * (n + 5.0) * (n + 7.0) * (n * n + 27.0 * n - 70.0) / (6.0 * dk);
    const double c = (n - 7.0) * (n + 5.0) * (n + 7.0) * (n * n + 2.0 * n - 5.0) / (6.0 * dk);
    const double k = (n + 5.0) * (n + 7.0) * (n * n * n + 37.0 * n * n + 11.0 * n - 313.0) / (12.0 * dk);

    double stat = 0.0;
    for (Index i = 0; i < p; ++i) {
        const auto row = y.row(i).array();
        const double m2 = row.square().mean();
        const double skew = row.cube().mean() / std::pow(m2, 1.5);
        const double kurt = row.square().square().mean() / (m2 * m2);

        const double ys = skew * std::sqrt((omega2 - 1.0) * (n + 1.0) * (n + 3.0) / (12.0 * (n - 2.0)));
        const double z1 = delta * std::log(ys + std::sqrt(ys * ys + 1.0));

        const double b1 = skew * skew;
        const double alpha = a + b1 * c;
        const double chi = (kurt - 1.0 - b1) * 2.0 * k;
        const double z2 = (std::cbrt(chi / (2.0 * alpha)) - 1.0 + 1.0 / (9.0 * alpha)) * std::sqrt(9.0 * alpha);
        stat += z1 * z1 + z2 * z2;
    }
    const int df = static_cast<int>(2 * p);
    return {stat, chi_square_upper_tail(stat, df), df};
}

/// Half-vectorised outer products vech(e_t e_t'), one column per time point.
inline Matrix vech_outer_products(const Matrix& residuals) {
    const Index n = residuals.rows();
    const Index m = n * (n + 1) / 2;
    Matrix out(m, residuals.cols());
    for (Index t = 0; t < residuals.cols(); ++t) {
        Index r = 0;
        for (Index j = 0; j < n; ++j)
            for (Index i = j; i < n; ++i) out(r++, t) = residuals(i, t) * residuals(j, t);
    }
    return out;
}

/// Multivariate ARCH LM test: regress vech(e_t e_t') on an intercept and q of its
/// own lags; statistic N (m - tr(Omega Omega0^{-1})) ~ chi^2(q m^2), where Omega is the
/// auxiliary residual covariance and Omega0 the covariance around the mean.
inline TestStatistic mv_arch_test(const Matrix& residuals, int q = 1) {
    if (q < 1) throw ConfigError("ARCH lag order must be >= 1");
    if (!residuals.allFinite()) throw DataError("residuals contain non-finite values");
    const Matrix u = vech_outer_products(residuals);
    const Index m = u.rows();
    const Index n_obs = u.cols() - q;
    const Index k = 1 + q * m;
    if (n_obs <= k + 1)
        throw LengthError("multivariate ARCH test needs more than " + std::to_string(k + q + 1) +
                          " observations, got " + std::to_string(residuals.cols()));

    Matrix x(n_obs, k);
    Matrix w(n_obs, m);
    for (Index i = 0; i < n_obs; ++i) {
        const Index t = q + i;
        x(i, 0) = 1.0;
        for (int j = 1; j <= q; ++j) x.block(i, 1 + (j - 1) * m, 1, m) = u.col(t - j).transpose();
        w.row(i) = u.col(t).transpose();
    }
    const Matrix b = LeastSquares(x).solve(w);
    const Matrix e = w - x * b;
    const Matrix omega = e.transpose() * e / static_cast<double>(n_obs);
    const Matrix wc = w.rowwise() - w.colwise().mean();
    const Matrix omega0 = wc.transpose() * wc / static_cast<double>(n_obs);

    // tr(Omega0^-1 Omega) is unchanged by a diagonal rescaling; equilibrate so the
    // conditioning check reflects collinearity, not the units of the residuals.
    const Vector d = omega0.diagonal();
    if ((d.array() <= 0.0).any()) throw SingularityError("a squared residual term has zero variance");
    const Vector scale = d.cwiseSqrt().cwiseInverse();
    const Matrix r0 = scale.asDiagonal() * omega0 * scale.asDiagonal();
    Eigen::LDLT<Matrix> ldlt(r0);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < min_reciprocal_condition)
        throw SingularityError("covariance of the squared residual terms is singular");
    const double trace = ldlt.solve(scale.asDiagonal() * omega * scale.asDiagonal()).trace();
    const double stat = std::max(0.0, static_cast<double>(n_obs) * (static_cast<double>(m) - trace));
    const int df = static_cast<int>(q * m * m);
    return {stat, chi_square_upper_tail(stat, df), df};
}

struct MvDiagnostics {
    double normality_stat = 0.0;
    double normality_p = 1.0;
    double arch_stat = 0.0;
    double arch_p = 1.0;
    int arch_lags = 1;
    int var_lag_order = 0;  ///< lag order (l) of the VAR whose residuals were tested
};

inline MvDiagnostics mv_diagnostics(const VarFit& fit, int arch_lags = 1) {
    const auto dh = doornik_hansen(fit.residuals);
    const auto arch = mv_arch_test(fit.residuals, arch_lags);
    return {dh.statistic, dh.p_value, arch.statistic, arch.p_value, arch_lags, fit.spec.lag_order};
}

}  // namespace asymcause
