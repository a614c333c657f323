#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>

#include "asymcause/bootstrap.hpp"
#include "asymcause/causality.hpp"
#include "asymcause/parallel.hpp"
#include "asymcause/var.hpp"

namespace asymcause::monte_carlo {

/// Gaussian innovations with covariance `cov`.
class GaussianInnovations {
public:
    explicit GaussianInnovations(const Matrix& cov) : chol_(cov.llt().matrixL()) {}

    template <class Rng>
    Vector operator()(Rng& rng) {
        Vector z(chol_.rows());
        for (Index i = 0; i < z.size(); ++i) z(i) = normal_(rng);
        return chol_ * z;
    }

private:
    Matrix chol_;
    boost::random::normal_distribution<double> normal_;
};

/// Unit-variance Student-t shocks scaled by an independent GARCH(1,1) variance
/// recursion per equation: h_t = omega + alpha u_{t-1}^2 + beta h_{t-1}.
class StudentTGarchInnovations {
public:
    StudentTGarchInnovations(Index n, double dof, double omega, double alpha, double beta)
        : t_(dof), scale_(std::sqrt((dof - 2.0) / dof)), omega_(omega), alpha_(alpha), beta_(beta),
          h_(Vector::Constant(n, omega / (1.0 - alpha - beta))), last_(Vector::Zero(n)) {}

    template <class Rng>
    Vector operator()(Rng& rng) {
        for (Index i = 0; i < h_.size(); ++i) {
            h_(i) = omega_ + alpha_ * last_(i) * last_(i) + beta_ * h_(i);
            last_(i) = std::sqrt(h_(i)) * scale_ * t_(rng);
        }
        return last_;
    }

private:
    boost::random::student_t_distribution<double> t_;
    double scale_, omega_, alpha_, beta_;
    Vector h_, last_;
};

/// Simulates Z_t = c + sum_j A_j Z_{t-j} + u_t from zero initial values,
/// discarding `burn_in` leading observations. Returns n x length.
template <class Innovations, class Rng>
Matrix simulate_var(const Vector& intercept, const std::vector<Matrix>& lag_matrices, Index length,
                    Innovations& innovations, Rng& rng, Index burn_in = 100) {
    const Index n = intercept.size();
    const auto p = static_cast<Index>(lag_matrices.size());
    Matrix z = Matrix::Zero(n, length + burn_in + p);
    for (Index t = p; t < z.cols(); ++t) {
        Vector next = intercept + innovations(rng);
        for (Index j = 1; j <= p; ++j) next.noalias() += lag_matrices[j - 1] * z.col(t - j);
        z.col(t) = next;
    }
    return z.rightCols(length);
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct RejectionRates {
    int replications = 0;
    double asymptotic = 0.0;  ///< share rejected at the chi-square 5% point
    double bootstrap = 0.0;   ///< share rejected against the bootstrap 5% critical value
    int failed = 0;
};

/// Bivariate null DGP with no cross dynamics: an integrated AR(2) effect
/// variable and a stationary AR(2) cause, correlated Gaussian shocks.
struct WaldSizeExperiment {
    Index length = 200;
    int lag_order = 2;
    int augmentation = 1;
    int replications = 2000;
    std::uint64_t seed = 1;
    unsigned jobs = 0;

    RejectionRates run() const {
        const Vector intercept = Vector::Zero(2);
        Matrix a1(2, 2), a2(2, 2), cov(2, 2);
        a1 << 1.2, 0.0, 0.0, 0.5;
        a2 << -0.2, 0.0, 0.0, 0.2;
        cov << 1.0, 0.3, 0.3, 1.0;
        const VarSpec spec{2, lag_order, augmentation, true};
        const auto restrictions = build_restrictions(spec, 1, 0);

        std::vector<int> outcome(static_cast<std::size_t>(replications), -1);
        parallel_for(outcome.size(), jobs, [&](std::size_t r) {
            auto rng = make_stream(seed, r);
            GaussianInnovations shocks(cov);
            const Matrix data = simulate_var(intercept, {a1, a2}, length, shocks, rng);
            try {
                outcome[r] = wald(estimate_var(data, spec), restrictions).asymptotic_p < 0.05 ? 1 : 0;
            } catch (const Error&) {
            }
        });
        return summarize(outcome, {});
    }

    static RejectionRates summarize(const std::vector<int>& asym, const std::vector<int>& boot) {
        RejectionRates out;
        int ok = 0, rej = 0, brej = 0;
        for (std::size_t i = 0; i < asym.size(); ++i) {
            if (asym[i] < 0) {
                ++out.failed;
                continue;
            }
            ++ok;
            rej += asym[i];
            if (!boot.empty()) brej += boot[i];
        }
        out.replications = ok;
        out.asymptotic = ok ? static_cast<double>(rej) / ok : 0.0;
        out.bootstrap = ok ? static_cast<double>(brej) / ok : 0.0;
        return out;
    }
};

/// Size of the asymptotic and the leveraged-bootstrap Wald tests when the
/// null holds but shocks are fat-tailed and conditionally heteroskedastic.
/// Both series are driftless random walks driven by Student-t(5) GARCH(1,1) shocks.
struct BootstrapSizeExperiment {
    Index length = 100;
    int lag_order = 2;
    int augmentation = 1;
    int outer_replications = 500;
    int inner_replications = 400;
    double dof = 5.0, omega = 0.2, alpha = 0.2, beta = 0.6;
    std::uint64_t seed = 1;
    unsigned jobs = 0;

    RejectionRates run() const {
        const Vector intercept = Vector::Zero(2);
        const Matrix a1 = Matrix::Identity(2, 2);
        const VarSpec spec{2, lag_order, augmentation, true};
        const auto restrictions = build_restrictions(spec, 1, 0);

        std::vector<int> asym(static_cast<std::size_t>(outer_replications), -1);
        std::vector<int> boot(asym.size(), 0);
        parallel_for(asym.size(), jobs, [&](std::size_t r) {
            auto rng = make_stream(seed, 2 * r);
            StudentTGarchInnovations shocks(2, dof, omega, alpha, beta);
            const Matrix data = simulate_var(intercept, {a1}, length, shocks, rng);
            try {
                const auto test = wald(estimate_var(data, spec), restrictions);
                BootstrapConfig cfg;
                cfg.replications = inner_replications;
                cfg.seed = derive_seed(seed, 2 * r + 1);
                cfg.parallelism = 1;
                const auto cvs = bootstrap_cvs(data, spec, restrictions, cfg).cvs;
                boot[r] = test.wald >= cvs.at_5 ? 1 : 0;
                asym[r] = test.asymptotic_p < 0.05 ? 1 : 0;
            } catch (const Error&) {
            }
        });
        return WaldSizeExperiment::summarize(asym, boot);
    }
};

struct LagSelectionCounts {
    std::vector<int> counts;  ///< counts[l - 1] = times lag l was chosen
    int replications = 0;

    double share(int lag) const { return replications ? static_cast<double>(counts[lag - 1]) / replications : 0.0; }
};

/// HJC lag choice over repeated draws of a stable bivariate VAR(2).
struct HjcExperiment {
    Index length = 200;
    int l_max = 8;
    int replications = 1000;
    std::uint64_t seed = 1;
    unsigned jobs = 0;

    static std::vector<Matrix> true_lags() {
        Matrix a1(2, 2), a2(2, 2);
        a1 << 0.4, 0.2, 0.1, 0.3;
        a2 << -0.4, 0.0, 0.1, -0.35;
        return {a1, a2};
    }

    LagSelectionCounts run() const {
        const Vector intercept = Vector::Zero(2);
        const auto lags = true_lags();
        std::vector<int> chosen(static_cast<std::size_t>(replications), 0);
        parallel_for(chosen.size(), jobs, [&](std::size_t r) {
            auto rng = make_stream(seed, r);
            GaussianInnovations shocks(Matrix::Identity(2, 2));
            chosen[r] = select_lag(simulate_var(intercept, lags, length, shocks, rng), l_max).lag;
        });
        LagSelectionCounts out;
        out.counts.assign(static_cast<std::size_t>(l_max), 0);
        for (int l : chosen) ++out.counts[static_cast<std::size_t>(l - 1)];
        out.replications = replications;
        return out;
    }
};

}  // namespace asymcause::monte_carlo
