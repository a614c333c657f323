#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "asymcause/monte_carlo.hpp"
#include "asymcause/var.hpp"
#include "oracles.hpp"

using namespace asymcause;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& s) {
    Matrix m(static_cast<Index>(s.size()), static_cast<Index>(s[0].size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index t = 0; t < m.cols(); ++t) m(i, t) = s[i][t];
    return m;
}

Matrix simulate(const std::vector<Matrix>& lags, Index length, std::uint64_t seed) {
    auto rng = make_stream(seed, 0);
    monte_carlo::GaussianInnovations shocks(Matrix::Identity(lags[0].rows(), lags[0].rows()));
    return monte_carlo::simulate_var(Vector::Zero(lags[0].rows()), lags, length, shocks, rng);
}

// Fixed bivariate sample, 10 observations.
const std::vector<std::vector<double>> ten_obs{
    {1.20, 1.85, 1.41, 2.73, 3.02, 2.56, 3.90, 4.11, 3.47, 4.88},
    {0.50, -0.20, 0.95, 0.31, 1.42, 0.87, 0.12, 1.66, 2.05, 1.38}};

}  // namespace

TEST(EstimateVar, RecoversKnownVar1) {
    Matrix a1(2, 2);
    a1 << 0.5, 0.1, -0.2, 0.3;
    const Matrix data = simulate({a1}, 5000, 11);
    const auto fit = estimate_var(data, VarSpec{2, 1, 0, true});
    EXPECT_LT((fit.coefficients.middleCols(1, 2) - a1).cwiseAbs().maxCoeff(), 0.05);
    EXPECT_LT(fit.coefficients.col(0).cwiseAbs().maxCoeff(), 0.05);
    EXPECT_LT((fit.residual_cov - Matrix::Identity(2, 2)).norm(), 0.1);
}

TEST(EstimateVar, MatchesNormalEquationOracleOnTenObservations) {
    const auto fit = estimate_var(to_matrix(ten_obs), VarSpec{2, 1, 0, true});
    const auto expected = oracle::var_ols(ten_obs, 1, 1);
    ASSERT_EQ(fit.coefficients.cols(), 3);
    for (Index e = 0; e < 2; ++e)
        for (Index c = 0; c < 3; ++c)
            EXPECT_NEAR(fit.coefficients(e, c), static_cast<double>(expected[e][c]), 1e-10) << e << "," << c;
}

TEST(EstimateVar, MatchesOracleWithAugmentation) {
    const auto rows = oracle::random_walks(2, 40, 5);
    const VarSpec spec{2, 2, 1, true};
    const auto fit = estimate_var(to_matrix(rows), spec);
    const auto expected = oracle::var_ols(rows, 3, 3);
    for (Index e = 0; e < 2; ++e)
        for (Index c = 0; c < spec.regressors(); ++c)
            EXPECT_NEAR(fit.coefficients(e, c), static_cast<double>(expected[e][c]), 1e-10);
}

TEST(EstimateVar, ResidualsOrthogonalToDesign) {
    const Matrix data = to_matrix(oracle::random_walks(2, 120, 8));
    const auto fit = estimate_var(data, VarSpec{2, 3, 1, true});
    const Matrix inner = fit.design * fit.residuals.transpose();
    for (Index i = 0; i < inner.rows(); ++i)
        for (Index e = 0; e < inner.cols(); ++e) {
            const double scale = fit.design.row(i).norm() * fit.residuals.row(e).norm();
            EXPECT_LT(std::abs(inner(i, e)) / scale, 1e-8);
        }
}

TEST(EstimateVar, LayoutAndCovariance) {
    const Matrix data = to_matrix(oracle::random_walks(2, 50, 9));
    const VarSpec spec{2, 2, 1, true};
    const auto fit = estimate_var(data, spec);
    EXPECT_EQ(fit.sample_start, 3);
    EXPECT_EQ(fit.effective_sample(), 47);
    EXPECT_EQ(fit.design.rows(), 7);
    // Row column_of(v, j) of the design holds variable v lagged j periods.
    for (Index t = 0; t < fit.effective_sample(); ++t) {
        EXPECT_EQ(fit.design(0, t), 1.0);
        EXPECT_EQ(fit.design(spec.column_of(1, 2), t), data(1, t + 3 - 2));
        EXPECT_EQ(fit.design(spec.column_of(0, 3), t), data(0, t));
    }
    const Matrix cov = fit.residuals * fit.residuals.transpose() / 47.0;
    EXPECT_LT((cov - fit.residual_cov).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EstimateVar, EquationwiseEqualsStackedSolve) {
    const Matrix data = to_matrix(oracle::random_walks(3, 80, 10));
    const auto fit = estimate_var(data, VarSpec{3, 2, 0, true});
    const Matrix w = data.rightCols(fit.effective_sample());
    const Matrix stacked = (fit.design * fit.design.transpose()).ldlt().solve(fit.design * w.transpose()).transpose();
    EXPECT_LT((stacked - fit.coefficients).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(EstimateVar, SingularDesignNamesThreshold) {
    Matrix data(2, 30);
    for (Index t = 0; t < 30; ++t) {
        data(0, t) = std::sin(0.3 * t) + t;
        data(1, t) = 2.0 * data(0, t);  // collinear
    }
    try {
        estimate_var(data, VarSpec{2, 1, 0, true});
        FAIL() << "expected SingularityError";
    } catch (const SingularityError& e) {
        EXPECT_NE(std::string(e.what()).find("1e-12"), std::string::npos) << e.what();
    }
}

TEST(EstimateVar, InputErrors) {
    EXPECT_THROW(estimate_var(Matrix::Ones(2, 4), VarSpec{2, 1, 0, true}), LengthError);
    Matrix nan = to_matrix(oracle::random_walks(2, 30, 1));
    nan(1, 7) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(estimate_var(nan, VarSpec{2, 1, 0, true}), DataError);
    EXPECT_THROW(estimate_var(Matrix::Ones(2, 30), VarSpec{2, 0, 0, true}), ConfigError);
}

TEST(Leverages, InterceptOnly) {
    const auto h = leverages(Matrix::Ones(1, 25));
    ASSERT_EQ(h.size(), 25);
    for (Index t = 0; t < 25; ++t) EXPECT_NEAR(h(t), 1.0 / 25.0, 1e-14);
}

TEST(Leverages, TraceEqualsRegressorCountAndBounds) {
    const auto fit = estimate_var(to_matrix(oracle::random_walks(2, 90, 12)), VarSpec{2, 3, 1, true});
    EXPECT_NEAR(fit.leverages.sum(), static_cast<double>(fit.design.rows()), 1e-8);
    EXPECT_GT(fit.leverages.minCoeff(), 0.0);
    EXPECT_LT(fit.leverages.maxCoeff(), 1.0);
}

TEST(Leverages, MatchProjectionOracleOnToyDesign) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    Matrix x(8, 30);  // 8 regressors, 30 observations
    oracle::LMatrix rows(30, std::vector<long double>(8));
    for (Index t = 0; t < 30; ++t)
        for (Index i = 0; i < 8; ++i) {
            x(i, t) = i == 0 ? 1.0 : normal(rng) * (1.0 + i);
            rows[t][i] = x(i, t);
        }
    const auto h = leverages(x);
    const auto expected = oracle::projection_diagonal(rows);
    for (Index t = 0; t < 30; ++t) EXPECT_NEAR(h(t), static_cast<double>(expected[t]), 1e-12);
}

TEST(Leverages, RankDeficiencyThrows) {
    Matrix x(3, 20);
    x.row(0).setOnes();
    x.row(1).setLinSpaced(20, 0.0, 1.0);
    x.row(2) = 3.0 * x.row(1);
    EXPECT_THROW(leverages(x), SingularityError);
}

TEST(Hjc, IdentityCovarianceValue) {
    // ln|I| + (4 ln 100 + 8 ln ln 100) / 200
    const double expected = (4.0 * std::log(100.0) + 8.0 * std::log(std::log(100.0))) / 200.0;
    EXPECT_NEAR(hjc(Matrix::Identity(2, 2), 1, 100.0), expected, 1e-15);
    EXPECT_NEAR(hjc(Matrix::Identity(2, 2), 1, 100.0), 0.1531906, 1e-7);
}

TEST(Hjc, PenaltyGrowsWithLag) {
    const Matrix cov = Matrix::Identity(2, 2) * 0.7;
    double last = -std::numeric_limits<double>::infinity();
    for (int l = 1; l <= 8; ++l) {
        const double v = hjc(cov, l, 200.0);
        EXPECT_GT(v, last);
        EXPECT_GT(v - std::log(cov.determinant()), 0.0);
        last = v;
    }
}

TEST(Hjc, SingularCovarianceThrows) {
    Matrix cov(2, 2);
    cov << 1.0, 1.0, 1.0, 1.0;
    EXPECT_THROW(hjc(cov, 1, 100.0), SingularityError);
}

TEST(SelectLag, SingleCandidate) {
    const auto sel = select_lag(to_matrix(oracle::random_walks(2, 100, 2)), 1);
    EXPECT_EQ(sel.lag, 1);
}

TEST(SelectLag, WhiteNoiseMostlyPicksOne) {
    int ones = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto rng = make_stream(seed, 7);
        monte_carlo::GaussianInnovations shocks(Matrix::Identity(2, 2));
        Matrix data(2, 500);
        for (Index t = 0; t < 500; ++t) data.col(t) = shocks(rng);
        ones += select_lag(data, 5).lag == 1 ? 1 : 0;
    }
    EXPECT_GE(ones, 90);
}

TEST(SelectLag, FindsTrueOrderOfVar2) {
    std::vector<int> counts(9, 0);
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        ++counts[select_lag(simulate(monte_carlo::HjcExperiment::true_lags(), 200, 100 + seed), 8).lag];
    EXPECT_GT(counts[2], 100);
    EXPECT_LT(counts[8], 20);
}

TEST(SelectLag, CandidatesShareOneSample) {
    // The chosen lag's criterion equals hjc() of a fit on the common sample start.
    const Matrix data = to_matrix(oracle::random_walks(2, 150, 21));
    const int l_max = 6, d = 1;
    const auto sel = select_lag(data, l_max, d);
    const auto fit = estimate_var(data, VarSpec{2, sel.lag, 0, true}, l_max + d);
    ASSERT_EQ(sel.criterion.size(), 6u);
    EXPECT_NEAR(sel.criterion[sel.lag - 1], hjc(fit, static_cast<double>(fit.effective_sample())), 1e-12);
    for (double v : sel.criterion) EXPECT_GE(v, sel.criterion[sel.lag - 1]);
}

TEST(SelectLag, SingularCandidateReportsLag) {
    Matrix data(2, 60);
    for (Index t = 0; t < 60; ++t) {
        data(0, t) = std::cos(0.2 * t) * t;
        data(1, t) = -data(0, t);
    }
    try {
        select_lag(data, 3);
        FAIL() << "expected SingularityError";
    } catch (const SingularityError& e) {
        EXPECT_NE(std::string(e.what()).find("lag"), std::string::npos) << e.what();
    }
}

TEST(RestrictedVar, ExcludedCoefficientsAreZeroAndOthersMatchOracle) {
    const auto rows = oracle::random_walks(2, 60, 31);
    const VarSpec spec{2, 2, 1, true};
    std::vector<std::vector<Index>> excluded(2);
    excluded[0] = {spec.column_of(1, 1), spec.column_of(1, 2)};
    const auto fit = estimate_restricted_var(to_matrix(rows), spec, excluded);
    EXPECT_FALSE(fit.full_design[0]);
    EXPECT_TRUE(fit.full_design[1]);
    EXPECT_EQ(fit.coefficients(0, spec.column_of(1, 1)), 0.0);
    EXPECT_EQ(fit.coefficients(0, spec.column_of(1, 2)), 0.0);

    // Reduced design for equation 0 through the oracle.
    const auto full_rows = oracle::var_regressors(rows, 3, 3);
    oracle::LMatrix reduced;
    for (const auto& r : full_rows) {
        std::vector<long double> keep;
        for (Index c = 0; c < spec.regressors(); ++c)
            if (c != excluded[0][0] && c != excluded[0][1]) keep.push_back(r[c]);
        reduced.push_back(keep);
    }
    std::vector<long double> y(rows[0].begin() + 3, rows[0].end());
    const auto b = oracle::normal_equation_ols(reduced, y);
    std::size_t j = 0;
    for (Index c = 0; c < spec.regressors(); ++c) {
        if (c == excluded[0][0] || c == excluded[0][1]) continue;
        EXPECT_NEAR(fit.coefficients(0, c), static_cast<double>(b[j++]), 1e-9);
    }
    const auto h = oracle::projection_diagonal(reduced);
    for (Index t = 0; t < fit.effective_sample(); ++t) EXPECT_NEAR(fit.leverages(0, t), static_cast<double>(h[t]), 1e-10);

    const auto unrestricted = estimate_var(to_matrix(rows), spec);
    EXPECT_LT((fit.coefficients.row(1) - unrestricted.coefficients.row(1)).cwiseAbs().maxCoeff(), 1e-10);
}
