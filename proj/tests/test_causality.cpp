#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "asymcause/causality.hpp"
#include "oracles.hpp"

using namespace asymcause;

namespace {

Matrix walks(int n, int t_len, std::uint64_t seed) {
    const auto s = oracle::random_walks(n, t_len, seed);
    Matrix m(n, t_len);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < t_len; ++t) m(i, t) = s[i][t];
    return m;
}

/// (C a)' [C (G kron S) C']^{-1} (C a), with the Kronecker product formed in full.
long double kronecker_wald(const VarFit& fit, const RestrictionSet& r) {
    const Index n = fit.spec.n_vars;
    const Index k = fit.gram_inverse.rows();
    const Index dim = n * k;
    // Full (G kron S), indexed in column-major vec order: position = column * n + equation.
    oracle::LMatrix kron(dim, std::vector<long double>(dim));
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b)
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j)
                    kron[a * n + i][b * n + j] = static_cast<long double>(fit.gram_inverse(a, b)) * fit.residual_cov(i, j);
    // alpha stacked column by column by hand
    std::vector<long double> alpha;
    for (Index c = 0; c < fit.coefficients.cols(); ++c)
        for (Index e = 0; e < n; ++e) alpha.push_back(fit.coefficients(e, c));

    const Index m = r.selector.rows();
    std::vector<long double> ca(m, 0.0L);
    oracle::LMatrix bracket(m, std::vector<long double>(m, 0.0L));
    for (Index i = 0; i < m; ++i)
        for (Index p = 0; p < dim; ++p) ca[i] += r.selector(i, p) * alpha[p];
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            for (Index p = 0; p < dim; ++p)
                for (Index q = 0; q < dim; ++q) bracket[i][j] += r.selector(i, p) * kron[p][q] * r.selector(j, q);
    const auto inv = oracle::invert(bracket);
    long double w = 0.0L;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) w += ca[i] * inv[i][j] * ca[j];
    return w;
}

}  // namespace

TEST(VecOrder, StacksColumns) {
    Matrix d(2, 2);
    d << 1, 2, 3, 4;  // [[a, b], [c, d]]
    const Vector a = vec_order(d);
    EXPECT_EQ(a, (Vector(4) << 1, 3, 2, 4).finished());
}

TEST(VecOrder, PositionOfCrossCoefficient) {
    // n=2, l=1, d=0: D = [c | B1], 2 x 3. Variable 2's lag-1 coefficient in
    // equation 1 sits in column 2, row 0, i.e. vec position 2*2 + 0 = 4
    // (counting from 0; the fifth entry).
    const VarSpec spec{2, 1, 0, true};
    EXPECT_EQ(vec_position(spec, 1, 1, 0), 4);
    Matrix d = Matrix::Zero(2, 3);
    d(0, spec.column_of(1, 1)) = 7.0;
    EXPECT_EQ(vec_order(d)(4), 7.0);
}

TEST(VecOrder, UnvecRoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix m(3, 7);
        for (Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
        EXPECT_EQ(unvec(vec_order(m), 3, 7), m);
    }
    EXPECT_THROW(unvec(Vector::Zero(5), 2, 3), StructuralError);
}

TEST(BuildRestrictions, SingleLagSelector) {
    const VarSpec spec{2, 1, 0, true};
    const auto r = build_restrictions(spec, 1, 0);  // variable 2 does not cause variable 1
    ASSERT_EQ(r.selector.rows(), 1);
    ASSERT_EQ(r.selector.cols(), 6);
    EXPECT_EQ(r.selector.sum(), 1.0);
    EXPECT_EQ(r.selector(0, 4), 1.0);
    EXPECT_EQ(r.positions, std::vector<Index>{4});
}

TEST(BuildRestrictions, AugmentationLagNeverRestricted) {
    const VarSpec spec{2, 3, 1, true};
    for (auto [cause, effect] : {std::pair{0, 1}, std::pair{1, 0}}) {
        const auto r = build_restrictions(spec, cause, effect);
        ASSERT_EQ(r.selector.rows(), 3);
        ASSERT_EQ(r.selector.cols(), 18);
        // lag-4 block: columns 1 + 3*2 .. 1 + 4*2 - 1 of D, i.e. vec positions 14..17
        EXPECT_EQ(r.selector.rightCols(4).sum(), 0.0);
        for (Index i = 0; i < 3; ++i) EXPECT_EQ(r.selector.row(i).sum(), 1.0);
        EXPECT_EQ(r.restricted_lags, (std::vector<int>{1, 2, 3}));
    }
}

TEST(BuildRestrictions, InvalidDirections) {
    const VarSpec spec{2, 2, 1, true};
    EXPECT_THROW(build_restrictions(spec, 0, 0), InvalidRestrictionError);
    EXPECT_THROW(build_restrictions(spec, 2, 0), InvalidRestrictionError);
    EXPECT_THROW(build_restrictions(spec, -1, 0), ConfigError);
}

TEST(Wald, GathersRestrictedCoefficients) {
    const auto fit = estimate_var(walks(2, 100, 1), VarSpec{2, 3, 1, true});
    const auto r = build_restrictions(fit.spec, 1, 0);
    const Vector ca = r.selector * vec_order(fit.coefficients);
    for (int j = 1; j <= 3; ++j) EXPECT_EQ(ca(j - 1), fit.coefficients(0, fit.spec.column_of(1, j)));
    EXPECT_NEAR(wald(fit, r).causal_parameter, ca.sum(), 1e-15);
}

TEST(Wald, MatchesFullKroneckerOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int l = 1 + static_cast<int>(seed % 4);
        const auto fit = estimate_var(walks(2, 150, 40 + seed), VarSpec{2, l, 1, true});
        for (auto [cause, effect] : {std::pair{0, 1}, std::pair{1, 0}}) {
            const auto r = build_restrictions(fit.spec, cause, effect);
            const auto result = wald(fit, r);
            const double expected = static_cast<double>(kronecker_wald(fit, r));
            EXPECT_NEAR(result.wald, expected, 1e-8 * std::max(1.0, expected)) << "seed " << seed;
            EXPECT_EQ(result.df, l);
            EXPECT_EQ(result.augmentation, 1);
            EXPECT_GE(result.asymptotic_p, 0.0);
            EXPECT_LE(result.asymptotic_p, 1.0);
        }
    }
}

TEST(Wald, ThreeVariableSystemMatchesOracle) {
    const auto fit = estimate_var(walks(3, 120, 77), VarSpec{3, 2, 1, true});
    const auto r = build_restrictions(fit.spec, 2, 1);
    EXPECT_NEAR(wald(fit, r).wald, static_cast<double>(kronecker_wald(fit, r)), 1e-8);
}

TEST(Wald, ScalarCaseIsSquaredTRatio) {
    const auto series = oracle::random_walks(2, 80, 5);
    Matrix data(2, 80);
    for (int i = 0; i < 2; ++i)
        for (int t = 0; t < 80; ++t) data(i, t) = series[i][t];
    const VarSpec spec{2, 1, 0, true};
    const auto result = wald(estimate_var(data, spec), build_restrictions(spec, 1, 0));

    // Equation 0 alone through the normal-equation oracle, residual variance with divisor T_eff.
    const auto rows = oracle::var_regressors(series, 1, 1);
    std::vector<long double> y(series[0].begin() + 1, series[0].end());
    const auto b = oracle::normal_equation_ols(rows, y);
    const auto g = oracle::gram_inverse(rows);
    long double ssr = 0.0L;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        long double fitted = 0.0L;
        for (std::size_t c = 0; c < b.size(); ++c) fitted += rows[t][c] * b[c];
        ssr += (y[t] - fitted) * (y[t] - fitted);
    }
    const long double sigma2 = ssr / rows.size();
    const long double t_ratio = b[2] / std::sqrt(sigma2 * g[2][2]);
    EXPECT_NEAR(result.wald, static_cast<double>(t_ratio * t_ratio), 1e-8 * std::max(1.0L, t_ratio * t_ratio));
}

TEST(Wald, ZeroRestrictedCoefficientsGiveZero) {
    auto fit = estimate_var(walks(2, 100, 6), VarSpec{2, 2, 1, true});
    const auto r = build_restrictions(fit.spec, 0, 1);
    for (int j = 1; j <= 2; ++j) fit.coefficients(1, fit.spec.column_of(0, j)) = 0.0;
    const auto result = wald(fit, r);
    EXPECT_EQ(result.wald, 0.0);
    EXPECT_EQ(result.causal_parameter, 0.0);
    EXPECT_EQ(result.asymptotic_p, 1.0);
}

TEST(Wald, InvariantToRescaling) {
    const Matrix data = walks(2, 160, 13);
    const VarSpec spec{2, 3, 1, true};
    for (auto [cause, effect] : {std::pair{0, 1}, std::pair{1, 0}}) {
        const auto r = build_restrictions(spec, cause, effect);
        const double base = wald(estimate_var(data, spec), r).wald;
        const double both = wald(estimate_var(data * 250.0, spec), r).wald;
        Matrix separate = data;
        separate.row(0) *= 0.003;
        separate.row(1) *= 42.0;
        const double each = wald(estimate_var(separate, spec), r).wald;
        EXPECT_NEAR(both, base, 1e-6 * base);
        EXPECT_NEAR(each, base, 1e-6 * base);
    }
}

TEST(Wald, MismatchedRestrictionsRejected) {
    const auto fit = estimate_var(walks(2, 100, 2), VarSpec{2, 2, 1, true});
    EXPECT_THROW(wald(fit, build_restrictions(VarSpec{2, 3, 1, true}, 1, 0)), StructuralError);
}

TEST(Wald, DirectionLabel) {
    EXPECT_EQ(direction_label("S⁻", "Y⁻"), "S⁻ ≠> Y⁻");
    const auto fit = estimate_var(walks(2, 60, 3), VarSpec{2, 1, 1, true});
    EXPECT_EQ(wald(fit, build_restrictions(fit.spec, 1, 0), "S ≠> Y").direction_label, "S ≠> Y");
}

TEST(ChiSquare, ZeroStatistic) {
    for (int k = 1; k < 30; ++k) EXPECT_EQ(chi_square_upper_tail(0.0, k), 1.0);
}

TEST(ChiSquare, FrozenHighPrecisionValues) {
    // Reference values from 30-digit arithmetic.
    EXPECT_NEAR(chi_square_upper_tail(3.841, 1), 0.050013683763956699, 1e-14);
    EXPECT_NEAR(chi_square_upper_tail(3.841, 1), 0.0500, 1e-4);
    EXPECT_NEAR(chi_square_upper_tail(6.358, 3), 0.095434036455468557, 1e-14);
    EXPECT_NEAR(chi_square_upper_tail(5.991464547107979, 2), 0.05, 1e-14);
    EXPECT_NEAR(chi_square_upper_tail(12.081, 3), 0.0071107771678059215, 1e-14);
    EXPECT_NEAR(chi_square_upper_tail(40.0, 30), 0.10486428110798467, 1e-13);
    EXPECT_NEAR(chi_square_upper_tail(100.0, 50), 3.4549313829848639e-5, 1e-16);
    EXPECT_NEAR(chi_square_upper_tail(0.5, 20), 0.99999999999979057515, 1e-15);
    const double tiny = chi_square_upper_tail(150.0, 10);
    EXPECT_NEAR(tiny / 3.7274850550625096e-27, 1.0, 1e-10);
}

TEST(ChiSquare, MatchesLongDoubleSeriesOracle) {
    for (int df = 1; df <= 40; df += 3)
        for (double x = 0.1; x < 80.0; x *= 1.7) {
            const double expected = static_cast<double>(oracle::chi_square_tail_series(x, df));
            EXPECT_NEAR(chi_square_upper_tail(x, df), expected, 1e-12) << "x=" << x << " df=" << df;
        }
}

TEST(ChiSquare, MonotoneInStatistic) {
    for (int df : {1, 2, 3, 8, 18}) {
        double last = 1.0;
        for (double x = 0.0; x < 100.0; x += 0.25) {
            const double p = chi_square_upper_tail(x, df);
            EXPECT_LE(p, last);
            EXPECT_GE(p, 0.0);
            last = p;
        }
    }
}

TEST(ChiSquare, DomainErrors) {
    EXPECT_THROW(chi_square_upper_tail(-0.1, 2), DomainError);
    EXPECT_THROW(chi_square_upper_tail(1.0, 0), DomainError);
    EXPECT_THROW(chi_square_upper_tail(std::nan(""), 2), DomainError);
    EXPECT_EQ(chi_square_upper_tail(std::numeric_limits<double>::infinity(), 2), 0.0);
}
