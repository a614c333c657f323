#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/random/uniform_int_distribution.hpp>

#include "asymcause/causality.hpp"
#include "asymcause/parallel.hpp"

namespace asymcause {

struct BootstrapConfig {
    int replications = 10000;
    std::uint64_t seed = 20200901;
    std::array<double, 3> quantiles{0.99, 0.95, 0.90};  ///< 1%, 5%, 10% critical values
    unsigned parallelism = 0;                           ///< worker threads, 0 = hardware concurrency
    bool keep_statistics = false;

    void validate() const {
        if (replications < 100) throw ConfigError("bootstrap needs at least 100 replications");
        for (double q : quantiles)
            if (!(q > 0.0 && q < 1.0)) throw ConfigError("bootstrap quantiles must lie in (0, 1)");
    }
};

struct BootstrapResult {
    CriticalValues cvs;
    std::vector<double> replication_statistics;  ///< filled when keep_statistics is set
    int requested_replications = 0;
    int effective_replications = 0;
    bool warning = false;  ///< more than 1% of the refits failed
    std::string warning_message;
};

/// Order statistic of rank ceil(q N) (1-based) in the sorted sample.
inline double empirical_quantile(std::span<const double> values, double q) {
    if (values.empty()) throw DomainError("empirical quantile of an empty sample");
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    const auto n = values.size();
    // The small offset keeps q * N that lands on an integer from rounding up a rank.
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::vector<double> copy(values.begin(), values.end());
    std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(rank - 1), copy.end());
    return copy[rank - 1];
}

/// Residuals scaled by 1/sqrt(1 - h) with each equation's own leverages, then
/// re-centred to mean zero per equation.
inline Matrix leverage_adjusted_residuals(const RestrictedVarFit& fit) {
    Matrix adjusted = fit.residuals.array() / (1.0 - fit.leverages.array()).sqrt();
    adjusted.colwise() -= adjusted.rowwise().mean();
    return adjusted;
}

/// Null-imposed model: the effect equation without the cause's lags 1..l.
inline RestrictedVarFit estimate_null_model(const Matrix& data, const VarSpec& spec,
                                            const RestrictionSet& restrictions) {
    std::vector<std::vector<Index>> excluded(spec.n_vars);
    excluded[restrictions.effect_index] = restrictions.excluded_columns(spec);
    try {
        return estimate_restricted_var(data, spec, excluded);
    } catch (const SingularityError& e) {
        throw SingularityError(std::string("null-imposed model cannot be estimated: ") + e.what());
    }
}

/// Regenerates a sample from the null model: the first l + d observations are
/// the originals, later ones follow the restricted recursion driven by
/// resampled whole residual columns.
template <class Rng>
Matrix regenerate_sample(const Matrix& data, const RestrictedVarFit& null_model, const Matrix& innovations, Rng& rng) {
    const VarSpec& spec = null_model.spec;
    const Index n = spec.n_vars;
    const Index start = null_model.sample_start;
    const Index pool = innovations.cols();
    boost::random::uniform_int_distribution<Index> pick(0, pool - 1);

    Matrix sample(n, data.cols());
    sample.leftCols(start) = data.leftCols(start);
    const Matrix& d = null_model.coefficients;
    for (Index t = start; t < data.cols(); ++t) {
        Vector z = spec.include_intercept ? Vector(d.col(0)) : Vector(Vector::Zero(n));
        for (int j = 1; j <= spec.total_lags(); ++j) z.noalias() += d.middleCols(spec.column_of(0, j), n) * sample.col(t - j);
        sample.col(t) = z + innovations.col(pick(rng));
    }
    return sample;
}

/// Critical values from per-replication statistics; non-finite entries mark
/// failed refits and are discarded.
inline BootstrapResult summarize_replications(std::vector<double> stats, const BootstrapConfig& config) {
    std::vector<double> kept;
    kept.reserve(stats.size());
    for (double s : stats)
        if (std::isfinite(s)) kept.push_back(s);

    const std::size_t reps = stats.size();
    BootstrapResult out;
    out.requested_replications = static_cast<int>(reps);
    out.effective_replications = static_cast<int>(kept.size());
    if (kept.empty()) throw NumericalError("every bootstrap refit failed");
    if (kept.size() < 0.99 * static_cast<double>(reps)) {
        out.warning = true;
        out.warning_message = std::to_string(reps - kept.size()) + " of " + std::to_string(reps) +
                              " bootstrap refits failed and were discarded";
    }
    out.cvs = {empirical_quantile(kept, config.quantiles[0]), empirical_quantile(kept, config.quantiles[1]),
               empirical_quantile(kept, config.quantiles[2])};
    if (config.keep_statistics) out.replication_statistics = std::move(stats);
    return out;
}

/// Leveraged residual bootstrap of the Wald statistic under the non-causality null.
/// Replication r draws from its own stream derived from (seed, r), so results
/// do not depend on the worker count.
inline BootstrapResult bootstrap_cvs(const Matrix& data, const VarSpec& spec, const RestrictionSet& restrictions,
                                     const BootstrapConfig& config) {
    config.validate();
    const RestrictedVarFit null_model = estimate_null_model(data, spec, restrictions);
    const Matrix innovations = leverage_adjusted_residuals(null_model);

    const auto reps = static_cast<std::size_t>(config.replications);
    std::vector<double> stats(reps, std::numeric_limits<double>::quiet_NaN());
    parallel_for(reps, config.parallelism, [&](std::size_t r) {
        auto rng = make_stream(config.seed, r);
        const Matrix sample = regenerate_sample(data, null_model, innovations, rng);
        try {
            stats[r] = wald(estimate_var(sample, spec), restrictions).wald;
        } catch (const Error&) {
            // singular or explosive refit: discarded and counted below
        }
    });

    return summarize_replications(std::move(stats), config);
}

}  // namespace asymcause
