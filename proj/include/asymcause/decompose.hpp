#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "asymcause/time_series.hpp"

namespace asymcause {

/// Cumulative positive and negative components of a level series.
///
/// With Y0 the first observation and e_i = Y_i - Y_{i-1}:
///   positive[t] = Y0/2 + sum_{i<=t} max(e_i, 0)
///   negative[t] = Y0/2 + sum_{i<=t} min(e_i, 0)
/// so positive + negative reproduces the input at every index. Note the initial
/// value is split evenly between the two components, not assigned to one of them.
struct ComponentPair {
    TimeSeries positive;
    TimeSeries negative;
    std::string origin_id;
    double initial_value = 0.0;
};

inline ComponentPair decompose(const TimeSeries& series) {
    const auto& y = series.values();
    const double half = y.front() / 2.0;
    std::vector<double> pos(y.size()), neg(y.size());
    pos[0] = neg[0] = half;
    double up = 0.0, down = 0.0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        const double e = y[t] - y[t - 1];
        up += std::max(e, 0.0);
        down += std::min(e, 0.0);
        pos[t] = half + up;
        neg[t] = half + down;
    }
    return ComponentPair{TimeSeries(series.id() + "+", series.dates(), std::move(pos)),
                         TimeSeries(series.id() + "-", series.dates(), std::move(neg)), series.id(), y.front()};
}

/// Integer-indexed convenience overload; validates length and finiteness.
inline ComponentPair decompose(std::span<const double> values, std::string id = "y") {
    return decompose(TimeSeries::indexed(std::move(id), std::vector<double>(values.begin(), values.end())));
}

inline TimeSeries recompose(const ComponentPair& pair) {
    const auto& p = pair.positive;
    const auto& n = pair.negative;
    if (p.size() != n.size())
        throw StructuralError("component lengths differ: " + std::to_string(p.size()) + " vs " +
                              std::to_string(n.size()));
    if (p.dates() != n.dates()) throw StructuralError("component dates differ");
    std::vector<double> sum(p.size());
    for (std::size_t t = 0; t < sum.size(); ++t) sum[t] = p[t] + n[t];
    return TimeSeries(pair.origin_id, p.dates(), std::move(sum));
}

}  // namespace asymcause
