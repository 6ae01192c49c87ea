#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gridworth {

inline double mean(std::span<const double> xs) {
    if (xs.empty())
        throw std::invalid_argument("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n-1 denominator). Needs at least two values.
inline double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2)
        throw std::invalid_argument("sample_stddev needs >= 2 values");
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - m;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Standard error of the mean across the given per-instance values;
/// absent when fewer than two instances exist.
inline std::optional<double> standard_error(std::span<const double> instance_means) {
    if (instance_means.size() < 2)
        return std::nullopt;
    return sample_stddev(instance_means) / std::sqrt(static_cast<double>(instance_means.size()));
}

/// Nearest-rank percentile (no interpolation): the ceil(p/100 * n)-th order
/// statistic, 1-indexed. p in (0, 100]. Sorts a copy.
inline double nearest_rank_percentile(std::vector<double> xs, double p) {
    if (xs.empty())
        throw std::invalid_argument("percentile of empty sample");
    if (!(p > 0.0 && p <= 100.0))
        throw std::invalid_argument("percentile rank out of range");
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, xs.size());
    return xs[rank - 1];
}

} // namespace gridworth
