#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace xgram {

/// Order statistic ceil(p B) of B values (1-based, no interpolation).
inline double order_statistic_quantile(std::span<const double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("quantile level must lie in (0, 1)");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto b = static_cast<double>(sorted.size());
    auto k = static_cast<std::size_t>(std::ceil(p * b - 1e-9));
    k = std::clamp<std::size_t>(k, 1, sorted.size());
    return sorted[k - 1];
}

}  // namespace xgram
