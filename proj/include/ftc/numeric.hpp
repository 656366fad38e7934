#pragma once

#include <cstddef>
#include <numeric>
#include <span>

namespace ftc {

/// Sign function with sign0(0) = 0, so the origin is an exact equilibrium
/// of every discontinuous law built on it.
inline double sign0(double v) {
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0;
}

inline double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace ftc
