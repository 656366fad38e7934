#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftc/graph.hpp"
#include "ftc/numeric.hpp"
#include "ftc/protocol.hpp"
#include "ftc/trajectory.hpp"

namespace ftc {

/// Disagreement energy V = 1/4 sum_i sum_j a_ij (x_j - x_i)^2.
/// Zero iff all states coincide when the graph is connected.
inline double disagreement(const Graph& g, std::span<const double> x) {
    detail::check_sizes(g, x, "disagreement");
    double v = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        for (const auto& [j, w] : g.neighbors(i)) {
            const double dx = x[j] - x[i];
            v += w * dx * dx;
        }
    }
    return v / 4.0;
}

/// Largest pairwise distance max_ij |x_i - x_j| = max(x) - min(x).
inline double max_spread(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("max_spread: empty state");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

struct ConsensusDetection {
    double time = 0.0;
    double value = 0.0;  // mean of the final-sample state
};

namespace detail {

// Earliest recorded time from which the trace stays below epsilon through
// the end of the horizon; nullopt when the final sample is still above.
inline std::optional<double> sustained_below(const std::vector<double>& times, const std::vector<double>& trace,
                                             double epsilon) {
    if (times.empty()) return std::nullopt;
    std::size_t first = 0;
    for (std::size_t k = times.size(); k-- > 0;) {
        if (trace[k] >= epsilon) {
            first = k + 1;
            break;
        }
    }
    if (first >= times.size()) return std::nullopt;
    return times[first];
}

}  // namespace detail

/// Earliest recorded time with max-spread below epsilon sustained to the
/// end of the trajectory, together with the final-sample mean state.
inline std::optional<ConsensusDetection> consensus_time(const Trajectory& traj, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("consensus_time: epsilon must be positive");
    const auto t = detail::sustained_below(traj.times, traj.spread, epsilon);
    if (!t) return std::nullopt;
    return ConsensusDetection{*t, mean(traj.states.back().x)};
}

/// Earliest recorded time with max_i |s_i| below epsilon sustained to the
/// end. Only meaningful for sliding-mode runs.
inline std::optional<double> reaching_time(const Trajectory& traj, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("reaching_time: epsilon must be positive");
    if (!traj.sliding || traj.surfaces.size() != traj.times.size())
        throw std::invalid_argument("reaching_time: trajectory has no sliding-surface records");
    std::vector<double> smax(traj.surfaces.size());
    for (std::size_t k = 0; k < traj.surfaces.size(); ++k) {
        double m = 0.0;
        for (double s : traj.surfaces[k]) m = std::max(m, std::abs(s));
        smax[k] = m;
    }
    return detail::sustained_below(traj.times, smax, epsilon);
}

/// Largest |u_i| over all recorded samples and agents.
inline double max_control(const Trajectory& traj) {
    double m = 0.0;
    for (double v : traj.control_peak) m = std::max(m, v);
    return m;
}

/// Largest drift |sum_i w_i x_i(t) - sum_i w_i x_i(0)| over the recorded
/// trajectory; w defaults to the uniform weights 1/n. For the average and
/// weighted protocols the weighted sum is conserved by antisymmetry; the
/// other variants get the raw drift without judgment.
inline double conservation_error(const Trajectory& traj, std::span<const double> weights = {}) {
    if (traj.states.empty()) return 0.0;
    const std::size_t n = traj.states.front().x.size();
    if (!weights.empty() && weights.size() != n)
        throw std::invalid_argument("conservation_error: weight length " + std::to_string(weights.size()) +
                                    " does not match agent count " + std::to_string(n));
    auto weighted_sum = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += (weights.empty() ? 1.0 / static_cast<double>(n) : weights[i]) * x[i];
        return s;
    };
    const double s0 = weighted_sum(traj.states.front().x);
    double err = 0.0;
    for (const auto& st : traj.states) err = std::max(err, std::abs(weighted_sum(st.x) - s0));
    return err;
}

/// Everything the run report prints: the detected consensus event, the
/// convergence-time bound (when its radicand is positive), the
/// sufficiency-condition check and the conserved-quantity drift.
struct ConsensusReport {
    std::string scenario;
    std::optional<double> consensus_time;
    std::optional<double> consensus_value;
    std::optional<double> bound;
    std::optional<bool> within_bound;  // consensus_time <= bound, when both exist
    ConditionCheck condition;
    double max_control = 0.0;
    double max_spread_final = 0.0;
    std::optional<double> reaching_time;   // sliding only
    std::optional<double> reaching_bound;  // sliding only
    double conservation_error = 0.0;
};

}  // namespace ftc
