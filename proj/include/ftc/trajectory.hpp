#pragma once

#include <cstddef>
#include <vector>

#include "ftc/protocol.hpp"

namespace ftc {

/// Time-indexed record of a protocol run: states, the controls applied at
/// each recorded step start, and the metric traces plotted against them.
/// Sample times are uniformly spaced at stride * dt.
struct Trajectory {
    int agent_count = 0;
    bool sliding = false;

    std::vector<double> times;
    std::vector<SwarmState> states;
    std::vector<std::vector<double>> controls;
    std::vector<std::vector<double>> surfaces;  // sliding only: s_i per sample

    // metric traces, one entry per sample
    std::vector<double> disagreement;  // V = 1/4 sum_ij a_ij (x_j - x_i)^2
    std::vector<double> spread;        // max_i x_i - min_i x_i
    std::vector<double> control_peak;  // max_i |u_i|

    double max_disturbance = 0.0;  // largest |Delta_i| seen at recorded samples

    std::size_t samples() const { return times.size(); }
};

}  // namespace ftc
