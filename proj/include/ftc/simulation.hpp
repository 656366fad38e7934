#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftc/disturbance.hpp"
#include "ftc/graph.hpp"
#include "ftc/integrator.hpp"
#include "ftc/metrics.hpp"
#include "ftc/protocol.hpp"
#include "ftc/trajectory.hpp"

namespace ftc {

namespace detail {

// Coupled right-hand side over the flat layout [x | theta] or
// [x | theta | eta | I] for the sliding variant.
class SwarmSystem {
  public:
    SwarmSystem(const Graph& g, const ProtocolConfig& c, const DisturbanceSpec& dist)
        : g_(g), c_(c), dist_(dist), n_(static_cast<std::size_t>(g.size())) {
        state_.x.resize(n_);
        state_.theta.resize(n_);
        if (sliding()) {
            state_.eta.resize(n_);
            state_.integral.resize(n_);
        }
        u_.resize(n_);
        nominal_.resize(n_);
    }

    bool sliding() const { return c_.variant == Protocol::SlidingMode; }
    std::size_t dimension() const { return sliding() ? 4 * n_ : 2 * n_; }

    void unpack(const std::vector<double>& y, SwarmState& s) const {
        s.x.assign(y.begin(), y.begin() + n_);
        s.theta.assign(y.begin() + n_, y.begin() + 2 * n_);
        if (sliding()) {
            s.eta.assign(y.begin() + 2 * n_, y.begin() + 3 * n_);
            s.integral.assign(y.begin() + 3 * n_, y.end());
        }
    }

    // Control applied at the current state; nominal is filled for the
    // sliding variant (it is also the Idot integrand).
    void control(const SwarmState& s, std::vector<double>& u, std::vector<double>& nominal) const {
        switch (c_.variant) {
            case Protocol::FixedTime:
                eval_fixed_time(g_, s.x, s.theta, c_.gamma, u);
                break;
            case Protocol::Average:
                eval_edge_inverse(g_, s.x, s.theta, c_.gamma, {}, u);
                break;
            case Protocol::Weighted:
                eval_edge_inverse(g_, s.x, s.theta, c_.gamma, c_.p, u);
                break;
            case Protocol::SlidingMode: {
                eval_edge_inverse(g_, s.x, s.theta, c_.gamma, {}, nominal);
                for (std::size_t i = 0; i < n_; ++i) {
                    const double surf = s.x[i] - c_.manifold_offset(static_cast<int>(i)) - s.integral[i];
                    u[i] = nominal[i] - (s.eta[i] + c_.d) * sign0(surf);
                }
                break;
            }
        }
    }

    void operator()(double t, const std::vector<double>& y, std::vector<double>& dy) {
        unpack(y, state_);
        control(state_, u_, nominal_);
        const auto delta = dist_.evaluate(t, static_cast<int>(n_));
        for (std::size_t i = 0; i < n_; ++i) dy[i] = u_[i] + delta[i];
        eval_theta_rhs(g_, state_.x, state_.theta, c_.lambda, c_.rho,
                       std::span<double>(dy.data() + n_, n_));
        if (sliding()) {
            for (std::size_t i = 0; i < n_; ++i) {
                const double surf = state_.x[i] - c_.manifold_offset(static_cast<int>(i)) - state_.integral[i];
                dy[2 * n_ + i] = -c_.omega_s * state_.eta[i] + c_.mu * std::abs(surf);
                dy[3 * n_ + i] = nominal_[i];
            }
        }
    }

  private:
    const Graph& g_;
    const ProtocolConfig& c_;
    const DisturbanceSpec& dist_;
    std::size_t n_;
    SwarmState state_;
    std::vector<double> u_, nominal_;
};

}  // namespace detail

/// Integrates the coupled dynamics xdot = u + Delta, thetadot, and for the
/// sliding variant etadot and Idot, recording states, controls (pre-step)
/// and metric traces. The sliding integral I is an extra integrated state,
/// never post-hoc quadrature, so s and sdot stay consistent to integrator
/// order.
inline Trajectory simulate_swarm(const Graph& g, const ProtocolConfig& c, const DisturbanceSpec& dist,
                                 const std::vector<double>& x0, const IntegratorSettings& settings) {
    const int n = g.size();
    if (n == 0) throw std::invalid_argument("simulate_swarm: empty graph");
    c.validate(n);
    settings.validate();
    if (static_cast<int>(x0.size()) != n)
        throw std::invalid_argument("simulate_swarm: x0 length " + std::to_string(x0.size()) +
                                    " does not match graph size " + std::to_string(n));
    if (!dist.terms().empty() && dist.agents() != n)
        throw std::invalid_argument("simulate_swarm: disturbance covers " + std::to_string(dist.agents()) +
                                    " agents, expected " + std::to_string(n));

    detail::SwarmSystem system(g, c, dist);
    std::vector<double> y(system.dimension(), 0.0);
    std::copy(x0.begin(), x0.end(), y.begin());

    Trajectory traj;
    traj.agent_count = n;
    traj.sliding = system.sliding();
    const std::size_t rows = static_cast<std::size_t>(settings.steps() / settings.stride()) + 1;
    traj.times.reserve(rows);
    traj.states.reserve(rows);
    traj.controls.reserve(rows);

    SwarmState snapshot;
    std::vector<double> u(static_cast<std::size_t>(n)), nominal(static_cast<std::size_t>(n));
    integrate(system, y, settings, [&](long, double t, const std::vector<double>& yk) {
        system.unpack(yk, snapshot);
        snapshot.t = t;
        system.control(snapshot, u, nominal);
        const auto delta = dist.evaluate(t, n);

        traj.times.push_back(t);
        traj.controls.push_back(u);
        traj.disagreement.push_back(disagreement(g, snapshot.x));
        traj.spread.push_back(max_spread(snapshot.x));
        double peak = 0.0;
        for (double v : u) peak = std::max(peak, std::abs(v));
        traj.control_peak.push_back(peak);
        for (double v : delta) traj.max_disturbance = std::max(traj.max_disturbance, std::abs(v));
        if (traj.sliding) {
            std::vector<double> surf(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                surf[static_cast<std::size_t>(i)] =
                    snapshot.x[static_cast<std::size_t>(i)] - c.manifold_offset(i) -
                    snapshot.integral[static_cast<std::size_t>(i)];
            traj.surfaces.push_back(std::move(surf));
        }
        traj.states.push_back(snapshot);
    });
    return traj;
}

}  // namespace ftc
