#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftc/integrator.hpp"
#include "ftc/numeric.hpp"

namespace ftc {

/// Gains of the scalar fixed-time law
///
///   xdot     = -theta * sign0(x)
///   thetadot = -lambda * theta + rho * |x|,   theta(0) = 0.
///
/// The oscillatory regime rho > lambda^2/4 makes |x| follow a damped
/// sinusoid whose first zero is bounded independently of x(0).
struct ScalarGains {
    double lambda;
    double rho;

    ScalarGains(double lambda_, double rho_) : lambda(lambda_), rho(rho_) {
        if (!(lambda > 0.0))
            throw std::invalid_argument("scalar gains: lambda must be positive, got " + std::to_string(lambda_));
        if (!(rho > 0.0))
            throw std::invalid_argument("scalar gains: rho must be positive, got " + std::to_string(rho_));
    }
};

struct ScalarState {
    double x = 0.0;
    double theta = 0.0;
};

struct ScalarDerivative {
    double dx = 0.0;
    double dtheta = 0.0;
};

inline ScalarDerivative scalar_rhs(const ScalarState& s, const ScalarGains& g) {
    return {-s.theta * sign0(s.x), -g.lambda * s.theta + g.rho * std::abs(s.x)};
}

namespace detail {

inline double scalar_frequency(double lambda, double rho) {
    const double radicand = rho - lambda * lambda / 4.0;
    if (!(radicand > 0.0))
        throw std::invalid_argument("condition rho > lambda^2/4 violated: rho=" + std::to_string(rho) +
                                    ", lambda^2/4=" + std::to_string(lambda * lambda / 4.0));
    return std::sqrt(radicand);
}

}  // namespace detail

/// Deadline pi / sqrt(rho - lambda^2/4) on the time |x| needs to reach zero,
/// valid for any initial state. Errors when rho <= lambda^2/4.
inline double bound_scalar(double lambda, double rho) {
    return std::numbers::pi / detail::scalar_frequency(lambda, rho);
}

inline double bound_scalar(const ScalarGains& g) { return bound_scalar(g.lambda, g.rho); }

/// First positive zero of cos(w t) + lambda/(2 w) sin(w t), i.e. the exact
/// time the envelope below reaches zero. Always below pi / w.
inline double first_zero_time(const ScalarGains& g) {
    const double w = detail::scalar_frequency(g.lambda, g.rho);
    // atan2(2w, lambda) = arctan(2w/lambda), and pi/2 in the lambda -> 0 limit.
    return (std::numbers::pi - std::atan2(2.0 * w, g.lambda)) / w;
}

/// Closed form of |x(t)| under the scalar law while x keeps its sign:
/// V = |x| and theta then satisfy the linear pair Vdot = -theta,
/// thetadot = -lambda theta + rho V, with Laplace image
/// V(s) = (s + lambda) / (s^2 + lambda s + rho) V(0).
/// Partial fractions over (s + lambda/2)^2 + w^2 give
///
///   V(t) = V(0) e^{-lambda t / 2} (cos(w t) + lambda/(2 w) sin(w t)),
///
/// with w = sqrt(rho - lambda^2/4); note the lambda/(2 w) sine coefficient,
/// which is what matches V'(0) = -theta(0) = 0 and a high-resolution
/// integration of the pair. The trajectory is clamped to zero from its
/// first zero onward, where the true solution stays.
inline double analytic_abs_x(double t, double x0_abs, const ScalarGains& g) {
    if (t < 0.0) throw std::invalid_argument("analytic_abs_x: negative time");
    if (x0_abs < 0.0) throw std::invalid_argument("analytic_abs_x: |x(0)| must be nonnegative");
    const double w = detail::scalar_frequency(g.lambda, g.rho);
    if (t >= first_zero_time(g)) return 0.0;
    const double v = x0_abs * std::exp(-g.lambda * t / 2.0) *
                     (std::cos(w * t) + g.lambda / (2.0 * w) * std::sin(w * t));
    return v > 0.0 ? v : 0.0;
}

struct ScalarTrajectory {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> theta;
};

/// Fixed-step simulation of the scalar law, recording every step.
inline ScalarTrajectory simulate_scalar(double x0, const ScalarGains& g, double dt, double t_end) {
    IntegratorSettings settings;
    settings.dt = dt;
    settings.t_end = t_end;
    settings.record_every = 1;

    ScalarTrajectory traj;
    traj.times.reserve(static_cast<std::size_t>(settings.steps()) + 1);
    std::vector<double> y{x0, 0.0};
    integrate(
        [&g](double, const std::vector<double>& s, std::vector<double>& dy) {
            const auto d = scalar_rhs({s[0], s[1]}, g);
            dy[0] = d.dx;
            dy[1] = d.dtheta;
        },
        y, settings,
        [&traj](long, double t, const std::vector<double>& s) {
            traj.times.push_back(t);
            traj.x.push_back(s[0]);
            traj.theta.push_back(s[1]);
        });
    return traj;
}

}  // namespace ftc
