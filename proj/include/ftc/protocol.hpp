#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/numeric.hpp"

namespace ftc {

enum class Protocol { FixedTime, Average, Weighted, SlidingMode };

inline const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::FixedTime: return "fixed_time";
        case Protocol::Average: return "average";
        case Protocol::Weighted: return "weighted";
        case Protocol::SlidingMode: return "sliding_mode";
    }
    return "?";
}

/// Tagged choice of consensus protocol with its gains.
///
/// All four variants share the adaptive gain law
///   thetadot_i = -lambda theta_i + rho sum_j a_ij (x_j - x_i)^2
/// and differ in how theta feeds back into the control:
///   FixedTime   u_i = theta_i * inv(sum_j a_ij (x_j - x_i))
///   Average     u_i = sum_j a_ij (theta_i + theta_j) inv(x_j - x_i)
///   Weighted    u_i = sum_j (a_ij / p_i) (theta_i + theta_j) inv(x_j - x_i)
///   SlidingMode Average-form nominal plus a -(eta_i + d) sign0(s_i)
///               reaching term with its own adaptive gain eta.
/// inv is the gamma-regularized inverse below; gamma = 0 selects the exact
/// inverse used in unit tests on hand-built states.
struct ProtocolConfig {
    Protocol variant = Protocol::Average;
    double lambda = 1.0;
    double rho = 1.0;
    double gamma = 0.01;
    std::vector<double> p;     // Weighted only: positive weights summing to 1
    double omega_s = 0.0;      // SlidingMode only: eta decay
    double mu = 0.0;           // SlidingMode only: eta growth
    double d = 0.0;            // SlidingMode only: known disturbance bound
    std::vector<double> xbar;  // SlidingMode only: manifold offsets; empty = all zero

    void validate(int n) const {
        if (!(lambda > 0.0)) throw std::invalid_argument("protocol: lambda must be positive");
        if (!(rho > 0.0)) throw std::invalid_argument("protocol: rho must be positive");
        if (gamma < 0.0) throw std::invalid_argument("protocol: gamma must be nonnegative");
        if (variant == Protocol::Weighted) {
            if (static_cast<int>(p.size()) != n)
                throw std::invalid_argument("protocol: p has length " + std::to_string(p.size()) +
                                            ", expected " + std::to_string(n));
            double sum = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (!(p[i] > 0.0))
                    throw std::invalid_argument("protocol: p[" + std::to_string(i) + "] must be positive");
                sum += p[i];
            }
            if (std::abs(sum - 1.0) >= 1e-12)
                throw std::invalid_argument("protocol: p must sum to 1, got " + std::to_string(sum));
        } else if (!p.empty()) {
            throw std::invalid_argument("protocol: p is only valid for the weighted variant");
        }
        if (variant == Protocol::SlidingMode) {
            if (!(omega_s > 0.0)) throw std::invalid_argument("protocol: omega_s must be positive");
            if (!(mu > 0.0)) throw std::invalid_argument("protocol: mu must be positive");
            if (d < 0.0) throw std::invalid_argument("protocol: d must be nonnegative");
            if (!xbar.empty() && static_cast<int>(xbar.size()) != n)
                throw std::invalid_argument("protocol: xbar has length " + std::to_string(xbar.size()) +
                                            ", expected " + std::to_string(n));
        } else if (!xbar.empty()) {
            throw std::invalid_argument("protocol: xbar is only valid for the sliding_mode variant");
        }
    }

    double max_weight() const {  // K
        double k = 0.0;
        for (double v : p) k = std::max(k, v);
        return k;
    }

    double manifold_offset(int i) const { return xbar.empty() ? 0.0 : xbar[static_cast<std::size_t>(i)]; }

    friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

/// Per-agent state of a protocol run. eta and integral are used by the
/// sliding-mode variant only and stay empty otherwise.
struct SwarmState {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> theta;
    std::vector<double> eta;
    std::vector<double> integral;  // I_i = integral of the nominal control
};

/// z / (z^2 + gamma) for gamma > 0, the exact inverse 1/z for gamma = 0.
/// Odd in z; bounded by 1/(2 sqrt(gamma)) when regularized.
inline double regularized_inverse(double z, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("regularized_inverse: gamma must be nonnegative");
    if (gamma == 0.0) {
        if (z == 0.0) throw SingularityError("regularized_inverse: exact inverse of zero (gamma = 0)");
        return 1.0 / z;
    }
    return z / (z * z + gamma);
}

namespace detail {

inline void check_sizes(const Graph& g, std::span<const double> x, const char* what) {
    if (static_cast<int>(x.size()) != g.size())
        throw std::invalid_argument(std::string(what) + ": state length " + std::to_string(x.size()) +
                                    " does not match graph size " + std::to_string(g.size()));
}

// u_i = theta_i * inv(sum_j a_ij (x_j - x_i)); the inverse acts on the
// aggregate relative state, one term per agent.
inline void eval_fixed_time(const Graph& g, std::span<const double> x, std::span<const double> theta,
                            double gamma, std::span<double> u) {
    for (int i = 0; i < g.size(); ++i) {
        double agg = 0.0;
        for (const auto& [j, w] : g.neighbors(i)) agg += w * (x[j] - x[i]);
        if (theta[i] == 0.0) {
            u[i] = 0.0;  // theta(0) = 0 makes the initial control exactly zero
        } else if (gamma == 0.0 && agg == 0.0) {
            throw SingularityError("fixed-time control singular: aggregate relative state of agent " +
                                   std::to_string(i) + " is zero with theta != 0 and gamma = 0");
        } else {
            u[i] = theta[i] * regularized_inverse(agg, gamma);
        }
    }
}

// u_i = sum_j c_ij (theta_i + theta_j) inv(x_j - x_i) with c_ij = a_ij,
// optionally scaled by 1/p_i. Per-edge inverse.
inline void eval_edge_inverse(const Graph& g, std::span<const double> x, std::span<const double> theta,
                              double gamma, const std::vector<double>& p, std::span<double> u) {
    for (int i = 0; i < g.size(); ++i) {
        double sum = 0.0;
        for (const auto& [j, w] : g.neighbors(i)) {
            const double coeff = w * (theta[i] + theta[j]);
            if (coeff == 0.0) continue;
            const double dx = x[j] - x[i];
            if (gamma == 0.0 && dx == 0.0)
                throw SingularityError("edge control singular: x_" + std::to_string(j) + " == x_" +
                                       std::to_string(i) + " with theta_i + theta_j != 0 and gamma = 0");
            sum += coeff * regularized_inverse(dx, gamma);
        }
        u[i] = p.empty() ? sum : sum / p[static_cast<std::size_t>(i)];
    }
}

inline void eval_theta_rhs(const Graph& g, std::span<const double> x, std::span<const double> theta,
                           double lambda, double rho, std::span<double> out) {
    for (int i = 0; i < g.size(); ++i) {
        double q = 0.0;
        for (const auto& [j, w] : g.neighbors(i)) {
            const double dx = x[j] - x[i];
            q += w * dx * dx;
        }
        out[i] = -lambda * theta[i] + rho * q;
    }
}

}  // namespace detail

inline std::vector<double> control_fixed_time(const Graph& g, const SwarmState& s, const ProtocolConfig& c) {
    detail::check_sizes(g, s.x, "control_fixed_time");
    std::vector<double> u(s.x.size());
    detail::eval_fixed_time(g, s.x, s.theta, c.gamma, u);
    return u;
}

inline std::vector<double> control_average(const Graph& g, const SwarmState& s, const ProtocolConfig& c) {
    detail::check_sizes(g, s.x, "control_average");
    std::vector<double> u(s.x.size());
    detail::eval_edge_inverse(g, s.x, s.theta, c.gamma, {}, u);
    return u;
}

inline std::vector<double> control_weighted(const Graph& g, const SwarmState& s, const ProtocolConfig& c) {
    detail::check_sizes(g, s.x, "control_weighted");
    c.validate(g.size());
    std::vector<double> u(s.x.size());
    detail::eval_edge_inverse(g, s.x, s.theta, c.gamma, c.p, u);
    return u;
}

/// Adaptive gain dynamics, identical across all four protocols:
/// thetadot_i = -lambda theta_i + rho sum_j a_ij (x_j - x_i)^2.
inline std::vector<double> theta_rhs(const Graph& g, const SwarmState& s, const ProtocolConfig& c) {
    detail::check_sizes(g, s.x, "theta_rhs");
    std::vector<double> out(s.x.size());
    detail::eval_theta_rhs(g, s.x, s.theta, c.lambda, c.rho, out);
    return out;
}

/// Sliding surface s_i = x_i - xbar_i - I_i, where I_i is the accumulated
/// nominal control. All-zero xbar recovers the origin-seeking manifold.
inline std::vector<double> sliding_surface(const SwarmState& s, const ProtocolConfig& c) {
    std::vector<double> out(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i)
        out[i] = s.x[i] - c.manifold_offset(static_cast<int>(i)) - s.integral[i];
    return out;
}

struct SlidingControl {
    std::vector<double> u;
    std::vector<double> nominal;  // also drives Idot_i = nominal_i
};

/// u_i = nominal_i - (eta_i + d) sign0(s_i) with the Average-form nominal.
inline SlidingControl control_sliding(const Graph& g, const SwarmState& s, const ProtocolConfig& c) {
    detail::check_sizes(g, s.x, "control_sliding");
    SlidingControl out;
    out.nominal.resize(s.x.size());
    detail::eval_edge_inverse(g, s.x, s.theta, c.gamma, {}, out.nominal);
    out.u.resize(s.x.size());
    const auto surf = sliding_surface(s, c);
    for (std::size_t i = 0; i < s.x.size(); ++i)
        out.u[i] = out.nominal[i] - (s.eta[i] + c.d) * sign0(surf[i]);
    return out;
}

/// Reaching gain dynamics etadot_i = -omega_s eta_i + mu |s_i|.
inline std::vector<double> eta_rhs(const SwarmState& s, const ProtocolConfig& c) {
    std::vector<double> out(s.eta.size());
    const auto surf = sliding_surface(s, c);
    for (std::size_t i = 0; i < s.eta.size(); ++i) out[i] = -c.omega_s * s.eta[i] + c.mu * std::abs(surf[i]);
    return out;
}

/// Result of a sufficiency-condition check. The conditions guarantee the
/// consensus-time bounds but are not necessary: runs with violated
/// conditions proceed with a warning.
struct ConditionCheck {
    bool satisfied = false;
    double rho_threshold = 0.0;  // rho must exceed this
    bool rho_satisfied = false;
    std::optional<double> mu_threshold;  // SlidingMode only: mu must exceed this
    bool mu_satisfied = true;
};

inline ConditionCheck check_condition(Protocol variant, double lambda, double rho, double mu, double omega_s,
                                      int n, double kappa, double max_weight) {
    ConditionCheck c;
    switch (variant) {
        case Protocol::FixedTime:
            c.rho_threshold = lambda * lambda / 16.0;
            break;
        case Protocol::Average:
        case Protocol::SlidingMode:
            c.rho_threshold = static_cast<double>(n) * lambda * lambda / (8.0 * kappa * kappa);
            break;
        case Protocol::Weighted: {
            const double k3n3 = std::pow(max_weight, 3) * std::pow(static_cast<double>(n), 3);
            c.rho_threshold = k3n3 * lambda * lambda / (8.0 * kappa * kappa);
            break;
        }
    }
    c.rho_satisfied = rho > c.rho_threshold;
    if (variant == Protocol::SlidingMode) {
        c.mu_threshold = omega_s * omega_s / 4.0;
        c.mu_satisfied = mu > *c.mu_threshold;
    }
    c.satisfied = c.rho_satisfied && c.mu_satisfied;
    return c;
}

inline ConditionCheck check_condition(const Graph& g, const ProtocolConfig& c) {
    return check_condition(c.variant, c.lambda, c.rho, c.mu, c.omega_s, g.size(), g.min_positive_weight(),
                           c.max_weight());
}

/// Consensus-time bound; for SlidingMode the total is the reaching term
/// plus the post-reaching consensus term, reported separately as well.
struct ConsensusBound {
    double total = 0.0;
    std::optional<double> reaching;
    std::optional<double> consensus;
};

namespace detail {

inline double pi_over_sqrt(double radicand, const std::string& what) {
    if (!(radicand > 0.0))
        throw std::invalid_argument("bound undefined: radicand " + what + " = " + std::to_string(radicand) +
                                    " is not positive");
    return std::numbers::pi / std::sqrt(radicand);
}

}  // namespace detail

/// Reaching-phase bound pi / sqrt(mu - omega_s^2/4) of the sliding variant.
inline double bound_reaching(double mu, double omega_s) {
    return detail::pi_over_sqrt(mu - omega_s * omega_s / 4.0,
                                "mu - omega_s^2/4 (mu=" + std::to_string(mu) +
                                    ", omega_s=" + std::to_string(omega_s) + ")");
}

inline ConsensusBound bound_consensus_time(Protocol variant, double lambda, double rho, double mu,
                                           double omega_s, int n, double kappa, double max_weight) {
    ConsensusBound b;
    const double l2_4 = lambda * lambda / 4.0;
    switch (variant) {
        case Protocol::FixedTime:
            b.total = detail::pi_over_sqrt(4.0 * rho - l2_4, "4*rho - lambda^2/4 (rho=" + std::to_string(rho) +
                                                                 ", lambda=" + std::to_string(lambda) + ")");
            break;
        case Protocol::Average:
            b.total = detail::pi_over_sqrt(2.0 * kappa * kappa * rho / n - l2_4,
                                           "2*kappa^2*rho/n - lambda^2/4 (kappa=" + std::to_string(kappa) +
                                               ", rho=" + std::to_string(rho) + ", n=" + std::to_string(n) +
                                               ", lambda=" + std::to_string(lambda) + ")");
            break;
        case Protocol::Weighted: {
            const double k3n3 = std::pow(max_weight, 3) * std::pow(static_cast<double>(n), 3);
            b.total = detail::pi_over_sqrt(2.0 * kappa * kappa * rho / k3n3 - l2_4,
                                           "2*kappa^2*rho/(K^3*n^3) - lambda^2/4 (kappa=" +
                                               std::to_string(kappa) + ", rho=" + std::to_string(rho) +
                                               ", K=" + std::to_string(max_weight) + ", n=" + std::to_string(n) +
                                               ", lambda=" + std::to_string(lambda) + ")");
            break;
        }
        case Protocol::SlidingMode: {
            b.reaching = bound_reaching(mu, omega_s);
            b.consensus = detail::pi_over_sqrt(2.0 * kappa * kappa * rho / n - l2_4,
                                               "2*kappa^2*rho/n - lambda^2/4 (kappa=" + std::to_string(kappa) +
                                                   ", rho=" + std::to_string(rho) + ", n=" + std::to_string(n) +
                                                   ", lambda=" + std::to_string(lambda) + ")");
            b.total = *b.reaching + *b.consensus;
            break;
        }
    }
    return b;
}

inline ConsensusBound bound_consensus_time(const Graph& g, const ProtocolConfig& c) {
    return bound_consensus_time(c.variant, c.lambda, c.rho, c.mu, c.omega_s, g.size(),
                                g.min_positive_weight(), c.max_weight());
}

}  // namespace ftc
