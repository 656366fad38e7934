#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftc/errors.hpp"

namespace ftc {

enum class Method { Euler, Rk4 };

inline constexpr long kMaxRecordedRows = 100000;

/// Fixed-step integration settings. record_every = 0 selects the smallest
/// decimation that keeps the recorded trajectory at or under
/// kMaxRecordedRows rows.
struct IntegratorSettings {
    Method method = Method::Rk4;
    double dt = 1e-4;
    double t_end = 3.0;
    int record_every = 0;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("integrator: dt must be positive, got " + std::to_string(dt));
        if (!(t_end >= dt))
            throw std::invalid_argument("integrator: t_end must be at least dt (t_end=" + std::to_string(t_end) +
                                        ", dt=" + std::to_string(dt) + ")");
        if (record_every < 0)
            throw std::invalid_argument("integrator: record_every must be nonnegative, got " +
                                        std::to_string(record_every));
    }

    long steps() const { return std::lround(t_end / dt); }

    int stride() const {
        if (record_every > 0) return record_every;
        const long s = steps();
        return static_cast<int>((s + 1 + kMaxRecordedRows - 1) / kMaxRecordedRows);
    }

    friend bool operator==(const IntegratorSettings&, const IntegratorSettings&) = default;
};

namespace detail {

inline void check_finite(const std::vector<double>& y, double t) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i]))
            throw NonFiniteError("integration aborted: non-finite state component " + std::to_string(i) +
                                 " at t=" + std::to_string(t));
    }
}

}  // namespace detail

/// Advances y through steps() fixed steps of settings.dt, calling
/// observe(step, t, y) at step 0 and at every stride()-th step thereafter.
/// The derivative callable must have signature
/// rhs(double t, const std::vector<double>& y, std::vector<double>& dy).
/// Deterministic: identical inputs give bitwise-identical trajectories.
template <class Rhs, class Observer>
void integrate(Rhs&& rhs, std::vector<double>& y, const IntegratorSettings& settings, Observer&& observe) {
    settings.validate();
    const long n_steps = settings.steps();
    const int stride = settings.stride();
    const double dt = settings.dt;
    const std::size_t dim = y.size();

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    observe(0L, 0.0, y);
    for (long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        rhs(t, y, k1);
        if (settings.method == Method::Euler) {
            for (std::size_t i = 0; i < dim; ++i) y[i] += dt * k1[i];
        } else {
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
            rhs(t + 0.5 * dt, tmp, k2);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
            rhs(t + 0.5 * dt, tmp, k3);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + dt * k3[i];
            rhs(t + dt, tmp, k4);
            for (std::size_t i = 0; i < dim; ++i)
                y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        const double t_next = static_cast<double>(k + 1) * dt;
        detail::check_finite(y, t_next);
        if ((k + 1) % stride == 0) observe(k + 1, t_next, y);
    }
}

}  // namespace ftc
