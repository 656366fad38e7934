#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftc {

enum class Waveform { Zero, Sine, Cosine };

/// One additive term of a per-agent disturbance: amplitude * sin/cos(frequency * t + phase).
struct DisturbanceTerm {
    Waveform waveform = Waveform::Zero;
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;

    double evaluate(double t) const {
        switch (waveform) {
            case Waveform::Sine: return amplitude * std::sin(frequency * t + phase);
            case Waveform::Cosine: return amplitude * std::cos(frequency * t + phase);
            case Waveform::Zero: return 0.0;
        }
        return 0.0;
    }

    friend bool operator==(const DisturbanceTerm&, const DisturbanceTerm&) = default;
};

/// Bounded per-agent disturbance signal: a list of sinusoidal terms per
/// agent. A default-constructed spec is the zero disturbance for any agent
/// count.
class DisturbanceSpec {
  public:
    DisturbanceSpec() = default;

    explicit DisturbanceSpec(std::vector<std::vector<DisturbanceTerm>> terms) : terms_(std::move(terms)) {}

    int agents() const { return static_cast<int>(terms_.size()); }

    bool is_zero() const { return implied_bound() == 0.0; }

    /// Delta_i(t) for all n agents. The spec must cover exactly n agents,
    /// except the zero spec which matches any n.
    std::vector<double> evaluate(double t, int n) const {
        if (!terms_.empty() && agents() != n)
            throw std::invalid_argument("disturbance: spec covers " + std::to_string(agents()) +
                                        " agents, expected " + std::to_string(n));
        std::vector<double> out(static_cast<std::size_t>(n), 0.0);
        for (std::size_t i = 0; i < terms_.size(); ++i)
            for (const auto& term : terms_[i]) out[i] += term.evaluate(t);
        return out;
    }

    /// Upper bound max_i sum_k |amplitude_ik| implied by the triangle
    /// inequality; tight for single-term agents.
    double implied_bound() const {
        double bound = 0.0;
        for (const auto& agent_terms : terms_) {
            double sum = 0.0;
            for (const auto& term : agent_terms)
                if (term.waveform != Waveform::Zero) sum += std::abs(term.amplitude);
            bound = std::max(bound, sum);
        }
        return bound;
    }

    const std::vector<std::vector<DisturbanceTerm>>& terms() const { return terms_; }

    friend bool operator==(const DisturbanceSpec&, const DisturbanceSpec&) = default;

  private:
    std::vector<std::vector<DisturbanceTerm>> terms_;
};

}  // namespace ftc
