// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion. Exit code is the number
// of failed criteria. An optional argument "--criterion N" restricts the run
// to a single criterion.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ftc/ftc.hpp"
#include "test_support.hpp"

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details.push_back(what);
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::map<std::string, ftc::RunResult>& run_cache() {
    static std::map<std::string, ftc::RunResult> cache;
    return cache;
}

const ftc::RunResult& run_builtin(const std::string& name) {
    auto& cache = run_cache();
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, ftc::run_scenario(ftc::builtin_scenario(name))).first;
    return it->second;
}

// --- criterion 1: bound formulas ------------------------------------------

Outcome criterion_bounds() {
    Outcome o;
    const double fixed = ftc::bound_consensus_time(ftc::Protocol::FixedTime, 2.0, 2.0, 0, 0, 6, 1.0, 0.0).total;
    const double average = ftc::bound_consensus_time(ftc::Protocol::Average, 2.0, 8.0, 0, 0, 6, 1.0, 0.0).total;
    const double reaching = ftc::bound_reaching(10.0, 4.0);
    // references computed independently: pi/sqrt(7), pi/sqrt(5/3), pi/sqrt(6)
    const double refs[3] = {1.1874104117237259, 2.4334672055841673, 1.282549830161864};
    const double got[3] = {fixed, average, reaching};
    const char* names[3] = {"fixed-time", "average", "sliding reaching"};
    for (int i = 0; i < 3; ++i)
        o.check(std::abs(got[i] - refs[i]) <= 5e-4 * refs[i],
                std::string(names[i]) + " bound " + fmt(got[i]) + " != " + fmt(refs[i]) + " to 4 digits");
    o.summary = "bound formulas: fixed-time " + fmt(fixed) + ", average " + fmt(average) + ", reaching " +
                fmt(reaching);
    return o;
}

// --- criterion 2: fixed-time protocol reproduction -------------------------

Outcome criterion_example1() {
    Outcome o;
    const auto& r1 = run_builtin("ex1-case1");
    const auto& r2 = run_builtin("ex1-case2");
    o.check(r1.report.consensus_time.has_value(), "ex1-case1 never reached sustained consensus");
    o.check(r2.report.consensus_time.has_value(), "ex1-case2 never reached sustained consensus");
    if (!o.pass) return o;
    const double t1 = *r1.report.consensus_time;
    const double t2 = *r2.report.consensus_time;
    for (auto [name, t] : {std::pair{"ex1-case1", t1}, {"ex1-case2", t2}})
        o.check(t >= 0.6 && t <= 1.19, std::string(name) + " t*=" + fmt(t) + " outside [0.6, 1.19]");
    o.check(std::abs(t1 - t2) <= 0.05,
            "consensus times differ by " + fmt(std::abs(t1 - t2)) + " > 0.05 between the two cases");
    o.summary = "fixed-time protocol: t* " + fmt(t1) + " and " + fmt(t2) + " (bound 1.19)";
    return o;
}

// --- criterion 3: average protocol reproduction ----------------------------

Outcome criterion_example2() {
    Outcome o;
    const auto& c1 = run_builtin("ex2-case1").report;
    const auto& c2 = run_builtin("ex2-case2").report;
    const auto& lo = run_builtin("ex2-lowrho").report;

    o.check(c1.consensus_time && *c1.consensus_time < 2.43,
            "ex2-case1 t* missing or >= 2.43");
    o.check(c2.consensus_time && *c2.consensus_time < 2.43,
            "ex2-case2 t* missing or >= 2.43");
    if (c1.consensus_value)
        o.check(std::abs(*c1.consensus_value) <= 1e-2,
                "ex2-case1 consensus value " + fmt(*c1.consensus_value) + " not 0 +- 1e-2");
    if (c2.consensus_value)
        o.check(std::abs(*c2.consensus_value + 5.0) <= 1e-2,
                "ex2-case2 consensus value " + fmt(*c2.consensus_value) + " not -5 +- 1e-2");
    o.check(lo.consensus_time.has_value(), "ex2-lowrho never reached sustained consensus");
    o.check(!lo.condition.satisfied, "ex2-lowrho should flag condition_satisfied=false");
    o.summary = "average protocol: values " + (c1.consensus_value ? fmt(*c1.consensus_value) : "none") + " and " +
                (c2.consensus_value ? fmt(*c2.consensus_value) : "none") + ", low-rho t* " +
                (lo.consensus_time ? fmt(*lo.consensus_time) : "none");
    return o;
}

// --- criterion 4: weighted protocol ----------------------------------------

Outcome criterion_example3() {
    Outcome o;
    const auto sc = ftc::builtin_scenario("ex3");
    const auto& r = run_builtin("ex3");
    double target = 0.0;
    for (std::size_t i = 0; i < sc.x0.size(); ++i) target += sc.protocol.p[i] * sc.x0[i];
    o.check(r.report.consensus_time.has_value(), "ex3 never reached sustained consensus");
    if (r.report.consensus_value)
        o.check(std::abs(*r.report.consensus_value - target) <= 1e-2,
                "ex3 consensus value " + fmt(*r.report.consensus_value) + " != weighted mean " + fmt(target));
    o.check(r.report.conservation_error < 1e-3,
            "ex3 weighted conservation drift " + fmt(r.report.conservation_error) + " >= 1e-3");
    o.summary = "weighted protocol: value " + (r.report.consensus_value ? fmt(*r.report.consensus_value) : "none") +
                " (conserved target " + fmt(target) + "), drift " + fmt(r.report.conservation_error);
    return o;
}

// --- criterion 5: sliding-mode protocol under disturbance -------------------

Outcome criterion_example4() {
    Outcome o;
    const auto& r = run_builtin("ex4").report;
    const auto& shifted = run_builtin("ex4-shifted").report;

    o.check(r.reaching_time && *r.reaching_time <= 1.28,
            "ex4 reaching time " + (r.reaching_time ? fmt(*r.reaching_time) : "none") + " not <= 1.28");
    o.check(r.consensus_time && *r.consensus_time <= 2.47,
            "ex4 consensus time " + (r.consensus_time ? fmt(*r.consensus_time) : "none") + " not <= 2.47");
    if (r.consensus_value)
        o.check(std::abs(*r.consensus_value) <= 2e-2,
                "ex4 consensus value " + fmt(*r.consensus_value) + " not 0 +- 2e-2");
    o.check(r.max_control >= 30.0 && r.max_control <= 55.0,
            "ex4 max control " + fmt(r.max_control) + " outside [30, 55]");
    o.check(shifted.consensus_value && std::abs(*shifted.consensus_value + 1.0) <= 2e-2,
            "ex4-shifted consensus value " +
                (shifted.consensus_value ? fmt(*shifted.consensus_value) : "none") + " not -1 +- 2e-2");
    o.summary = "sliding mode: reaching " + (r.reaching_time ? fmt(*r.reaching_time) : "none") + ", t* " +
                (r.consensus_time ? fmt(*r.consensus_time) : "none") + ", max|u| " + fmt(r.max_control) +
                ", shifted value " + (shifted.consensus_value ? fmt(*shifted.consensus_value) : "none");
    return o;
}

// --- criterion 6: scalar oracle agreement and fixed-time property -----------

Outcome criterion_scalar_oracle() {
    Outcome o;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> lambda_dist(0.2, 3.0);
    std::uniform_real_distribution<double> rho_excess(0.3, 12.0);
    const double magnitudes[4] = {1e-2, 1.0, 1e3, 1e6};
    const double dt = 1e-4;
    double worst_gap = 0.0;

    for (int trial = 0; trial < 20; ++trial) {
        const double lambda = lambda_dist(rng);
        const double rho = lambda * lambda / 4.0 + rho_excess(rng);
        const ftc::ScalarGains g(lambda, rho);
        const double x0 = magnitudes[trial % 4] * (trial % 2 == 0 ? 1.0 : -1.0);
        const double bound = ftc::bound_scalar(g);
        const auto traj = ftc::simulate_scalar(x0, g, dt, bound + 0.5);

        const double tol = std::max(1e-6, 1e3 * dt * dt);
        const double t_zero = ftc::first_zero_time(g);
        for (std::size_t k = 0; k < traj.x.size(); ++k) {
            if (traj.times[k] >= t_zero) break;
            const double gap = std::abs(std::abs(traj.x[k]) - ftc::analytic_abs_x(traj.times[k], std::abs(x0), g));
            worst_gap = std::max(worst_gap, gap);
            if (gap > tol) {
                o.check(false, "oracle mismatch " + fmt(gap) + " at t=" + fmt(traj.times[k]) + " (lambda=" +
                                   fmt(lambda) + ", rho=" + fmt(rho) + ", x0=" + fmt(x0) + ")");
                break;
            }
        }

        // first zero of the simulated state: the band max(1e-3, |x0| dt)
        // absorbs the theta*dt-scale parking after the crossing
        const double band = std::max(1e-3, std::abs(x0) * dt);
        double first = -1.0;
        for (std::size_t k = 0; k < traj.x.size(); ++k) {
            if (std::abs(traj.x[k]) < band) {
                first = traj.times[k];
                break;
            }
        }
        o.check(first >= 0.0 && first <= bound,
                "first zero at " + fmt(first) + " exceeds bound " + fmt(bound) + " (lambda=" + fmt(lambda) +
                    ", rho=" + fmt(rho) + ", x0=" + fmt(x0) + ")");
    }
    o.summary = "scalar oracle: 20 gain pairs, worst envelope gap " + fmt(worst_gap) +
                ", first zero within the bound at every magnitude";
    return o;
}

// --- criterion 7: property suites -------------------------------------------

Outcome criterion_properties() {
    Outcome o;
    std::mt19937 rng(77);

    {  // sum-of-squares inequality on 1000 random vectors
        std::uniform_real_distribution<double> dist(-50.0, 50.0);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 10);
            double sum = 0.0, sq = 0.0;
            for (int i = 0; i < n; ++i) {
                const double v = dist(rng);
                sum += v;
                sq += v * v;
            }
            if (!(sum * sum <= n * sq * (1.0 + 1e-12))) {
                o.check(false, "sum-of-squares inequality violated");
                break;
            }
        }
    }

    {  // antisymmetry conservation on 100 random states
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 3 + static_cast<int>(rng() % 4);
            const ftc::Graph g = ftc_test::random_connected_graph(rng, n);
            ftc::SwarmState s;
            s.x = ftc_test::random_state(rng, n);
            s.theta = ftc_test::random_state(rng, n, 2.0);
            for (auto& th : s.theta) th = std::abs(th);

            ftc::ProtocolConfig avg;
            avg.variant = ftc::Protocol::Average;
            avg.gamma = (trial % 2 == 0) ? 0.01 : 0.0;
            const auto u = ftc::control_average(g, s, avg);
            double sum = 0.0, peak = 0.0;
            for (double v : u) {
                sum += v;
                peak = std::max(peak, std::abs(v));
            }
            if (!(std::abs(sum) < 1e-10 * (1.0 + peak))) {
                o.check(false, "average control sum " + fmt(sum) + " breaks antisymmetry");
                break;
            }

            ftc::ProtocolConfig wc = avg;
            wc.variant = ftc::Protocol::Weighted;
            wc.p.assign(static_cast<std::size_t>(n), 1.0 / n);
            const auto uw = ftc::control_weighted(g, s, wc);
            double wsum = 0.0;
            peak = 0.0;
            for (std::size_t i = 0; i < uw.size(); ++i) {
                wsum += wc.p[i] * uw[i];
                peak = std::max(peak, std::abs(uw[i]));
            }
            if (!(std::abs(wsum) < 1e-10 * (1.0 + peak))) {
                o.check(false, "weighted control sum " + fmt(wsum) + " breaks antisymmetry");
                break;
            }
        }
    }

    {  // gain nonnegativity along every built-in run
        for (const auto& sc : ftc::builtin_scenarios()) {
            const auto& traj = run_builtin(sc.name).trajectory;
            for (const auto& st : traj.states) {
                for (double th : st.theta)
                    if (th < -1e-9) o.check(false, sc.name + ": theta dropped to " + fmt(th));
                for (double e : st.eta)
                    if (e < -1e-9) o.check(false, sc.name + ": eta dropped to " + fmt(e));
            }
        }
    }

    {  // aggregate identity sum thetadot = -lambda sum theta + 4 rho V
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 5);
            const ftc::Graph g = ftc_test::random_connected_graph(rng, n);
            ftc::SwarmState s;
            s.x = ftc_test::random_state(rng, n);
            s.theta = ftc_test::random_state(rng, n, 2.0);
            ftc::ProtocolConfig c;
            c.variant = ftc::Protocol::Average;
            c.lambda = 0.5 + (trial % 4) * 0.75;
            c.rho = 0.5 + (trial % 3) * 1.5;
            const auto d = ftc::theta_rhs(g, s, c);
            double lhs = 0.0, theta_sum = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                lhs += d[i];
                theta_sum += s.theta[i];
            }
            const double rhs = -c.lambda * theta_sum + 4.0 * c.rho * ftc::disagreement(g, s.x);
            if (!(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)))) {
                o.check(false, "theta aggregate identity off by " + fmt(std::abs(lhs - rhs)));
                break;
            }
        }
    }

    {  // weighted-to-average reduction at uniform weights
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 5);
            const ftc::Graph g = ftc_test::random_connected_graph(rng, n);
            ftc::SwarmState s;
            s.x = ftc_test::random_state(rng, n);
            s.theta = ftc_test::random_state(rng, n, 2.0);
            for (auto& th : s.theta) th = std::abs(th);
            ftc::ProtocolConfig avg;
            avg.variant = ftc::Protocol::Average;
            ftc::ProtocolConfig wc = avg;
            wc.variant = ftc::Protocol::Weighted;
            wc.p.assign(static_cast<std::size_t>(n), 1.0 / n);
            const auto ua = ftc::control_average(g, s, avg);
            const auto uw = ftc::control_weighted(g, s, wc);
            for (std::size_t i = 0; i < ua.size(); ++i) {
                const double expected = n * ua[i];
                if (!(std::abs(uw[i] - expected) <= 1e-12 * std::max(1.0, std::abs(expected)))) {
                    o.check(false, "uniform-weight reduction off at agent " + std::to_string(i));
                    break;
                }
            }
        }
    }

    o.summary = "property suites: sum-of-squares, antisymmetry, gain nonnegativity, "
                "theta aggregate identity, uniform-weight reduction";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }

    struct Entry {
        int number;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, criterion_bounds},   {2, criterion_example1},      {3, criterion_example2},
        {4, criterion_example3}, {5, criterion_example4},      {6, criterion_scalar_oracle},
        {7, criterion_properties},
    };

    int failures = 0;
    for (const auto& e : entries) {
        if (only != 0 && e.number != only) continue;
        const Outcome o = e.run();
        std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", e.number, o.summary.c_str());
        for (const auto& d : o.details) std::printf("       - %s\n", d.c_str());
        if (!o.pass) ++failures;
    }
    if (failures != 0) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
