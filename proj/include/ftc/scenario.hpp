#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftc/disturbance.hpp"
#include "ftc/graph.hpp"
#include "ftc/integrator.hpp"
#include "ftc/metrics.hpp"
#include "ftc/protocol.hpp"
#include "ftc/simulation.hpp"

namespace ftc {

/// A complete, serializable experiment definition: who talks to whom, which
/// protocol with which gains, where the agents start, what perturbs them,
/// and how to integrate and judge the run.
struct Scenario {
    std::string name = "scenario";
    Graph graph;
    ProtocolConfig protocol;
    std::vector<double> x0;
    DisturbanceSpec disturbance;
    IntegratorSettings integrator;
    double epsilon = 1e-2;

    void validate() const {
        if (graph.size() == 0) throw std::invalid_argument("scenario: graph is empty");
        protocol.validate(graph.size());
        if (static_cast<int>(x0.size()) != graph.size())
            throw std::invalid_argument("scenario: x0 has length " + std::to_string(x0.size()) +
                                        ", expected " + std::to_string(graph.size()));
        if (!disturbance.terms().empty() && disturbance.agents() != graph.size())
            throw std::invalid_argument("scenario: disturbance covers " + std::to_string(disturbance.agents()) +
                                        " agents, expected " + std::to_string(graph.size()));
        integrator.validate();
        if (!(epsilon > 0.0)) throw std::invalid_argument("scenario: epsilon must be positive");
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------
// JSON parsing. One JSON document per scenario; unknown keys are rejected and
// every error names the offending path.
// ---------------------------------------------------------------------------

namespace detail {

using nlohmann::json;

inline void expect_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument(path + ": unknown key \"" + it.key() + "\"");
    }
}

inline double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw std::invalid_argument(path + ": expected a number");
    return j.get<double>();
}

inline std::vector<double> get_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw std::invalid_argument(path + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline Graph parse_graph(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("graph: expected an object");
    expect_keys(j, "graph", {"n", "edges", "matrix"});
    const bool has_edges = j.contains("edges");
    const bool has_matrix = j.contains("matrix");
    if (has_edges == has_matrix)
        throw std::invalid_argument("graph: provide exactly one of \"edges\" (with \"n\") or \"matrix\"");
    if (has_matrix) {
        if (j.contains("n")) throw std::invalid_argument("graph: \"n\" is implied by \"matrix\"");
        std::vector<std::vector<double>> m;
        const auto& jm = j.at("matrix");
        if (!jm.is_array()) throw std::invalid_argument("graph.matrix: expected an array of rows");
        for (std::size_t i = 0; i < jm.size(); ++i)
            m.push_back(get_number_array(jm[i], "graph.matrix[" + std::to_string(i) + "]"));
        return Graph::from_matrix(m);
    }
    if (!j.contains("n")) throw std::invalid_argument("graph: \"edges\" requires \"n\"");
    if (!j.at("n").is_number_integer()) throw std::invalid_argument("graph.n: expected an integer");
    const int n = j.at("n").get<int>();
    std::vector<Graph::Edge> edges;
    const auto& je = j.at("edges");
    if (!je.is_array()) throw std::invalid_argument("graph.edges: expected an array of [i, j, weight]");
    for (std::size_t k = 0; k < je.size(); ++k) {
        const std::string path = "graph.edges[" + std::to_string(k) + "]";
        const auto& e = je[k];
        if (!e.is_array() || (e.size() != 2 && e.size() != 3))
            throw std::invalid_argument(path + ": expected [i, j] or [i, j, weight]");
        if (!e[0].is_number_integer() || !e[1].is_number_integer())
            throw std::invalid_argument(path + ": endpoints must be integers");
        Graph::Edge edge;
        edge.i = e[0].get<int>();
        edge.j = e[1].get<int>();
        edge.weight = e.size() == 3 ? get_number(e[2], path + "[2]") : 1.0;
        edges.push_back(edge);
    }
    return Graph::from_edges(n, edges);
}

inline Protocol parse_variant(const json& j) {
    if (!j.is_string()) throw std::invalid_argument("protocol.variant: expected a string");
    const std::string s = j.get<std::string>();
    if (s == "fixed_time") return Protocol::FixedTime;
    if (s == "average") return Protocol::Average;
    if (s == "weighted") return Protocol::Weighted;
    if (s == "sliding_mode") return Protocol::SlidingMode;
    throw std::invalid_argument("protocol.variant: unknown variant \"" + s +
                                "\" (expected fixed_time, average, weighted or sliding_mode)");
}

inline ProtocolConfig parse_protocol(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("protocol: expected an object");
    expect_keys(j, "protocol", {"variant", "lambda", "rho", "gamma", "p", "omega_s", "mu", "d", "xbar"});
    ProtocolConfig c;
    if (!j.contains("variant")) throw std::invalid_argument("protocol.variant: required");
    c.variant = parse_variant(j.at("variant"));
    if (!j.contains("lambda")) throw std::invalid_argument("protocol.lambda: required");
    if (!j.contains("rho")) throw std::invalid_argument("protocol.rho: required");
    c.lambda = get_number(j.at("lambda"), "protocol.lambda");
    c.rho = get_number(j.at("rho"), "protocol.rho");
    if (j.contains("gamma")) c.gamma = get_number(j.at("gamma"), "protocol.gamma");
    if (j.contains("p")) c.p = get_number_array(j.at("p"), "protocol.p");
    if (j.contains("omega_s")) c.omega_s = get_number(j.at("omega_s"), "protocol.omega_s");
    if (j.contains("mu")) c.mu = get_number(j.at("mu"), "protocol.mu");
    if (j.contains("d")) c.d = get_number(j.at("d"), "protocol.d");
    if (j.contains("xbar")) c.xbar = get_number_array(j.at("xbar"), "protocol.xbar");
    return c;
}

inline Waveform parse_waveform(const json& j, const std::string& path) {
    if (!j.is_string()) throw std::invalid_argument(path + ": expected a string");
    const std::string s = j.get<std::string>();
    if (s == "sine") return Waveform::Sine;
    if (s == "cosine") return Waveform::Cosine;
    if (s == "zero") return Waveform::Zero;
    throw std::invalid_argument(path + ": unknown waveform \"" + s + "\" (expected sine, cosine or zero)");
}

inline DisturbanceSpec parse_disturbance(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("disturbance: expected an array of per-agent term lists");
    std::vector<std::vector<DisturbanceTerm>> terms;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string agent_path = "disturbance[" + std::to_string(i) + "]";
        if (!j[i].is_array()) throw std::invalid_argument(agent_path + ": expected an array of terms");
        std::vector<DisturbanceTerm> agent;
        for (std::size_t k = 0; k < j[i].size(); ++k) {
            const std::string path = agent_path + "[" + std::to_string(k) + "]";
            const auto& jt = j[i][k];
            if (!jt.is_object()) throw std::invalid_argument(path + ": expected an object");
            expect_keys(jt, path, {"waveform", "amplitude", "frequency", "phase"});
            DisturbanceTerm term;
            if (!jt.contains("waveform")) throw std::invalid_argument(path + ".waveform: required");
            term.waveform = parse_waveform(jt.at("waveform"), path + ".waveform");
            if (jt.contains("amplitude")) term.amplitude = get_number(jt.at("amplitude"), path + ".amplitude");
            if (jt.contains("frequency")) term.frequency = get_number(jt.at("frequency"), path + ".frequency");
            if (jt.contains("phase")) term.phase = get_number(jt.at("phase"), path + ".phase");
            agent.push_back(term);
        }
        terms.push_back(std::move(agent));
    }
    return DisturbanceSpec(std::move(terms));
}

inline IntegratorSettings parse_integrator(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("integrator: expected an object");
    expect_keys(j, "integrator", {"method", "dt", "t_end", "record_every"});
    IntegratorSettings s;
    if (j.contains("method")) {
        if (!j.at("method").is_string()) throw std::invalid_argument("integrator.method: expected a string");
        const std::string m = j.at("method").get<std::string>();
        if (m == "euler")
            s.method = Method::Euler;
        else if (m == "rk4")
            s.method = Method::Rk4;
        else
            throw std::invalid_argument("integrator.method: unknown method \"" + m + "\" (expected euler or rk4)");
    }
    if (j.contains("dt")) s.dt = get_number(j.at("dt"), "integrator.dt");
    if (j.contains("t_end")) s.t_end = get_number(j.at("t_end"), "integrator.t_end");
    if (j.contains("record_every")) {
        if (!j.at("record_every").is_number_integer())
            throw std::invalid_argument("integrator.record_every: expected an integer");
        s.record_every = j.at("record_every").get<int>();
    }
    return s;
}

}  // namespace detail

inline constexpr int kSchemaVersion = 1;

/// Parses and validates one scenario document. Missing optional blocks get
/// the documented defaults (gamma = 0.01, rk4 at dt = 1e-4 to t_end = 3,
/// epsilon = 1e-2, zero disturbance).
inline Scenario parse_scenario(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("scenario: expected a JSON object");
    detail::expect_keys(j, "scenario",
                        {"schema_version", "name", "graph", "protocol", "x0", "disturbance", "integrator",
                         "epsilon"});
    if (j.contains("schema_version")) {
        if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion)
            throw std::invalid_argument("schema_version: expected " + std::to_string(kSchemaVersion));
    }
    Scenario sc;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw std::invalid_argument("name: expected a string");
        sc.name = j.at("name").get<std::string>();
    }
    if (!j.contains("graph")) throw std::invalid_argument("graph: required");
    sc.graph = detail::parse_graph(j.at("graph"));
    if (!j.contains("protocol")) throw std::invalid_argument("protocol: required");
    sc.protocol = detail::parse_protocol(j.at("protocol"));
    if (!j.contains("x0")) throw std::invalid_argument("x0: required");
    sc.x0 = detail::get_number_array(j.at("x0"), "x0");
    if (j.contains("disturbance")) sc.disturbance = detail::parse_disturbance(j.at("disturbance"));
    if (j.contains("integrator")) sc.integrator = detail::parse_integrator(j.at("integrator"));
    if (j.contains("epsilon")) sc.epsilon = detail::get_number(j.at("epsilon"), "epsilon");
    sc.validate();
    return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

/// Loads a scenario file; a missing "name" defaults to the file stem.
inline Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": invalid JSON: " + e.what());
    }
    if (j.is_object() && !j.contains("name")) j["name"] = path.stem().string();
    return parse_scenario(j);
}

inline nlohmann::json to_json(const Scenario& sc) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = sc.name;
    nlohmann::json edges = nlohmann::json::array();
    for (int i = 0; i < sc.graph.size(); ++i)
        for (const auto& [k, w] : sc.graph.neighbors(i))
            if (k > i) edges.push_back({i, k, w});
    j["graph"] = {{"n", sc.graph.size()}, {"edges", edges}};
    nlohmann::json p = {{"variant", protocol_name(sc.protocol.variant)},
                        {"lambda", sc.protocol.lambda},
                        {"rho", sc.protocol.rho},
                        {"gamma", sc.protocol.gamma}};
    if (sc.protocol.variant == Protocol::Weighted) p["p"] = sc.protocol.p;
    if (sc.protocol.variant == Protocol::SlidingMode) {
        p["omega_s"] = sc.protocol.omega_s;
        p["mu"] = sc.protocol.mu;
        p["d"] = sc.protocol.d;
        if (!sc.protocol.xbar.empty()) p["xbar"] = sc.protocol.xbar;
    }
    j["protocol"] = p;
    j["x0"] = sc.x0;
    if (!sc.disturbance.terms().empty()) {
        nlohmann::json dist = nlohmann::json::array();
        for (const auto& agent : sc.disturbance.terms()) {
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& t : agent) {
                const char* wf = t.waveform == Waveform::Sine     ? "sine"
                                 : t.waveform == Waveform::Cosine ? "cosine"
                                                                  : "zero";
                terms.push_back({{"waveform", wf},
                                 {"amplitude", t.amplitude},
                                 {"frequency", t.frequency},
                                 {"phase", t.phase}});
            }
            dist.push_back(terms);
        }
        j["disturbance"] = dist;
    }
    j["integrator"] = {{"method", sc.integrator.method == Method::Euler ? "euler" : "rk4"},
                       {"dt", sc.integrator.dt},
                       {"t_end", sc.integrator.t_end},
                       {"record_every", sc.integrator.record_every}};
    j["epsilon"] = sc.epsilon;
    return j;
}

// ---------------------------------------------------------------------------
// Built-in scenarios: the six-agent experiments on the shared unit-weight
// interaction graph with edges 1-2, 1-5, 1-6, 2-3, 2-5, 3-4 (1-indexed).
// ---------------------------------------------------------------------------

inline Graph six_agent_graph() {
    return Graph::from_edges(6, {{0, 1, 1.0}, {0, 4, 1.0}, {0, 5, 1.0}, {1, 2, 1.0}, {1, 4, 1.0}, {2, 3, 1.0}});
}

inline std::vector<Scenario> builtin_scenarios() {
    const Graph g = six_agent_graph();
    const std::vector<double> x0_case1{-5.0, 2.0, 4.0, -2.0, -4.0, 5.0};
    const std::vector<double> x0_case2{10.0, -20.0, -3.0, 9.0, 4.0, -30.0};

    // The gamma-regularized inverse makes the near-consensus dynamics stiff
    // (effective gain theta/gamma); dt = 1e-5 keeps rk4 inside its stability
    // region for the largest initial spreads used here.
    IntegratorSettings fine;
    fine.dt = 1e-5;
    fine.t_end = 3.0;

    IntegratorSettings sliding_settings;
    sliding_settings.dt = 1e-4;
    sliding_settings.t_end = 4.0;

    std::vector<Scenario> out;

    auto add = [&out](Scenario sc) { out.push_back(std::move(sc)); };

    {
        ProtocolConfig c;
        c.variant = Protocol::FixedTime;
        c.lambda = 2.0;
        c.rho = 2.0;
        add({"ex1-case1", g, c, x0_case1, {}, fine, 1e-2});
        add({"ex1-case2", g, c, x0_case2, {}, fine, 1e-2});
    }
    {
        ProtocolConfig c;
        c.variant = Protocol::Average;
        c.lambda = 2.0;
        c.rho = 8.0;
        add({"ex2-case1", g, c, x0_case1, {}, fine, 1e-2});
        add({"ex2-case2", g, c, x0_case2, {}, fine, 1e-2});
        c.rho = 2.0;  // deliberately below the sufficiency threshold
        add({"ex2-lowrho", g, c, x0_case1, {}, fine, 1e-2});
    }
    {
        ProtocolConfig c;
        c.variant = Protocol::Weighted;
        c.lambda = 2.0;
        c.rho = 1.0;  // deliberately below the sufficiency threshold
        c.p = {1.0 / 12, 1.0 / 12, 1.0 / 6, 1.0 / 6, 1.0 / 4, 1.0 / 4};
        add({"ex3", g, c, {12.0, -12.0, 6.0, 6.0, 4.0, 4.0}, {}, fine, 1e-2});
    }
    {
        ProtocolConfig c;
        c.variant = Protocol::SlidingMode;
        c.lambda = 2.0;
        c.rho = 0.4;
        c.omega_s = 4.0;
        c.mu = 10.0;
        c.d = 1.0;
        const std::vector<double> x0{1.0, -2.0, 3.0, -4.0, 5.0, -6.0};
        std::vector<std::vector<DisturbanceTerm>> terms;
        const double amps[6] = {1.0, 0.8, 0.5, 1.0, 0.8, 0.5};
        for (int i = 0; i < 6; ++i) {
            const Waveform wf = i < 3 ? Waveform::Sine : Waveform::Cosine;
            terms.push_back({DisturbanceTerm{wf, amps[i], 10.0, 0.0}});
        }
        const DisturbanceSpec dist(terms);
        add({"ex4", g, c, x0, dist, sliding_settings, 1e-2});
        c.xbar = {-2.0, 0.0, -2.0, -2.0, -2.0, 2.0};
        add({"ex4-shifted", g, c, x0, dist, sliding_settings, 1e-2});
    }
    return out;
}

inline Scenario builtin_scenario(const std::string& name) {
    for (auto& sc : builtin_scenarios())
        if (sc.name == name) return sc;
    std::string names;
    for (const auto& sc : builtin_scenarios()) names += (names.empty() ? "" : ", ") + sc.name;
    throw std::invalid_argument("unknown built-in scenario \"" + name + "\" (available: " + names + ")");
}

// ---------------------------------------------------------------------------
// Running and reporting
// ---------------------------------------------------------------------------

struct RunResult {
    Trajectory trajectory;
    ConsensusReport report;
    std::vector<std::string> warnings;
};

inline RunResult run_scenario(const Scenario& sc) {
    sc.validate();
    RunResult r;
    if (!sc.graph.is_connected())
        r.warnings.push_back("graph is not connected; consensus is not guaranteed");
    if (!sc.disturbance.is_zero() && sc.protocol.variant != Protocol::SlidingMode)
        r.warnings.push_back("nonzero disturbance with a non-sliding protocol; no rejection term is active");

    r.trajectory = simulate_swarm(sc.graph, sc.protocol, sc.disturbance, sc.x0, sc.integrator);

    ConsensusReport& rep = r.report;
    rep.scenario = sc.name;
    if (const auto det = consensus_time(r.trajectory, sc.epsilon)) {
        rep.consensus_time = det->time;
        rep.consensus_value = det->value;
    }
    if (sc.graph.has_edges()) {
        rep.condition = check_condition(sc.graph, sc.protocol);
        try {
            rep.bound = bound_consensus_time(sc.graph, sc.protocol).total;
        } catch (const std::invalid_argument& e) {
            r.warnings.push_back(std::string("consensus-time bound unavailable: ") + e.what());
        }
    } else {
        r.warnings.push_back("graph has no edges; condition and bound are unavailable");
    }
    if (rep.consensus_time && rep.bound) rep.within_bound = *rep.consensus_time <= *rep.bound;
    if (!rep.condition.satisfied)
        r.warnings.push_back("sufficiency condition not satisfied (the bound is not guaranteed; "
                             "convergence may still occur)");
    rep.max_control = max_control(r.trajectory);
    rep.max_spread_final = r.trajectory.spread.empty() ? 0.0 : r.trajectory.spread.back();
    if (sc.protocol.variant == Protocol::SlidingMode) {
        rep.reaching_time = reaching_time(r.trajectory, sc.epsilon);
        try {
            rep.reaching_bound = bound_reaching(sc.protocol.mu, sc.protocol.omega_s);
        } catch (const std::invalid_argument& e) {
            r.warnings.push_back(std::string("reaching bound unavailable: ") + e.what());
        }
        if (r.trajectory.max_disturbance > sc.protocol.d)
            r.warnings.push_back("observed disturbance magnitude " + std::to_string(r.trajectory.max_disturbance) +
                                 " exceeds the configured bound d=" + std::to_string(sc.protocol.d));
    }
    rep.conservation_error = conservation_error(
        r.trajectory, sc.protocol.variant == Protocol::Weighted ? std::span<const double>(sc.protocol.p)
                                                                : std::span<const double>());
    return r;
}

// ---------------------------------------------------------------------------
// CSV and report emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace detail

/// Writes the trajectory as CSV: one header row, then one row per recorded
/// sample with columns t, x1..xn, u1..un, theta1..thetan, V, spread and for
/// sliding runs additionally s1..sn, eta1..etan. Full decimal precision;
/// byte-identical across reruns of the same scenario.
inline void emit_csv(const Trajectory& traj, std::ostream& out) {
    const int n = traj.agent_count;
    out << 't';
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    for (int i = 1; i <= n; ++i) out << ",u" << i;
    for (int i = 1; i <= n; ++i) out << ",theta" << i;
    out << ",V,spread";
    if (traj.sliding) {
        for (int i = 1; i <= n; ++i) out << ",s" << i;
        for (int i = 1; i <= n; ++i) out << ",eta" << i;
    }
    out << '\n';
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        out << detail::format_full(traj.times[k]);
        for (double v : traj.states[k].x) out << ',' << detail::format_full(v);
        for (double v : traj.controls[k]) out << ',' << detail::format_full(v);
        for (double v : traj.states[k].theta) out << ',' << detail::format_full(v);
        out << ',' << detail::format_full(traj.disagreement[k]) << ',' << detail::format_full(traj.spread[k]);
        if (traj.sliding) {
            for (double v : traj.surfaces[k]) out << ',' << detail::format_full(v);
            for (double v : traj.states[k].eta) out << ',' << detail::format_full(v);
        }
        out << '\n';
    }
}

namespace detail {

template <class Emit>
void write_atomically(const std::filesystem::path& path, Emit&& emit) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        emit(out);
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline void write_csv_file(const Trajectory& traj, const std::filesystem::path& path) {
    detail::write_atomically(path, [&](std::ostream& out) { emit_csv(traj, out); });
}

/// key=value report block; optional quantities print as "none".
inline void emit_report(const ConsensusReport& rep, std::ostream& out) {
    auto opt = [](const std::optional<double>& v) { return v ? detail::format_short(*v) : std::string("none"); };
    out << "scenario=" << rep.scenario << '\n';
    out << "consensus_time=" << opt(rep.consensus_time) << '\n';
    out << "consensus_value=" << opt(rep.consensus_value) << '\n';
    out << "bound=" << opt(rep.bound) << '\n';
    out << "within_bound=" << (rep.within_bound ? (*rep.within_bound ? "true" : "false") : "none") << '\n';
    out << "condition_satisfied=" << (rep.condition.satisfied ? "true" : "false") << '\n';
    out << "max_control=" << detail::format_short(rep.max_control) << '\n';
    if (rep.reaching_time || rep.reaching_bound) {
        out << "reaching_time=" << opt(rep.reaching_time) << '\n';
        out << "reaching_bound=" << opt(rep.reaching_bound) << '\n';
    }
    out << "conservation_error=" << detail::format_short(rep.conservation_error) << '\n';
    out << "max_spread_final=" << detail::format_short(rep.max_spread_final) << '\n';
}

inline void write_report_file(const ConsensusReport& rep, const std::filesystem::path& path) {
    detail::write_atomically(path, [&](std::ostream& out) { emit_report(rep, out); });
}

// ---------------------------------------------------------------------------
// CSV reading (for the `report` subcommand): reconstructs the trajectory
// columns emitted by emit_csv.
// ---------------------------------------------------------------------------

inline Trajectory read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open CSV file " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument(path.string() + ": empty file");

    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    if (cols.empty() || cols[0] != "t")
        throw std::invalid_argument(path.string() + ": not a trajectory CSV (first column must be t)");
    int n = 0;
    while (1 + n < static_cast<int>(cols.size()) && cols[1 + n] == "x" + std::to_string(n + 1)) ++n;
    if (n == 0) throw std::invalid_argument(path.string() + ": no state columns found");
    const bool sliding = static_cast<int>(cols.size()) == 1 + 5 * n + 2;
    const int expected = sliding ? 1 + 5 * n + 2 : 1 + 3 * n + 2;
    if (static_cast<int>(cols.size()) != expected)
        throw std::invalid_argument(path.string() + ": unexpected column count " + std::to_string(cols.size()));

    Trajectory traj;
    traj.agent_count = n;
    traj.sliding = sliding;
    std::string line;
    std::vector<double> row(cols.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char* ptr = line.c_str();
        for (std::size_t c = 0; c < row.size(); ++c) {
            char* end = nullptr;
            row[c] = std::strtod(ptr, &end);
            if (end == ptr)
                throw std::invalid_argument(path.string() + ": malformed row " +
                                            std::to_string(traj.samples() + 2));
            ptr = (*end == ',') ? end + 1 : end;
        }
        SwarmState st;
        st.t = row[0];
        st.x.assign(row.begin() + 1, row.begin() + 1 + n);
        st.theta.assign(row.begin() + 1 + 2 * n, row.begin() + 1 + 3 * n);
        traj.times.push_back(row[0]);
        traj.controls.emplace_back(row.begin() + 1 + n, row.begin() + 1 + 2 * n);
        traj.disagreement.push_back(row[1 + 3 * n]);
        traj.spread.push_back(row[1 + 3 * n + 1]);
        double peak = 0.0;
        for (const double v : traj.controls.back()) peak = std::max(peak, std::abs(v));
        traj.control_peak.push_back(peak);
        if (sliding) {
            traj.surfaces.emplace_back(row.begin() + 1 + 3 * n + 2, row.begin() + 1 + 4 * n + 2);
            st.eta.assign(row.begin() + 1 + 4 * n + 2, row.begin() + 1 + 5 * n + 2);
            st.integral.assign(static_cast<std::size_t>(n), 0.0);  // not stored in the CSV
        }
        traj.states.push_back(std::move(st));
    }
    if (traj.samples() == 0) throw std::invalid_argument(path.string() + ": no data rows");
    return traj;
}

}  // namespace ftc
