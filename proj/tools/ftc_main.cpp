// Command-line front end: run scenario files, reproduce the built-in
// experiments, print convergence-time bounds, and recompute metrics from a
// trajectory CSV.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftc/ftc.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<double> epsilon;
    std::optional<double> gamma;

    void apply(ftc::Scenario& sc) const {
        if (dt) sc.integrator.dt = *dt;
        if (t_end) sc.integrator.t_end = *t_end;
        if (epsilon) sc.epsilon = *epsilon;
        if (gamma) sc.protocol.gamma = *gamma;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& o, std::string& out_dir) {
    cmd->add_option("--out", out_dir, "Output directory for CSV and report files")->capture_default_str();
    cmd->add_option("--dt", o.dt, "Override the integrator step");
    cmd->add_option("--t-end", o.t_end, "Override the integration horizon");
    cmd->add_option("--epsilon", o.epsilon, "Override the consensus threshold");
    cmd->add_option("--gamma", o.gamma, "Override the inverse regularization");
}

void run_one(const ftc::Scenario& sc, const fs::path& out_dir) {
    auto result = ftc::run_scenario(sc);
    for (const auto& w : result.warnings) std::cerr << "warning: " << sc.name << ": " << w << '\n';
    fs::create_directories(out_dir);
    const fs::path csv_path = out_dir / (sc.name + ".csv");
    const fs::path report_path = out_dir / (sc.name + ".report.txt");
    ftc::write_csv_file(result.trajectory, csv_path);
    ftc::write_report_file(result.report, report_path);
    ftc::emit_report(result.report, std::cout);
    std::cout << "csv=" << csv_path.string() << '\n' << '\n';
}

std::string describe(const ftc::Scenario& sc) {
    std::string s = ftc::protocol_name(sc.protocol.variant);
    s += " lambda=" + ftc::detail::format_short(sc.protocol.lambda);
    s += " rho=" + ftc::detail::format_short(sc.protocol.rho);
    if (sc.protocol.variant == ftc::Protocol::SlidingMode) {
        s += " omega_s=" + ftc::detail::format_short(sc.protocol.omega_s);
        s += " mu=" + ftc::detail::format_short(sc.protocol.mu);
        s += " d=" + ftc::detail::format_short(sc.protocol.d);
        if (!sc.protocol.xbar.empty()) s += " (shifted manifold)";
    }
    return s;
}

int cmd_list() {
    for (const auto& sc : ftc::builtin_scenarios()) std::cout << sc.name << ": " << describe(sc) << '\n';
    return 0;
}

int cmd_bound(const std::string& variant, double lambda, double rho, double mu, double omega_s, int n,
              double kappa, double max_p) {
    if (variant == "scalar") {
        std::cout << "variant=scalar\n";
        std::cout << "bound=" << ftc::detail::format_short(ftc::bound_scalar(lambda, rho)) << '\n';
        const double threshold = lambda * lambda / 4.0;
        std::cout << "condition_satisfied=" << (rho > threshold ? "true" : "false") << '\n';
        std::cout << "rho_threshold=" << ftc::detail::format_short(threshold) << '\n';
        return 0;
    }
    ftc::Protocol p;
    if (variant == "fixed_time")
        p = ftc::Protocol::FixedTime;
    else if (variant == "average")
        p = ftc::Protocol::Average;
    else if (variant == "weighted")
        p = ftc::Protocol::Weighted;
    else if (variant == "sliding_mode")
        p = ftc::Protocol::SlidingMode;
    else
        throw std::invalid_argument("unknown variant \"" + variant +
                                    "\" (expected scalar, fixed_time, average, weighted or sliding_mode)");

    const auto cond = ftc::check_condition(p, lambda, rho, mu, omega_s, n, kappa, max_p);
    const auto bound = ftc::bound_consensus_time(p, lambda, rho, mu, omega_s, n, kappa, max_p);
    std::cout << "variant=" << variant << '\n';
    std::cout << "bound=" << ftc::detail::format_short(bound.total) << '\n';
    if (bound.reaching) std::cout << "reaching_bound=" << ftc::detail::format_short(*bound.reaching) << '\n';
    if (bound.consensus) std::cout << "consensus_bound=" << ftc::detail::format_short(*bound.consensus) << '\n';
    std::cout << "condition_satisfied=" << (cond.satisfied ? "true" : "false") << '\n';
    std::cout << "rho_threshold=" << ftc::detail::format_short(cond.rho_threshold) << '\n';
    if (cond.mu_threshold) std::cout << "mu_threshold=" << ftc::detail::format_short(*cond.mu_threshold) << '\n';
    return 0;
}

int cmd_report(const fs::path& csv, double epsilon, const std::vector<double>& weights) {
    const auto traj = ftc::read_csv_file(csv);
    std::cout << "csv=" << csv.string() << '\n';
    if (const auto det = ftc::consensus_time(traj, epsilon)) {
        std::cout << "consensus_time=" << ftc::detail::format_short(det->time) << '\n';
        std::cout << "consensus_value=" << ftc::detail::format_short(det->value) << '\n';
    } else {
        std::cout << "consensus_time=none\nconsensus_value=none\n";
    }
    if (traj.sliding) {
        const auto rt = ftc::reaching_time(traj, epsilon);
        std::cout << "reaching_time=" << (rt ? ftc::detail::format_short(*rt) : std::string("none")) << '\n';
    }
    std::cout << "max_control=" << ftc::detail::format_short(ftc::max_control(traj)) << '\n';
    std::cout << "conservation_error="
              << ftc::detail::format_short(ftc::conservation_error(
                     traj, weights.empty() ? std::span<const double>() : std::span<const double>(weights)))
              << '\n';
    std::cout << "max_spread_final=" << ftc::detail::format_short(traj.spread.back()) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-time consensus protocol simulator"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "List the built-in scenarios");

    std::string run_file;
    std::string run_out = ".";
    Overrides run_overrides;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario file and write its CSV and report");
    run_cmd->add_option("file", run_file, "Scenario JSON document")->required();
    add_override_flags(run_cmd, run_overrides, run_out);

    std::string repro_name;
    std::string repro_out = ".";
    Overrides repro_overrides;
    auto* repro_cmd = app.add_subcommand("reproduce", "Run a built-in scenario by name, or all of them");
    repro_cmd->add_option("name", repro_name, "Built-in scenario name or \"all\"")->required();
    add_override_flags(repro_cmd, repro_overrides, repro_out);

    std::string bound_variant;
    double b_lambda = 0, b_rho = 0, b_mu = 0, b_omega = 0, b_kappa = 1, b_maxp = 0;
    int b_n = 0;
    auto* bound_cmd = app.add_subcommand("bound", "Print the convergence-time bound and condition check");
    bound_cmd->add_option("--variant", bound_variant, "scalar, fixed_time, average, weighted or sliding_mode")
        ->required();
    bound_cmd->add_option("--lambda", b_lambda, "Gain lambda")->required();
    bound_cmd->add_option("--rho", b_rho, "Gain rho")->required();
    bound_cmd->add_option("--mu", b_mu, "Reaching gain mu (sliding_mode)");
    bound_cmd->add_option("--omega-s", b_omega, "Reaching decay omega_s (sliding_mode)");
    bound_cmd->add_option("--n", b_n, "Agent count (average, weighted, sliding_mode)");
    bound_cmd->add_option("--kappa", b_kappa, "Minimum positive edge weight")->capture_default_str();
    bound_cmd->add_option("--max-p", b_maxp, "Largest preassigned weight K (weighted)");

    std::string report_csv;
    double report_epsilon = 1e-2;
    std::vector<double> report_weights;
    auto* report_cmd = app.add_subcommand("report", "Recompute metrics from a trajectory CSV");
    report_cmd->add_option("csv", report_csv, "Trajectory CSV produced by run/reproduce")->required();
    report_cmd->add_option("--epsilon", report_epsilon, "Consensus threshold")->capture_default_str();
    report_cmd->add_option("--p", report_weights, "Weights for the conserved sum (defaults to uniform)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (list_cmd->parsed()) return cmd_list();
        if (run_cmd->parsed()) {
            ftc::Scenario sc = ftc::load_scenario_file(run_file);
            run_overrides.apply(sc);
            run_one(sc, run_out);
            return 0;
        }
        if (repro_cmd->parsed()) {
            if (repro_name == "all") {
                for (auto& sc : ftc::builtin_scenarios()) {
                    repro_overrides.apply(sc);
                    run_one(sc, repro_out);
                }
            } else {
                ftc::Scenario sc = ftc::builtin_scenario(repro_name);
                repro_overrides.apply(sc);
                run_one(sc, repro_out);
            }
            return 0;
        }
        if (bound_cmd->parsed()) return cmd_bound(bound_variant, b_lambda, b_rho, b_mu, b_omega, b_n, b_kappa, b_maxp);
        if (report_cmd->parsed()) return cmd_report(report_csv, report_epsilon, report_weights);
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
