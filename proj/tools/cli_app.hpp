#pragma once

// Command-line front end. run_cli() is kept separate from main() so the
// tests can drive it in-process.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "epsprep/gates.hpp"
#include "epsprep/identities.hpp"
#include "epsprep/json_io.hpp"
#include "epsprep/planner.hpp"

namespace epsprep::cli {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    int n = 0;
    std::string scheme = "general";
    double tolerance = 1e-9;
    std::string output;
    bool expand_repetitions = false;
    bool json = false;
    std::string input;
    std::string identity;
    std::string sigma;
    std::optional<double> alpha;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text << '\n';
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << std::scientific << v;
    return os.str();
}

inline void print_report(const IdentityReport& r, std::ostream& out) {
    out << (r.passed ? "PASS " : "FAIL ") << to_string(r.identity_id) << " n=" << r.n
        << " residual=" << fmt(r.residual) << " tol=" << fmt(r.tolerance);
    if (!r.inputs.empty()) out << " [" << r.inputs << "]";
    if (!r.detail.empty()) out << " " << r.detail;
    out << '\n';
}

inline int finish(const std::vector<IdentityReport>& reports, const RunConfig& cfg,
                  std::ostream& out) {
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.passed;
    if (cfg.json) {
        out << reports_to_json(reports).dump(2) << '\n';
    } else {
        for (const auto& r : reports) print_report(r, out);
    }
    return ok ? kPass : kVerificationFailure;
}

// ---------------------------------------------------------------------------

inline int cmd_plan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Scheme scheme;
    try {
        scheme = parse_scheme(cfg.scheme);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (cfg.n < 2 || cfg.n > kMaxDenseSpins) {
        throw UsageError("-n must lie in 2.." + std::to_string(kMaxDenseSpins));
    }
    PreparationPlan plan = scheme == Scheme::kGeneral ? general_plan(cfg.n) : logical_label_plan(cfg.n);
    if (cfg.expand_repetitions) plan = expand_repetitions(plan);
    write_output(cfg.output, plan_to_json(plan).dump(2), out);
    std::ostream& note = (cfg.output.empty() || cfg.output == "-") ? err : out;
    note << plan.experiments.size() << " experiments\n";
    return kPass;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const PreparationPlan plan = plan_from_json(parse_json_text(read_file(cfg.input)));
    SimulationResult sim;
    try {
        sim = simulate_plan(plan, cfg.tolerance);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    const double offset = plan.target.identity_coefficient;
    if (cfg.json) {
        Json diag = Json::array();
        for (Eigen::Index i = 0; i < sim.dense.dim(); ++i) diag.push_back(sim.dense.m(i, i).real() + offset);
        Json j = report_to_json(sim.report);
        j["diagonal"] = std::move(diag);
        j["identity_offset"] = offset;
        out << j.dump(2) << '\n';
    } else {
        print_report(sim.report, out);
        out << "diagonal (with identity offset " << offset << "):";
        for (Eigen::Index i = 0; i < sim.dense.dim(); ++i) {
            const double v = sim.dense.m(i, i).real() + offset;
            out << ' ' << (std::abs(v) < 1e-12 ? 0.0 : v);
        }
        out << '\n';
    }
    return sim.report.passed ? kPass : kVerificationFailure;
}

inline OperatorSum sigma_or_default(const RunConfig& cfg, int n) {
    if (cfg.sigma.empty()) return OperatorSum::from_term(basis_term(FactorString(static_cast<std::size_t>(n), Factor::Y)));
    return OperatorSum::from_term(basis_term(parse_factors(cfg.sigma)));
}

inline std::vector<IdentityReport> run_identity(IdentityId id, const RunConfig& cfg, int n) {
    const std::optional<double> tol = std::nullopt;
    const double alpha = cfg.alpha.value_or(0.3);
    auto sigma_term = [&] {
        return cfg.sigma.empty() ? basis_term(FactorString(static_cast<std::size_t>(n), Factor::Y))
                                 : basis_term(parse_factors(cfg.sigma));
    };
    switch (id) {
        case IdentityId::kConjugationExpansion:
            return {check_conjugation_expansion(sigma_or_default(cfg, n), alpha, tol)};
        case IdentityId::kClosedFormExponential:
            return {check_closed_form_exponential(n, alpha, tol)};
        case IdentityId::kSandwichFunctional:
            return {check_sandwich_functional(to_dense(sigma_or_default(cfg, n)), tol)};
        case IdentityId::kQDecomposition:
            return {check_q_decomposition(n, tol)};
        case IdentityId::kRotatedFrameExpansion:
            return {check_rotated_frame_expansion(sigma_or_default(cfg, n), alpha, tol)};
        case IdentityId::kPhaseFlipIdentityBranch:
        case IdentityId::kPhaseFlipSplit:
            return {check_phase_flip_split(sigma_term(), tol)};
        case IdentityId::kDiffusionAnticommutator:
            return {check_diffusion_anticommutator(sigma_term(), tol)};
        case IdentityId::kCoherenceTable:
            return {check_coherence_table(n, tol)};
        case IdentityId::kParityRotation:
            return {check_parity_rotation(n, std::nullopt, tol)};
        case IdentityId::kLabelConversion:
            return {check_label_conversion(n, tol)};
        case IdentityId::kPlanSimulation: {
            auto general = simulate_plan(general_plan(n), cfg.tolerance).report;
            general.inputs = "general plan";
            auto label = simulate_plan(logical_label_plan(n), cfg.tolerance).report;
            label.inputs = "logical-label plan";
            return {general, label};
        }
        case IdentityId::kCompilation: {
            std::vector<IdentityReport> out;
            for (const auto& e : general_plan(n).experiments) {
                for (const auto& s : e.steps) out.push_back(verify_compilation(s, compile_step(s, n), cfg.tolerance));
            }
            return out;
        }
    }
    return {};
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    int n = cfg.n;
    if (!cfg.sigma.empty()) {
        FactorString f;
        try {
            f = parse_factors(cfg.sigma);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (n == 0) n = static_cast<int>(f.size());
        if (static_cast<int>(f.size()) != n) throw UsageError("--sigma length must equal -n");
    }
    if (n < 1 || n > kMaxDenseSpins) {
        throw UsageError("-n must lie in 1.." + std::to_string(kMaxDenseSpins));
    }
    std::vector<IdentityReport> reports;
    try {
        if (cfg.identity == "all") {
            for (const auto& [id, name] : kIdentityNames) {
                if (id == IdentityId::kPhaseFlipIdentityBranch) continue;
                if (id == IdentityId::kParityRotation && n % 2 != 0) continue;
                if ((id == IdentityId::kCoherenceTable || id == IdentityId::kLabelConversion ||
                     id == IdentityId::kPlanSimulation || id == IdentityId::kCompilation) &&
                    n < 2) {
                    continue;
                }
                if (id == IdentityId::kDiffusionAnticommutator && !cfg.sigma.empty() &&
                    classify_g(parse_factors(cfg.sigma)) == GClass::kInGx) {
                    continue;
                }
                auto r = run_identity(id, cfg, n);
                reports.insert(reports.end(), r.begin(), r.end());
            }
        } else {
            const auto id = parse_identity_id(cfg.identity);
            if (!id) throw UsageError("unknown identity '" + cfg.identity + "'");
            reports = run_identity(*id, cfg, n);
        }
    } catch (const PreconditionError& e) {
        throw UsageError(std::string("rejected: ") + e.what());
    } catch (const DimensionError& e) {
        throw UsageError(e.what());
    }
    return finish(reports, cfg, out);
}

inline int cmd_compile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const PreparationPlan plan = plan_from_json(parse_json_text(read_file(cfg.input)));
    CompiledPlan compiled;
    try {
        compiled = compile_plan(plan);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    std::vector<IdentityReport> reports;
    for (std::size_t i = 0; i < compiled.experiments.size(); ++i) {
        const auto& e = compiled.experiments[i];
        reports.push_back(verify_compilation(steps_unitary(e.steps, plan.n), e.sequence, cfg.tolerance,
                                             "experiment " + std::to_string(i + 1)));
    }
    write_output(cfg.output, compiled_plan_to_json(compiled).dump(2), out);
    std::ostream& note = (cfg.output.empty() || cfg.output == "-") ? err : out;
    note << compiled.experiments.size() << " gate sequences\n";
    return finish(reports, cfg, note);
}

inline int cmd_check_compile(const RunConfig& cfg, std::ostream& out) {
    const Json j = parse_json_text(read_file(cfg.input));
    std::vector<IdentityReport> reports;
    if (j.contains("experiments")) {
        const CompiledPlan c = compiled_plan_from_json(j);
        for (std::size_t i = 0; i < c.experiments.size(); ++i) {
            const auto& e = c.experiments[i];
            reports.push_back(verify_compilation(steps_unitary(e.steps, c.n), e.sequence,
                                                 cfg.tolerance, "experiment " + std::to_string(i + 1)));
        }
    } else {
        // A bare sequence carries no source unitary; only unitarity is checked.
        const GateSequence seq = gate_sequence_from_json(j);
        const DenseOperator u = recompose(seq);
        const double r = max_abs_diff(u.adjoint() * u, DenseOperator::identity(seq.n));
        reports.push_back(make_report(IdentityId::kCompilation, seq.n, "bare sequence (unitarity)", r,
                                      cfg.tolerance, std::to_string(seq.gates.size()) + " gates"));
    }
    return finish(reports, cfg, out);
}

}  // namespace detail

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == "plan") return detail::cmd_plan(cfg, out, err);
    if (cfg.command == "simulate") return detail::cmd_simulate(cfg, out);
    if (cfg.command == "verify") return detail::cmd_verify(cfg, out);
    if (cfg.command == "compile") return detail::cmd_compile(cfg, out, err);
    if (cfg.command == "check-compile") return detail::cmd_check_compile(cfg, out);
    throw UsageError("unknown command '" + cfg.command + "'");
}

/// argv-style entry point; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Effective pure state preparation: plans, simulation, identity checks, compilation",
                 "epsprep"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--tol", cfg.tolerance, "Verification tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--json", cfg.json, "Emit reports as JSON");
    };

    auto* plan = app.add_subcommand("plan", "Write a preparation plan");
    plan->add_option("-n", cfg.n, "Number of spins")->required();
    plan->add_option("--scheme", cfg.scheme, "general or logical-label")
        ->check(CLI::IsMember({"general", "logical-label"}));
    plan->add_option("-o,--output", cfg.output, "Output file (stdout if omitted)");
    plan->add_flag("--expand-repetitions", cfg.expand_repetitions,
                   "Write the weighted identity experiment as repeated unit-weight runs");
    add_common(plan);

    auto* simulate = app.add_subcommand("simulate", "Simulate a plan and compare with its target");
    simulate->add_option("plan", cfg.input, "Plan file")->required();
    add_common(simulate);

    auto* verify = app.add_subcommand("verify", "Check an identity of the construction");
    verify->add_option("--identity", cfg.identity, "Identity id or 'all'")->required();
    verify->add_option("-n", cfg.n, "Number of spins");
    verify->add_option("--sigma", cfg.sigma, "Basis product term as an E/X/Y/Z string");
    verify->add_option("--alpha", cfg.alpha, "Rotation angle for the alpha-dependent checks");
    add_common(verify);

    auto* compile = app.add_subcommand("compile", "Lower a plan to one- and two-qubit gates");
    compile->add_option("plan", cfg.input, "Plan file")->required();
    compile->add_option("-o,--output", cfg.output, "Output file (stdout if omitted)");
    add_common(compile);

    auto* check = app.add_subcommand("check-compile", "Recompose compiled gates and verify them");
    check->add_option("gates", cfg.input, "Compiled file")->required();
    add_common(check);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

    try {
        return dispatch(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }
}

}  // namespace epsprep::cli
