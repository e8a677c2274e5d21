#pragma once

// JSON forms of plans, gate sequences and identity reports.

#include <json.hpp>

#include <string>
#include <vector>

#include "epsprep/angle.hpp"
#include "epsprep/gates.hpp"
#include "epsprep/planner.hpp"
#include "epsprep/report.hpp"
#include "epsprep/steps.hpp"

namespace epsprep {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

namespace json_detail {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("field '") + key + "' has the wrong type");
    }
}

inline void require_version(const Json& j) {
    if (field<int>(j, "version") != kFormatVersion) {
        throw FormatError("unsupported format version");
    }
}

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError("complex values are [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

// Spins are 1-based in files.
inline Json spins_to_json(const std::vector<int>& spins) {
    Json out = Json::array();
    for (int k : spins) out.push_back(k + 1);
    return out;
}

inline std::vector<int> spins_from_json(const Json& j, int n) {
    if (!j.is_array()) throw FormatError("'spins' must be an array");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw FormatError("spin labels are integers");
        const int k = v.get<int>();
        if (k < 1 || k > n) throw FormatError("spin label out of range");
        out.push_back(k - 1);
    }
    return out;
}

inline int spin_from_json(const Json& j, const char* key, int n) {
    const int k = field<int>(j, key);
    if (k < 1 || k > n) throw FormatError(std::string("'") + key + "' out of range");
    return k - 1;
}

inline Axis axis_from_json(const Json& j) {
    try {
        return parse_axis(field<std::string>(j, "axis"));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

}  // namespace json_detail

/// {num, den} for pi fractions, a plain number of radians otherwise.
inline Json angle_to_json(const Angle& a) {
    if (const auto& f = a.fraction()) return Json{{"num", f->num}, {"den", f->den}};
    return a.radians();
}

inline Angle angle_from_json(const Json& j) {
    if (j.is_number()) {
        try {
            return Angle::from_radians(j.get<double>());
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }
    if (!j.is_object()) throw FormatError("angles are numbers or {num, den} objects");
    const auto num = json_detail::field<std::int64_t>(j, "num");
    const auto den = json_detail::field<std::int64_t>(j, "den");
    if (den == 0) throw FormatError("angle denominator is zero");
    return Angle::pi_fraction(num, den);
}

inline Json step_to_json(const UnitaryStep& s) {
    using json_detail::spins_to_json;
    return std::visit(
        [](const auto& st) -> Json {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, step::OneQubitRotation>) {
                return {{"kind", "rotation"},
                        {"spins", spins_to_json({st.spin})},
                        {"axis", std::string(1, axis_char(st.axis))},
                        {"angle", angle_to_json(st.angle)}};
            } else if constexpr (std::is_same_v<T, step::CollectiveRotation>) {
                return {{"kind", "collective"},
                        {"spins", spins_to_json(st.spins)},
                        {"axis", std::string(1, axis_char(st.axis))},
                        {"angle", angle_to_json(st.angle)}};
            } else if constexpr (std::is_same_v<T, step::WalshHadamard>) {
                return {{"kind", "walsh_hadamard"}};
            } else if constexpr (std::is_same_v<T, step::Diffusion>) {
                return {{"kind", "diffusion"}};
            } else if constexpr (std::is_same_v<T, step::PhaseFlipR>) {
                return {{"kind", "phase_flip"}};
            } else if constexpr (std::is_same_v<T, step::MultibodyPropagator>) {
                return {{"kind", "multibody"},
                        {"spins", spins_to_json(st.spins)},
                        {"axis", std::string(1, axis_char(st.axis))},
                        {"angle", angle_to_json(st.angle)}};
            } else if constexpr (std::is_same_v<T, step::TwoQubitDiagonal>) {
                return {{"kind", "two_qubit_diagonal"},
                        {"spins", spins_to_json({st.k, st.l})},
                        {"lambda", angle_to_json(st.lambda)}};
            } else if constexpr (std::is_same_v<T, step::CollectiveZRotation>) {
                return {{"kind", "collective_z"}, {"angle", angle_to_json(st.angle)}};
            } else {
                return {{"kind", "crusher"}};
            }
        },
        s);
}

inline UnitaryStep step_from_json(const Json& j, int n) {
    using namespace json_detail;
    const auto kind = field<std::string>(j, "kind");
    auto angle = [&](const char* key) {
        if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
        return angle_from_json(j.at(key));
    };
    auto spins = [&] {
        if (!j.contains("spins")) throw FormatError("missing field 'spins'");
        return spins_from_json(j.at("spins"), n);
    };
    UnitaryStep s;
    if (kind == "rotation") {
        const auto sp = spins();
        if (sp.size() != 1) throw FormatError("a rotation acts on exactly one spin");
        s = step::OneQubitRotation{sp[0], axis_from_json(j), angle("angle")};
    } else if (kind == "collective") {
        s = step::CollectiveRotation{spins(), axis_from_json(j), angle("angle")};
    } else if (kind == "walsh_hadamard") {
        s = step::WalshHadamard{};
    } else if (kind == "diffusion") {
        s = step::Diffusion{};
    } else if (kind == "phase_flip") {
        s = step::PhaseFlipR{};
    } else if (kind == "multibody") {
        s = step::MultibodyPropagator{spins(), axis_from_json(j), angle("angle")};
    } else if (kind == "two_qubit_diagonal") {
        const auto sp = spins();
        if (sp.size() != 2) throw FormatError("a two-qubit diagonal step names two spins");
        s = step::TwoQubitDiagonal{sp[0], sp[1], angle("lambda")};
    } else if (kind == "collective_z") {
        s = step::CollectiveZRotation{angle("angle")};
    } else if (kind == "crusher") {
        s = step::GradientCrusher{};
    } else {
        throw FormatError("unknown step kind '" + kind + "'");
    }
    try {
        validate_step(s, n);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    return s;
}

inline Json operator_sum_to_json(const OperatorSum& a) {
    Json terms = Json::array();
    for (const auto& [f, c] : a.terms()) {
        terms.push_back({{"coeff", json_detail::complex_to_json(c)}, {"factors", to_string(f)}});
    }
    return terms;
}

inline OperatorSum operator_sum_from_json(const Json& j, int n) {
    if (!j.is_array()) throw FormatError("'terms' must be an array");
    OperatorSum out(n);
    for (const auto& t : j) {
        FactorString f;
        try {
            f = parse_factors(json_detail::field<std::string>(t, "factors"));
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
        if (static_cast<int>(f.size()) != n) throw FormatError("factor string length differs from n");
        if (!t.contains("coeff")) throw FormatError("missing field 'coeff'");
        out.add(f, json_detail::complex_from_json(t.at("coeff")));
    }
    return out;
}

inline Json steps_to_json(const std::vector<UnitaryStep>& steps) {
    Json out = Json::array();
    for (const auto& s : steps) out.push_back(step_to_json(s));
    return out;
}

inline Json plan_to_json(const PreparationPlan& plan) {
    Json experiments = Json::array();
    for (const auto& e : plan.experiments) {
        experiments.push_back(
            {{"weight", e.weight}, {"initial", "zorder"}, {"steps", steps_to_json(e.steps)}});
    }
    Json signs = Json::object();
    for (const auto& [k, v] : plan.resolved_signs) signs[k] = v;
    return {{"version", kFormatVersion},
            {"n", plan.n},
            {"scheme", to_string(plan.scheme)},
            {"experiments", std::move(experiments)},
            {"target",
             {{"identity_coefficient", plan.target.identity_coefficient},
              {"terms", operator_sum_to_json(plan.target.traceless_part)}}},
            {"resolved_signs", std::move(signs)}};
}

inline int plan_spins_from_json(const Json& j) {
    const int n = json_detail::field<int>(j, "n");
    if (n < 1 || n > kMaxDenseSpins) throw FormatError("'n' out of range");
    return n;
}

inline PreparationPlan plan_from_json(const Json& j) {
    using namespace json_detail;
    require_version(j);
    PreparationPlan plan;
    plan.n = plan_spins_from_json(j);
    try {
        plan.scheme = parse_scheme(field<std::string>(j, "scheme"));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    const Json& experiments = j.contains("experiments") ? j.at("experiments") : Json();
    if (!experiments.is_array()) throw FormatError("'experiments' must be an array");
    for (const auto& e : experiments) {
        ExperimentSpec spec;
        spec.weight = field<double>(e, "weight");
        if (e.contains("initial") && e.at("initial") != "zorder") {
            throw FormatError("only the 'zorder' initial state is supported");
        }
        const Json& steps = e.contains("steps") ? e.at("steps") : Json();
        if (!steps.is_array()) throw FormatError("'steps' must be an array");
        for (const auto& s : steps) spec.steps.push_back(step_from_json(s, plan.n));
        plan.experiments.push_back(std::move(spec));
    }
    if (!j.contains("target")) throw FormatError("missing field 'target'");
    const Json& target = j.at("target");
    plan.target.identity_coefficient = field<double>(target, "identity_coefficient");
    plan.target.traceless_part =
        operator_sum_from_json(target.contains("terms") ? target.at("terms") : Json(), plan.n);
    if (j.contains("resolved_signs")) {
        if (!j.at("resolved_signs").is_object()) throw FormatError("'resolved_signs' must be an object");
        for (const auto& [k, v] : j.at("resolved_signs").items()) {
            if (!v.is_number_integer()) throw FormatError("resolved signs are integers");
            plan.resolved_signs[k] = v.get<int>();
        }
    }
    return plan;
}

inline Json gate_to_json(const Gate& g) {
    if (const auto* one = std::get_if<gate::OneQubit>(&g)) {
        return {{"kind", "1q"},
                {"spin", one->spin + 1},
                {"axis", std::string(1, axis_char(one->axis))},
                {"angle", angle_to_json(one->angle)}};
    }
    const auto& two = std::get<gate::Diagonal2>(g);
    return {{"kind", "g2"}, {"k", two.k + 1}, {"l", two.l + 1}, {"lambda", angle_to_json(two.lambda)}};
}

inline Gate gate_from_json(const Json& j, int n) {
    using namespace json_detail;
    const auto kind = field<std::string>(j, "kind");
    Gate g;
    if (kind == "1q") {
        if (!j.contains("angle")) throw FormatError("missing field 'angle'");
        g = gate::OneQubit{spin_from_json(j, "spin", n), axis_from_json(j), angle_from_json(j.at("angle"))};
    } else if (kind == "g2") {
        if (!j.contains("lambda")) throw FormatError("missing field 'lambda'");
        g = gate::Diagonal2{spin_from_json(j, "k", n), spin_from_json(j, "l", n),
                            angle_from_json(j.at("lambda"))};
    } else {
        throw FormatError("unknown gate kind '" + kind + "'");
    }
    try {
        validate_gate(g, n);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    return g;
}

/// Gate array and phase only; callers add version and n where needed.
inline Json gates_body_to_json(const GateSequence& seq) {
    Json gates = Json::array();
    for (const auto& g : seq.gates) gates.push_back(gate_to_json(g));
    return {{"gates", std::move(gates)}, {"global_phase", json_detail::complex_to_json(seq.global_phase)}};
}

inline Json gate_sequence_to_json(const GateSequence& seq) {
    Json out = {{"version", kFormatVersion}, {"n", seq.n}};
    out.update(gates_body_to_json(seq));
    return out;
}

inline GateSequence gates_body_from_json(const Json& j, int n) {
    GateSequence seq{n, {}, 1.0};
    const Json& gates = j.contains("gates") ? j.at("gates") : Json();
    if (!gates.is_array()) throw FormatError("'gates' must be an array");
    for (const auto& g : gates) seq.gates.push_back(gate_from_json(g, n));
    if (!j.contains("global_phase")) throw FormatError("missing field 'global_phase'");
    seq.global_phase = json_detail::complex_from_json(j.at("global_phase"));
    return seq;
}

inline GateSequence gate_sequence_from_json(const Json& j) {
    json_detail::require_version(j);
    return gates_body_from_json(j, plan_spins_from_json(j));
}

/// One experiment of a compiled plan: its steps and their lowered sequence.
struct CompiledExperiment {
    double weight = 0.0;
    std::vector<UnitaryStep> steps;
    GateSequence sequence;
};

struct CompiledPlan {
    int n = 0;
    Scheme scheme = Scheme::kGeneral;
    std::vector<CompiledExperiment> experiments;
};

inline CompiledPlan compile_plan(const PreparationPlan& plan) {
    validate_plan(plan);
    CompiledPlan out{plan.n, plan.scheme, {}};
    for (const auto& e : plan.experiments) {
        out.experiments.push_back({e.weight, e.steps, compile_steps(e.steps, plan.n)});
    }
    return out;
}

inline Json compiled_plan_to_json(const CompiledPlan& c) {
    Json experiments = Json::array();
    for (const auto& e : c.experiments) {
        experiments.push_back({{"weight", e.weight},
                               {"steps", steps_to_json(e.steps)},
                               {"sequence", gates_body_to_json(e.sequence)}});
    }
    return {{"version", kFormatVersion},
            {"n", c.n},
            {"scheme", to_string(c.scheme)},
            {"experiments", std::move(experiments)}};
}

inline CompiledPlan compiled_plan_from_json(const Json& j) {
    using namespace json_detail;
    require_version(j);
    CompiledPlan c;
    c.n = plan_spins_from_json(j);
    try {
        c.scheme = parse_scheme(field<std::string>(j, "scheme"));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    const Json& experiments = j.contains("experiments") ? j.at("experiments") : Json();
    if (!experiments.is_array()) throw FormatError("'experiments' must be an array");
    for (const auto& e : experiments) {
        CompiledExperiment ce;
        ce.weight = field<double>(e, "weight");
        const Json& steps = e.contains("steps") ? e.at("steps") : Json();
        if (!steps.is_array()) throw FormatError("'steps' must be an array");
        for (const auto& s : steps) ce.steps.push_back(step_from_json(s, c.n));
        if (!e.contains("sequence")) throw FormatError("missing field 'sequence'");
        ce.sequence = gates_body_from_json(e.at("sequence"), c.n);
        c.experiments.push_back(std::move(ce));
    }
    return c;
}

inline Json report_to_json(const IdentityReport& r) {
    return {{"identity_id", to_string(r.identity_id)},
            {"n", r.n},
            {"inputs", r.inputs},
            {"residual", r.residual},
            {"tolerance", r.tolerance},
            {"passed", r.passed},
            {"detail", r.detail}};
}

inline Json reports_to_json(const std::vector<IdentityReport>& reports) {
    Json out = Json::array();
    for (const auto& r : reports) out.push_back(report_to_json(r));
    return out;
}

/// Parses text, mapping syntax errors to FormatError.
inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace epsprep
