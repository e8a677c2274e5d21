#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace epsprep {

/// Which identity a report checks. The string ids are the names accepted on
/// the command line and written to JSON.
enum class IdentityId {
    kConjugationExpansion,
    kClosedFormExponential,
    kSandwichFunctional,
    kQDecomposition,
    kRotatedFrameExpansion,
    kPhaseFlipIdentityBranch,
    kPhaseFlipSplit,
    kDiffusionAnticommutator,
    kCoherenceTable,
    kParityRotation,
    kLabelConversion,
    kPlanSimulation,
    kCompilation,
};

inline constexpr std::array<std::pair<IdentityId, std::string_view>, 13> kIdentityNames{{
    {IdentityId::kConjugationExpansion, "eq3"},
    {IdentityId::kClosedFormExponential, "eq4"},
    {IdentityId::kSandwichFunctional, "eq5"},
    {IdentityId::kQDecomposition, "eq8"},
    {IdentityId::kRotatedFrameExpansion, "eq9"},
    {IdentityId::kPhaseFlipIdentityBranch, "eq10"},
    {IdentityId::kPhaseFlipSplit, "eq11"},
    {IdentityId::kDiffusionAnticommutator, "eq13"},
    {IdentityId::kCoherenceTable, "eq17"},
    {IdentityId::kParityRotation, "parity-fix"},
    {IdentityId::kLabelConversion, "eq18"},
    {IdentityId::kPlanSimulation, "plan"},
    {IdentityId::kCompilation, "compile"},
}};

inline std::string to_string(IdentityId id) {
    for (const auto& [k, name] : kIdentityNames) {
        if (k == id) return std::string(name);
    }
    return "unknown";
}

inline std::optional<IdentityId> parse_identity_id(std::string_view name) {
    for (const auto& [k, s] : kIdentityNames) {
        if (s == name) return k;
    }
    return std::nullopt;
}

struct IdentityReport {
    IdentityId identity_id = IdentityId::kPlanSimulation;
    int n = 0;
    std::string inputs;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

/// passed iff residual <= tolerance.
inline IdentityReport make_report(IdentityId id, int n, std::string inputs, double residual,
                                  double tolerance, std::string detail = {}) {
    return {id, n, std::move(inputs), residual, tolerance, residual <= tolerance,
            std::move(detail)};
}

}  // namespace epsprep
