#pragma once

// Temporal-averaging preparation plans. Every plan starts each experiment from
// the longitudinal n-spin order sigma(0) = 2^(n-1) I_1z ... I_nz and realizes
// its target as the weighted sum of the experiment outputs.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "epsprep/dense_engine.hpp"
#include "epsprep/operators.hpp"
#include "epsprep/report.hpp"
#include "epsprep/steps.hpp"

namespace epsprep {

enum class Scheme { kGeneral, kLogicalLabel };

inline std::string to_string(Scheme s) {
    return s == Scheme::kGeneral ? "general" : "logical-label";
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "general") return Scheme::kGeneral;
    if (s == "logical-label") return Scheme::kLogicalLabel;
    throw std::invalid_argument("scheme must be 'general' or 'logical-label'; got '" + s + "'");
}

struct ExperimentSpec {
    double weight = 0.0;
    /// Applied in order to sigma(0); an empty list is the identity experiment.
    std::vector<UnitaryStep> steps;
};

/// traceless_part + identity_coefficient * E is the prepared state; the
/// identity offset is never simulated.
struct PreparationTarget {
    OperatorSum traceless_part{1};
    double identity_coefficient = 0.0;
};

struct PreparationPlan {
    int n = 0;
    Scheme scheme = Scheme::kGeneral;
    std::vector<ExperimentSpec> experiments;
    PreparationTarget target;
    /// Signs picked by the dense oracle among the candidate alternatives.
    std::map<std::string, int> resolved_signs;
};

/// All odd-cardinality subsets of the (0-based) spins, by size then lexicographically.
inline std::vector<std::vector<int>> odd_subsets(int n) {
    if (n < 1) throw DimensionError("odd_subsets needs n >= 1");
    std::vector<std::vector<int>> out;
    for (int size = 1; size <= n; size += 2) {
        std::vector<int> pick(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
        while (true) {
            out.push_back(pick);
            int i = size - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) {
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    return out;
}

/// Basis index whose bits are set exactly on the given spins.
inline Eigen::Index subset_index(int n, const std::vector<int>& spins) {
    Eigen::Index idx = 0;
    for (int k : spins) idx |= Eigen::Index{1} << spin_bit(n, k);
    return idx;
}

/// Sign choices for a subset experiment of three or more spins:
/// U_S = exp(-i propagator (pi/2) 2^(m-1) prod I_x) WDW exp(i collective (pi/2) sum I_x).
struct SubsetSigns {
    int collective = 1;
    int propagator = 1;
};

inline ExperimentSpec experiment_for_subset(const std::vector<int>& spins, int n,
                                            SubsetSigns signs) {
    require_spin_subset(n, spins);
    if (spins.size() % 2 == 0) {
        throw std::invalid_argument("subset experiments need an odd number of spins");
    }
    const Angle quarter_turn = Angle::pi_fraction(1, 2);
    ExperimentSpec e{-1.0, {}};
    if (spins.size() == 1) {
        const int k = spins.front();
        e.steps = {step::OneQubitRotation{k, Axis::kX, -quarter_turn}, step::WalshHadamard{},
                   step::Diffusion{}, step::WalshHadamard{},
                   step::OneQubitRotation{k, Axis::kX, quarter_turn}};
        return e;
    }
    e.steps = {step::CollectiveRotation{spins, Axis::kX, quarter_turn.scaled(-signs.collective)},
               step::WalshHadamard{}, step::Diffusion{}, step::WalshHadamard{},
               step::MultibodyPropagator{spins, Axis::kX, quarter_turn.scaled(signs.propagator)}};
    return e;
}

/// sigma(0) - U_S sigma(0) U_S^dag must equal D_0 - D_S for every odd subset S.
inline double subset_experiment_residual(const std::vector<int>& spins, int n, SubsetSigns signs) {
    const DenseOperator sigma = to_dense(zorder_state(n));
    const ExperimentSpec e = experiment_for_subset(spins, n, signs);
    const DenseOperator out = sigma - evolve(sigma, e.steps);
    const DenseOperator expected = build_ds(n, 0) - build_ds(n, subset_index(n, spins));
    return max_abs_diff(out, expected);
}

/// Oracle selection of the sign pair for subsets of size m, tried on the
/// subset {1..m} of a min(n, m+1)-spin system. The nominal signs are tried first.
inline SubsetSigns resolve_subset_signs(int m, int n, double tol = kDenseTolerance) {
    if (m < 3 || m > n || m % 2 == 0) {
        throw std::invalid_argument("sign resolution applies to odd subsets of 3 or more spins");
    }
    const int rep_n = std::min(n, m + 1);
    std::vector<int> spins;
    for (int k = 0; k < m; ++k) spins.push_back(k);
    const int nominal = m == 3 ? -1 : 1;
    const std::array<SubsetSigns, 4> candidates{
        {{nominal, 1}, {-nominal, 1}, {nominal, -1}, {-nominal, -1}}};
    for (const auto& c : candidates) {
        if (subset_experiment_residual(spins, rep_n, c) <= tol) return c;
    }
    throw std::runtime_error("no sign choice realizes the subset experiment for m = " +
                             std::to_string(m));
}

inline ExperimentSpec experiment_for_subset(const std::vector<int>& spins, int n) {
    if (spins.size() == 1) return experiment_for_subset(spins, n, SubsetSigns{});
    return experiment_for_subset(spins, n, resolve_subset_signs(static_cast<int>(spins.size()), n));
}

inline void require_plan_spins(int n) {
    if (n < 2 || n > kMaxDenseSpins) {
        throw DimensionError("plans need 2 <= n <= " + std::to_string(kMaxDenseSpins) +
                             ", got n = " + std::to_string(n));
    }
}

/// One identity experiment of weight 2^(n-1) - 1 plus one weight -1
/// experiment per odd subset; realizes 2^(n-1) D0 - E/2.
inline PreparationPlan general_plan(int n) {
    require_plan_spins(n);
    PreparationPlan plan;
    plan.n = n;
    plan.scheme = Scheme::kGeneral;
    const double half_n = std::ldexp(1.0, n - 1);
    plan.experiments.push_back({half_n - 1.0, {}});

    std::map<int, SubsetSigns> signs;
    for (int m = 3; m <= n; m += 2) {
        signs[m] = resolve_subset_signs(m, n);
        plan.resolved_signs["collective_x." + std::to_string(m)] = signs[m].collective;
        plan.resolved_signs["multibody_x." + std::to_string(m)] = signs[m].propagator;
    }
    for (const auto& s : odd_subsets(n)) {
        const int m = static_cast<int>(s.size());
        plan.experiments.push_back(
            experiment_for_subset(s, n, m == 1 ? SubsetSigns{} : signs.at(m)));
    }

    // 2^(n-1) D0 = E/2 + traceless part.
    OperatorSum target = build_ds_symbolic(n, 0) * Complex{half_n};
    target.add(FactorString(static_cast<std::size_t>(n), Factor::E), -0.5);
    plan.target = {std::move(target), 0.5};
    return plan;
}

namespace detail {

struct LabelSigns {
    int collective = 1;
    int propagator = 1;
    int z_rotation = 0;  // 0: no collective z rotation
};

inline std::vector<ExperimentSpec> label_experiments(int n, const LabelSigns& s) {
    const Angle quarter_turn = Angle::pi_fraction(1, 2);
    const auto spins = all_spins(n);
    const UnitaryStep to_y = step::CollectiveRotation{spins, Axis::kX,
                                                      quarter_turn.scaled(-s.collective)};
    const UnitaryStep to_z = step::MultibodyPropagator{spins, Axis::kX,
                                                       quarter_turn.scaled(s.propagator)};
    std::vector<UnitaryStep> reference;
    std::vector<UnitaryStep> main{to_y, step::WalshHadamard{}, step::Diffusion{},
                                  step::WalshHadamard{}};
    if (s.z_rotation != 0) {
        const UnitaryStep zrot = step::CollectiveZRotation{Angle::pi_fraction(s.z_rotation, 2 * n)};
        main.push_back(zrot);
        reference = {to_y, zrot, to_z};
    }
    main.push_back(to_z);
    return {{1.0, std::move(reference)}, {-1.0, std::move(main)}};
}

inline double label_residual(int n, const std::vector<ExperimentSpec>& experiments) {
    const DenseOperator sigma = to_dense(zorder_state(n));
    DenseOperator acc = DenseOperator::zero(n);
    for (const auto& e : experiments) acc = acc + Complex{e.weight} * evolve(sigma, e.steps);
    const auto last = dim_for(n) - 1;
    return max_abs_diff(acc, build_ds(n, 0) - build_ds(n, last));
}

}  // namespace detail

/// Two experiments whose difference is |0..0><0..0| - |1..1><1..1|.
/// For odd n the reference experiment is the identity; for even n it is the
/// same frame change without the W D W block.
inline PreparationPlan logical_label_plan(int n) {
    require_plan_spins(n);
    std::vector<detail::LabelSigns> candidates;
    if (n % 2 == 1) {
        for (int p : {1, -1}) {
            for (int c : {1, -1}) candidates.push_back({c, p, 0});
        }
    } else {
        for (int z : {1, -1}) {
            for (int p : {1, -1}) candidates.push_back({1, p, z});
        }
    }
    for (const auto& c : candidates) {
        auto experiments = detail::label_experiments(n, c);
        if (detail::label_residual(n, experiments) > kDenseTolerance) continue;
        PreparationPlan plan;
        plan.n = n;
        plan.scheme = Scheme::kLogicalLabel;
        plan.experiments = std::move(experiments);
        const auto last = dim_for(n) - 1;
        plan.target = {build_ds_symbolic(n, 0) - build_ds_symbolic(n, last), 0.0};
        plan.resolved_signs = {{"collective_x", c.collective},
                               {"multibody_x", c.propagator},
                               {"z_rotation", c.z_rotation},
                               {"identity_reference", n % 2}};
        return plan;
    }
    throw std::runtime_error("no sign choice realizes the logical-label plan for n = " +
                             std::to_string(n));
}

/// Replaces a weight-w identity experiment by w unit-weight repetitions.
inline PreparationPlan expand_repetitions(const PreparationPlan& plan) {
    PreparationPlan out = plan;
    out.experiments.clear();
    for (const auto& e : plan.experiments) {
        const double reps = std::round(e.weight);
        if (e.steps.empty() && reps > 1.0 && std::abs(e.weight - reps) < 1e-12) {
            for (int i = 0; i < static_cast<int>(reps); ++i) out.experiments.push_back({1.0, {}});
        } else {
            out.experiments.push_back(e);
        }
    }
    return out;
}

inline void validate_plan(const PreparationPlan& plan) {
    require_plan_spins(plan.n);
    detail::require_same_size(plan.target.traceless_part.spin_count(), plan.n);
    for (const auto& e : plan.experiments) {
        if (!std::isfinite(e.weight)) throw std::invalid_argument("experiment weight must be finite");
        for (const auto& s : e.steps) {
            validate_step(s, plan.n);
            if (!is_unitary_step(s)) {
                throw std::invalid_argument("gradient crushers are not allowed inside plan unitaries");
            }
        }
    }
}

struct SimulationResult {
    OperatorSum state{1};
    DenseOperator dense;
    IdentityReport report;
};

/// Weighted sum of every experiment's output, compared (traceless parts)
/// with the plan target.
inline SimulationResult simulate_plan(const PreparationPlan& plan, double tol = 1e-9) {
    validate_plan(plan);
    const int n = plan.n;
    const DenseOperator sigma = to_dense(zorder_state(n));
    DenseOperator acc = DenseOperator::zero(n);
    for (const auto& e : plan.experiments) {
        if (e.weight == 0.0) continue;
        acc.m += e.weight * evolve(sigma, e.steps).m;
    }
    // Compare traceless parts only.
    DenseOperator traceless = acc;
    const Complex mean = acc.m.trace() / static_cast<double>(acc.dim());
    traceless.m.diagonal().array() -= mean;
    const double residual = max_abs_diff(traceless, to_dense(plan.target.traceless_part));
    SimulationResult out;
    out.state = from_dense(acc, 1e-12);
    out.dense = acc;
    out.report = make_report(IdentityId::kPlanSimulation, n,
                             to_string(plan.scheme) + ", " +
                                 std::to_string(plan.experiments.size()) + " experiments",
                             residual, tol);
    return out;
}

/// [sigma_+, N D0]_+ with sigma_+ = 2^(n-1) I_1y ... I_ny, in ladder form.
inline LadderSum max_entanglement_state(int n) {
    if (n < 2) throw DimensionError("max_entanglement_state needs n >= 2");
    const OperatorSum sigma_plus = multibody_generator(n, all_spins(n), Axis::kY);
    return to_ladder(anticommutator(sigma_plus, lomso_expand(n)));
}

}  // namespace epsprep
