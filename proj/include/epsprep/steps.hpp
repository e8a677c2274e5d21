#pragma once

// Elements of preparation circuits. Each step has two independent dense
// routes: step_unitary() exponentiates its generator with the oracle, and
// apply_step() acts on a density matrix through the structured kernels.

#include <cstdint>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "epsprep/angle.hpp"
#include "epsprep/dense_engine.hpp"
#include "epsprep/operators.hpp"

namespace epsprep {

namespace step {
/// exp(-i angle I_k,axis).
struct OneQubitRotation {
    int spin = 0;
    Axis axis = Axis::kX;
    Angle angle;
};
/// exp(-i angle sum_{k in S} I_k,axis).
struct CollectiveRotation {
    std::vector<int> spins;
    Axis axis = Axis::kX;
    Angle angle;
};
struct WalshHadamard {};
/// D = W R W.
struct Diffusion {};
struct PhaseFlipR {};
/// exp(-i angle 2^(|S|-1) prod_{k in S} I_k,axis).
struct MultibodyPropagator {
    std::vector<int> spins;
    Axis axis = Axis::kX;
    Angle angle;
};
/// exp(-i lambda 2 I_kz I_lz).
struct TwoQubitDiagonal {
    int k = 0;
    int l = 1;
    Angle lambda;
};
/// exp(-i angle F_z).
struct CollectiveZRotation {
    Angle angle;
};
/// Field-gradient dephasing; a channel, not a unitary.
struct GradientCrusher {};
}  // namespace step

using UnitaryStep =
    std::variant<step::OneQubitRotation, step::CollectiveRotation, step::WalshHadamard,
                 step::Diffusion, step::PhaseFlipR, step::MultibodyPropagator,
                 step::TwoQubitDiagonal, step::CollectiveZRotation, step::GradientCrusher>;

inline bool is_unitary_step(const UnitaryStep& s) {
    return !std::holds_alternative<step::GradientCrusher>(s);
}

inline void validate_step(const UnitaryStep& s, int n) {
    std::visit(
        [n](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, step::OneQubitRotation>) {
                if (st.spin < 0 || st.spin >= n) throw DimensionError("rotation spin out of range");
            } else if constexpr (std::is_same_v<T, step::CollectiveRotation> ||
                                 std::is_same_v<T, step::MultibodyPropagator>) {
                require_spin_subset(n, st.spins);
            } else if constexpr (std::is_same_v<T, step::TwoQubitDiagonal>) {
                if (st.k < 0 || st.k >= n || st.l < 0 || st.l >= n || st.k == st.l) {
                    throw DimensionError("two-qubit diagonal needs two distinct spins in range");
                }
            }
        },
        s);
}

inline std::string describe(const UnitaryStep& s) {
    std::ostringstream os;
    auto spins_str = [](const std::vector<int>& spins) {
        std::string out = "{";
        for (std::size_t i = 0; i < spins.size(); ++i) {
            out += (i ? "," : "") + std::to_string(spins[i] + 1);
        }
        return out + "}";
    };
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, step::OneQubitRotation>) {
                os << "rot(" << st.spin + 1 << ", " << axis_char(st.axis) << ", " << st.angle.str()
                   << ")";
            } else if constexpr (std::is_same_v<T, step::CollectiveRotation>) {
                os << "collective(" << spins_str(st.spins) << ", " << axis_char(st.axis) << ", "
                   << st.angle.str() << ")";
            } else if constexpr (std::is_same_v<T, step::WalshHadamard>) {
                os << "W";
            } else if constexpr (std::is_same_v<T, step::Diffusion>) {
                os << "D";
            } else if constexpr (std::is_same_v<T, step::PhaseFlipR>) {
                os << "R";
            } else if constexpr (std::is_same_v<T, step::MultibodyPropagator>) {
                os << "multibody(" << spins_str(st.spins) << ", " << axis_char(st.axis) << ", "
                   << st.angle.str() << ")";
            } else if constexpr (std::is_same_v<T, step::TwoQubitDiagonal>) {
                os << "G(" << st.k + 1 << "," << st.l + 1 << ", " << st.lambda.str() << ")";
            } else if constexpr (std::is_same_v<T, step::CollectiveZRotation>) {
                os << "zrot(" << st.angle.str() << ")";
            } else {
                os << "crusher";
            }
        },
        s);
    return os.str();
}

/// Oracle unitary of one step, built from generators with matrix_exponential.
inline DenseOperator step_unitary(const UnitaryStep& s, int n) {
    validate_step(s, n);
    return std::visit(
        [n](const auto& st) -> DenseOperator {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, step::OneQubitRotation>) {
                return rotation(multibody_generator(n, {st.spin}, st.axis), st.angle.radians());
            } else if constexpr (std::is_same_v<T, step::CollectiveRotation>) {
                OperatorSum g(n);
                for (int k : st.spins) g.add(factors_on(n, {k}, to_factor(st.axis)), 1.0);
                return rotation(g, st.angle.radians());
            } else if constexpr (std::is_same_v<T, step::WalshHadamard>) {
                return build_w(n);
            } else if constexpr (std::is_same_v<T, step::Diffusion>) {
                return build_diffusion(n);
            } else if constexpr (std::is_same_v<T, step::PhaseFlipR>) {
                return build_r(n);
            } else if constexpr (std::is_same_v<T, step::MultibodyPropagator>) {
                return multibody_propagator(n, st.spins, st.axis, st.angle.radians());
            } else if constexpr (std::is_same_v<T, step::TwoQubitDiagonal>) {
                return two_qubit_diagonal(n, st.k, st.l, st.lambda.radians());
            } else if constexpr (std::is_same_v<T, step::CollectiveZRotation>) {
                return rotation(collective(n, Axis::kZ), st.angle.radians());
            } else {
                throw ContractViolation("gradient crusher is a channel and has no unitary");
            }
        },
        s);
}

/// Oracle product of a step list applied in order (first step acts first).
inline DenseOperator steps_unitary(const std::vector<UnitaryStep>& steps, int n) {
    DenseOperator u = DenseOperator::identity(n);
    for (const auto& s : steps) u = step_unitary(s, n) * u;
    return u;
}

namespace detail {

inline std::uint64_t spin_mask(int n, const std::vector<int>& spins) {
    std::uint64_t m = 0;
    for (int k : spins) m |= std::uint64_t{1} << spin_bit(n, k);
    return m;
}

inline void left_walsh_hadamard(Matrix& m, int n) {
    const Eigen::Matrix2cd h = kernel::hadamard_2x2();
    for (int k = 0; k < n; ++k) kernel::left_one_qubit(m, n, k, h);
}

inline void left_phase_flip(Matrix& m) { m.row(0) *= -1.0; }

inline void left_step(Matrix& m, const UnitaryStep& s, int n) {
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, step::OneQubitRotation>) {
                kernel::left_one_qubit(m, n, st.spin,
                                       kernel::rotation_2x2(axis_char(st.axis), st.angle.radians()));
            } else if constexpr (std::is_same_v<T, step::CollectiveRotation>) {
                const auto u = kernel::rotation_2x2(axis_char(st.axis), st.angle.radians());
                for (int k : st.spins) kernel::left_one_qubit(m, n, k, u);
            } else if constexpr (std::is_same_v<T, step::WalshHadamard>) {
                left_walsh_hadamard(m, n);
            } else if constexpr (std::is_same_v<T, step::Diffusion>) {
                left_walsh_hadamard(m, n);
                left_phase_flip(m);
                left_walsh_hadamard(m, n);
            } else if constexpr (std::is_same_v<T, step::PhaseFlipR>) {
                left_phase_flip(m);
            } else if constexpr (std::is_same_v<T, step::MultibodyPropagator>) {
                // theta 2^(m-1) prod I = (theta / 2) sigma_P.
                const std::uint64_t mask = spin_mask(n, st.spins);
                const std::uint64_t flip = st.axis == Axis::kZ ? 0 : mask;
                const std::uint64_t phase = st.axis == Axis::kX ? 0 : mask;
                kernel::left_pauli_exponential(m, flip, phase, st.angle.radians() / 2);
            } else if constexpr (std::is_same_v<T, step::TwoQubitDiagonal>) {
                const std::uint64_t mask = spin_mask(n, {st.k}) | spin_mask(n, {st.l});
                kernel::left_pauli_exponential(m, 0, mask, st.lambda.radians() / 2);
            } else if constexpr (std::is_same_v<T, step::CollectiveZRotation>) {
                const auto u = kernel::rotation_2x2('z', st.angle.radians());
                for (int k = 0; k < n; ++k) kernel::left_one_qubit(m, n, k, u);
            } else {
                throw ContractViolation("gradient crusher has no left action");
            }
        },
        s);
}

}  // namespace detail

/// rho -> U rho U^dag for unitary steps; the crusher removes every component
/// of nonzero coherence order.
inline void apply_step(Matrix& rho, const UnitaryStep& s, int n) {
    validate_step(s, n);
    if (!is_unitary_step(s)) {
        kernel::crush_nonzero_coherence(rho);
        return;
    }
    kernel::conjugate(rho, [&](Matrix& m) { detail::left_step(m, s, n); });
}

inline DenseOperator evolve(const DenseOperator& rho, const std::vector<UnitaryStep>& steps) {
    Matrix m = rho.m;
    for (const auto& s : steps) apply_step(m, s, rho.spin_count);
    return {rho.spin_count, std::move(m)};
}

/// Unitary of a step list through the structured kernels.
inline DenseOperator structured_unitary(const std::vector<UnitaryStep>& steps, int n) {
    DenseOperator u = DenseOperator::identity(n);
    for (const auto& s : steps) {
        validate_step(s, n);
        detail::left_step(u.m, s, n);
    }
    return u;
}

}  // namespace epsprep
