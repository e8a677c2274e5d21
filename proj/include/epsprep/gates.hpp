#pragma once

// Lowering of preparation steps to one-qubit rotations and the two-qubit
// diagonal gate G_kl(lambda) = exp(-i lambda 2 I_kz I_lz).

#include <cstdint>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "epsprep/angle.hpp"
#include "epsprep/dense_engine.hpp"
#include "epsprep/operators.hpp"
#include "epsprep/pauli_algebra.hpp"
#include "epsprep/report.hpp"
#include "epsprep/steps.hpp"

namespace epsprep {

namespace gate {
/// exp(-i angle I_spin,axis).
struct OneQubit {
    int spin = 0;
    Axis axis = Axis::kZ;
    Angle angle;
};
/// exp(-i lambda 2 I_kz I_lz).
struct Diagonal2 {
    int k = 0;
    int l = 1;
    Angle lambda;
};
}  // namespace gate

using Gate = std::variant<gate::OneQubit, gate::Diagonal2>;

/// global_phase * (last gate) ... (first gate).
struct GateSequence {
    int n = 1;
    std::vector<Gate> gates;
    Complex global_phase{1.0, 0.0};

    GateSequence& append(const GateSequence& other) {
        detail::require_same_size(n, other.n);
        gates.insert(gates.end(), other.gates.begin(), other.gates.end());
        global_phase *= other.global_phase;
        return *this;
    }
};

class NotCompilable : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline void validate_gate(const Gate& g, int n) {
    if (const auto* one = std::get_if<gate::OneQubit>(&g)) {
        if (one->spin < 0 || one->spin >= n) throw DimensionError("gate spin out of range");
        return;
    }
    const auto& two = std::get<gate::Diagonal2>(g);
    if (two.k < 0 || two.k >= n || two.l < 0 || two.l >= n || two.k == two.l) {
        throw DimensionError("diagonal gate needs two distinct spins in range");
    }
}

namespace detail {

inline Gate rot(int spin, Axis axis, Angle angle) { return gate::OneQubit{spin, axis, angle}; }

inline const Angle kQuarterTurn = Angle::pi_fraction(1, 2);

/// exp(-i phi 2 I_ay I_bz) = Rx_a(-pi/2) G_ab(phi) Rx_a(pi/2).
inline void append_bilinear_yz(GateSequence& seq, int a, int b, Angle phi) {
    seq.gates.push_back(rot(a, Axis::kX, kQuarterTurn));
    seq.gates.push_back(gate::Diagonal2{a, b, phi});
    seq.gates.push_back(rot(a, Axis::kX, -kQuarterTurn));
}

}  // namespace detail

/// exp(-i theta 2^(|S|-1) prod_{k in S} I_kz). Strings longer than two are
/// nested: C zstring(S minus b) C^dag with C mapping I_az to 2 I_az I_bz.
inline GateSequence compile_zstring(const std::vector<int>& spins, Angle theta, int n) {
    require_spin_subset(n, spins);
    GateSequence seq{n, {}, 1.0};
    if (spins.size() == 1) {
        seq.gates.push_back(detail::rot(spins[0], Axis::kZ, theta));
        return seq;
    }
    if (spins.size() == 2) {
        seq.gates.push_back(gate::Diagonal2{spins[0], spins[1], theta});
        return seq;
    }
    std::vector<int> inner(spins.begin(), spins.end() - 1);
    const int b = spins.back();
    const int a = inner.back();
    seq.gates.push_back(detail::rot(a, Axis::kY, detail::kQuarterTurn));
    detail::append_bilinear_yz(seq, a, b, -detail::kQuarterTurn);
    seq.append(compile_zstring(inner, theta, n));
    detail::append_bilinear_yz(seq, a, b, detail::kQuarterTurn);
    seq.gates.push_back(detail::rot(a, Axis::kY, -detail::kQuarterTurn));
    return seq;
}

namespace detail {

inline GateSequence compile_multibody(const std::vector<int>& spins, Axis axis, Angle theta, int n) {
    if (axis == Axis::kZ) return compile_zstring(spins, theta, n);
    // Ry(pi/2) takes I_z to I_x; Rx(-pi/2) takes I_z to I_y.
    const Axis frame = axis == Axis::kX ? Axis::kY : Axis::kX;
    const Angle into = axis == Axis::kX ? -kQuarterTurn : kQuarterTurn;
    GateSequence seq{n, {}, 1.0};
    for (int k : spins) seq.gates.push_back(rot(k, frame, into));
    seq.append(compile_zstring(spins, theta, n));
    for (int k : spins) seq.gates.push_back(rot(k, frame, -into));
    return seq;
}

/// H = i Ry(pi/2) Rz(pi) on every spin.
inline GateSequence compile_walsh_hadamard(int n) {
    GateSequence seq{n, {}, 1.0};
    for (int k = 0; k < n; ++k) {
        seq.gates.push_back(rot(k, Axis::kZ, Angle::pi_fraction(1, 1)));
        seq.gates.push_back(rot(k, Axis::kY, kQuarterTurn));
        seq.global_phase *= Complex{0.0, 1.0};
    }
    return seq;
}

/// R = exp(i pi D0) with N D0 = E + sum over nonempty T of 2^|T| prod_T I_z,
/// so R = e^(i pi / N) prod_T zstring(T, -2 pi / N).
inline GateSequence compile_phase_flip(int n) {
    const std::int64_t big_n = std::int64_t{1} << n;
    GateSequence seq{n, {}, std::exp(Complex{0.0, std::numbers::pi / static_cast<double>(big_n)})};
    const Angle theta = Angle::pi_fraction(-2, big_n);
    for (std::int64_t mask = 1; mask < big_n; ++mask) {
        std::vector<int> t;
        for (int k = 0; k < n; ++k) {
            if (mask & (std::int64_t{1} << k)) t.push_back(k);
        }
        seq.append(compile_zstring(t, theta, n));
    }
    return seq;
}

}  // namespace detail

inline GateSequence compile_step(const UnitaryStep& s, int n) {
    validate_step(s, n);
    return std::visit(
        [n](const auto& st) -> GateSequence {
            using T = std::decay_t<decltype(st)>;
            GateSequence seq{n, {}, 1.0};
            if constexpr (std::is_same_v<T, step::OneQubitRotation>) {
                seq.gates.push_back(detail::rot(st.spin, st.axis, st.angle));
            } else if constexpr (std::is_same_v<T, step::CollectiveRotation>) {
                for (int k : st.spins) seq.gates.push_back(detail::rot(k, st.axis, st.angle));
            } else if constexpr (std::is_same_v<T, step::CollectiveZRotation>) {
                for (int k = 0; k < n; ++k) seq.gates.push_back(detail::rot(k, Axis::kZ, st.angle));
            } else if constexpr (std::is_same_v<T, step::WalshHadamard>) {
                seq = detail::compile_walsh_hadamard(n);
            } else if constexpr (std::is_same_v<T, step::PhaseFlipR>) {
                seq = detail::compile_phase_flip(n);
            } else if constexpr (std::is_same_v<T, step::Diffusion>) {
                seq = detail::compile_walsh_hadamard(n);
                seq.append(detail::compile_phase_flip(n));
                seq.append(detail::compile_walsh_hadamard(n));
            } else if constexpr (std::is_same_v<T, step::MultibodyPropagator>) {
                seq = detail::compile_multibody(st.spins, st.axis, st.angle, n);
            } else if constexpr (std::is_same_v<T, step::TwoQubitDiagonal>) {
                seq.gates.push_back(gate::Diagonal2{st.k, st.l, st.lambda});
            } else {
                throw NotCompilable("gradient crusher is a channel, not a unitary");
            }
            return seq;
        },
        s);
}

inline GateSequence compile_steps(const std::vector<UnitaryStep>& steps, int n) {
    GateSequence seq{n, {}, 1.0};
    for (const auto& s : steps) seq.append(compile_step(s, n));
    return seq;
}

// ---------------------------------------------------------------------------
// Recomposition and verification.

namespace detail {

inline void left_gate(Matrix& m, const Gate& g, int n) {
    validate_gate(g, n);
    if (const auto* one = std::get_if<gate::OneQubit>(&g)) {
        kernel::left_one_qubit(m, n, one->spin,
                               kernel::rotation_2x2(axis_char(one->axis), one->angle.radians()));
        return;
    }
    const auto& two = std::get<gate::Diagonal2>(g);
    const std::uint64_t mask =
        (std::uint64_t{1} << spin_bit(n, two.k)) | (std::uint64_t{1} << spin_bit(n, two.l));
    kernel::left_pauli_exponential(m, 0, mask, two.lambda.radians() / 2);
}

}  // namespace detail

/// Dense product of the sequence including its global phase.
inline DenseOperator recompose(const GateSequence& seq) {
    DenseOperator u = DenseOperator::identity(seq.n);
    for (const auto& g : seq.gates) detail::left_gate(u.m, g, seq.n);
    u.m *= seq.global_phase;
    return u;
}

inline IdentityReport verify_compilation(const DenseOperator& target, const GateSequence& seq,
                                         double tol = 1e-9, std::string inputs = "unitary") {
    const double r = phase_insensitive_diff(recompose(seq), target);
    return make_report(IdentityId::kCompilation, seq.n, std::move(inputs), r, tol,
                       std::to_string(seq.gates.size()) + " gates");
}

inline IdentityReport verify_compilation(const UnitaryStep& s, const GateSequence& seq,
                                         double tol = 1e-9) {
    return verify_compilation(step_unitary(s, seq.n), seq, tol, describe(s));
}

// ---------------------------------------------------------------------------
// Symbolic evolution.

inline FactorString gate_generator(const Gate& g, int n) {
    if (const auto* one = std::get_if<gate::OneQubit>(&g)) {
        return factors_on(n, {one->spin}, to_factor(one->axis));
    }
    const auto& two = std::get<gate::Diagonal2>(g);
    return factors_on(n, {two.k, two.l}, Factor::Z);
}

inline double gate_angle(const Gate& g) {
    if (const auto* one = std::get_if<gate::OneQubit>(&g)) return one->angle.radians();
    return std::get<gate::Diagonal2>(g).lambda.radians();
}

/// U A U^dag for the sequence's unitary, exact per term.
inline OperatorSum apply_gates_symbolic(const OperatorSum& a, const GateSequence& seq) {
    detail::require_same_size(a.spin_count(), seq.n);
    OperatorSum out = a;
    for (const auto& g : seq.gates) {
        validate_gate(g, seq.n);
        out = rotate(out, gate_generator(g, seq.n), gate_angle(g));
    }
    return out;
}

/// Symbolic evolution through planner steps. Pauli-generated steps rotate term
/// by term; W, D and R go through the dense route; the crusher keeps only the
/// LOMSO part.
inline OperatorSum evolve_symbolic(const OperatorSum& a, const std::vector<UnitaryStep>& steps) {
    const int n = a.spin_count();
    OperatorSum out = a;
    for (const auto& s : steps) {
        validate_step(s, n);
        if (!is_unitary_step(s)) {
            out = crush_transverse(out);
        } else if (std::holds_alternative<step::WalshHadamard>(s) ||
                   std::holds_alternative<step::Diffusion>(s) ||
                   std::holds_alternative<step::PhaseFlipR>(s)) {
            out = from_dense(unitary_conjugate(step_unitary(s, n), to_dense(out)), 1e-12);
        } else {
            out = apply_gates_symbolic(out, compile_step(s, n));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// State-preparation chains.

/// I_1z -> 2^(n-1) I_1z ... I_nz: for k = 1 .. n-1, exp(-i (pi/2) 2 I_ky I_k+1,z)
/// then a -pi/2 rotation about y on spin k.
inline GateSequence equilibrium_to_order_sequence(int n) {
    if (n < 2) throw std::invalid_argument("the order chain needs n >= 2");
    require_dense_spins(n);
    GateSequence seq{n, {}, 1.0};
    for (int k = 0; k + 1 < n; ++k) {
        detail::append_bilinear_yz(seq, k, k + 1, detail::kQuarterTurn);
        seq.gates.push_back(detail::rot(k, Axis::kY, -detail::kQuarterTurn));
    }
    return seq;
}

/// Symbolic states after every labeled operation of the chain, starting
/// with I_1z (2n - 1 entries).
inline std::vector<OperatorSum> equilibrium_to_order_chain(int n) {
    if (n < 2) throw std::invalid_argument("the order chain needs n >= 2");
    std::vector<OperatorSum> states;
    OperatorSum cur(n);
    cur.add(factors_on(n, {0}, Factor::Z), 1.0);
    states.push_back(cur);
    for (int k = 0; k + 1 < n; ++k) {
        FactorString bilinear(static_cast<std::size_t>(n), Factor::E);
        bilinear[static_cast<std::size_t>(k)] = Factor::Y;
        bilinear[static_cast<std::size_t>(k + 1)] = Factor::Z;
        cur = rotate(cur, bilinear, std::numbers::pi / 2);
        states.push_back(cur);
        cur = rotate(cur, factors_on(n, {k}, Factor::Y), -std::numbers::pi / 2);
        states.push_back(cur);
    }
    return states;
}

/// From sum_j I_jz: selective pi/2 about x on spin k, collective -pi/2 about
/// x, then the crusher. Leaves I_kz.
inline std::vector<UnitaryStep> selective_prep_sequence(int n, int k) {
    require_dense_spins(n);
    if (k < 0 || k >= n) throw DimensionError("selected spin out of range");
    return {step::OneQubitRotation{k, Axis::kX, detail::kQuarterTurn},
            step::CollectiveRotation{all_spins(n), Axis::kX, -detail::kQuarterTurn},
            step::GradientCrusher{}};
}

}  // namespace epsprep
