#pragma once

// Machine checks of the derivation behind the preparation scheme. Every check
// evaluates both sides densely and reports the max-entry residual.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "epsprep/dense_engine.hpp"
#include "epsprep/operators.hpp"
#include "epsprep/pauli_algebra.hpp"
#include "epsprep/planner.hpp"
#include "epsprep/report.hpp"

namespace epsprep {

class PreconditionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// 1e-10, scaled by 2^(n-6) beyond six spins where coefficients reach 2^(n-1).
inline double default_identity_tolerance(int n) {
    return n > 6 ? std::ldexp(kDenseTolerance, n - 6) : kDenseTolerance;
}

/// Basis operator for a factor string: 2^(w-1) times the product (w >= 1), or E.
inline ProductTerm basis_term(const FactorString& factors) {
    const int w = weight(factors);
    return {w == 0 ? 1.0 : std::ldexp(1.0, w - 1), factors};
}

/// exp(i (pi/2) F_y) A exp(-i (pi/2) F_y), computed symbolically.
inline OperatorSum to_plus_frame(const OperatorSum& a) {
    OperatorSum out = a;
    const double theta = -std::numbers::pi / 2;
    for (int k = 0; k < a.spin_count(); ++k) {
        out = rotate(out, factors_on(a.spin_count(), {k}, Factor::Y), theta);
    }
    return out;
}

namespace detail {

inline DenseOperator anti(const DenseOperator& a, const DenseOperator& b) {
    return a * b + b * a;
}

inline DenseOperator comm(const DenseOperator& a, const DenseOperator& b) {
    return a * b - b * a;
}

inline Complex entry_sum(const DenseOperator& a) { return a.m.sum(); }

// exp(-i N alpha D0) for the canonical alpha = pi / N.
inline DenseOperator ground_phase(int n) {
    return matrix_exponential(build_ds(n, 0), Complex{0.0, -std::numbers::pi});
}

inline std::string describe_sum(const OperatorSum& a) { return to_string(a); }

}  // namespace detail

/// exp(-i alpha Q) sigma exp(i alpha Q) against its four-term expansion.
inline IdentityReport check_conjugation_expansion(const OperatorSum& sigma, double alpha,
                                                  std::optional<double> tol = std::nullopt) {
    const int n = sigma.spin_count();
    const double big_n = static_cast<double>(dim_for(n));
    const DenseOperator s = to_dense(sigma);
    const DenseOperator q = build_q(n);
    const DenseOperator u = matrix_exponential(q, Complex{0.0, -alpha}, MatrixKind::kHermitian);
    const DenseOperator lhs = u * s * u.adjoint();
    const double c = std::cos(alpha * big_n);
    const double sn = std::sin(alpha * big_n);
    const DenseOperator rhs = s - Complex{(1.0 - c) / big_n} * detail::anti(s, q) +
                              Complex{0.0, sn / big_n} * (s * q - q * s) +
                              Complex{((1.0 - c) * (1.0 - c) + sn * sn) / (big_n * big_n)} *
                                  (q * s * q);
    return make_report(IdentityId::kConjugationExpansion, n,
                       "sigma = " + detail::describe_sum(sigma) + ", alpha = " +
                           std::to_string(alpha),
                       max_abs_diff(lhs, rhs), tol.value_or(default_identity_tolerance(n)));
}

/// Closed form E - (1 - e^(-i alpha N)) Q / N against the dense exponential.
inline IdentityReport check_closed_form_exponential(int n, double alpha,
                                                    std::optional<double> tol = std::nullopt) {
    const DenseOperator reference = matrix_exponential(build_q(n), Complex{0.0, -alpha});
    return make_report(IdentityId::kClosedFormExponential, n,
                       "alpha = " + std::to_string(alpha),
                       max_abs_diff(exp_alpha_q(n, alpha), reference),
                       tol.value_or(1e-12));
}

/// Q A Q = f{A} Q.
inline IdentityReport check_sandwich_functional(const DenseOperator& a,
                                                std::optional<double> tol = std::nullopt) {
    const DenseOperator q = build_q(a.spin_count);
    const DenseOperator lhs = q * a * q;
    const DenseOperator rhs = detail::entry_sum(a) * q;
    return make_report(IdentityId::kSandwichFunctional, a.spin_count, "dense A",
                       max_abs_diff(lhs, rhs), tol.value_or(1e-11));
}

/// Q = N exp(-i (pi/2) F_y) D0 exp(i (pi/2) F_y).
inline IdentityReport check_q_decomposition(int n, std::optional<double> tol = std::nullopt) {
    const DenseOperator u = rotation(collective(n, Axis::kY), std::numbers::pi / 2);
    const DenseOperator rhs =
        Complex{static_cast<double>(dim_for(n))} * (u * build_ds(n, 0) * u.adjoint());
    return make_report(IdentityId::kQDecomposition, n, "F_y decomposition of Q",
                       max_abs_diff(build_q(n), rhs), tol.value_or(1e-11));
}

/// The rotated-frame rearrangement: coefficient * f{rho} D0 equals the
/// ground-phase conjugation of rho_+ minus rho_+ plus the bracket terms.
inline IdentityReport check_rotated_frame_expansion(const OperatorSum& rho, double alpha,
                                                    std::optional<double> tol = std::nullopt) {
    const int n = rho.spin_count();
    const double big_n = static_cast<double>(dim_for(n));
    const double c = std::cos(alpha * big_n);
    const double sn = std::sin(alpha * big_n);
    const DenseOperator plus = to_dense(to_plus_frame(rho));
    const DenseOperator d0 = build_ds(n, 0);
    const DenseOperator phase = matrix_exponential(d0, Complex{0.0, -big_n * alpha});
    const DenseOperator lhs =
        Complex{((1.0 - c) * (1.0 - c) + sn * sn) / big_n} * (f_functional(rho) * d0);
    const DenseOperator rhs = phase * plus * phase.adjoint() - plus +
                              Complex{1.0 - c} * detail::anti(plus, d0) -
                              Complex{0.0, sn} * detail::comm(plus, d0);
    return make_report(IdentityId::kRotatedFrameExpansion, n,
                       "rho = " + detail::describe_sum(rho) + ", alpha = " + std::to_string(alpha),
                       max_abs_diff(lhs, rhs), tol.value_or(default_identity_tolerance(n)));
}

/// With alpha = pi / N: for sigma0 in G checks the split
///   exp(-i pi D0) s+ exp(i pi D0) - s+ = -2 [s+, D0]_+,
/// and for sigma0 in G_x the general form with the (4/N) f{sigma0} D0 term,
/// which then holds with f != 0.
inline IdentityReport check_phase_flip_split(const ProductTerm& sigma0,
                                             std::optional<double> tol = std::nullopt) {
    const int n = sigma0.spin_count();
    require_dense_spins(n);
    const OperatorSum s0 = OperatorSum::from_term(sigma0);
    const DenseOperator plus = to_dense(to_plus_frame(s0));
    const DenseOperator d0 = build_ds(n, 0);
    const DenseOperator phase = detail::ground_phase(n);
    const DenseOperator moved = phase * plus * phase.adjoint() - plus;
    const GClass cls = classify_g(sigma0.factors);
    const Complex f = f_functional(s0);
    const double tolerance = tol.value_or(default_identity_tolerance(n));
    const std::string inputs = "sigma0 = " + to_string(sigma0.factors);
    if (cls == GClass::kInG) {
        const double r = max_abs_diff(moved, Complex{-2.0} * detail::anti(plus, d0));
        return make_report(IdentityId::kPhaseFlipSplit, n, inputs, r, tolerance, "branch G, f = 0");
    }
    const DenseOperator rhs = moved + Complex{2.0} * detail::anti(plus, d0);
    const DenseOperator lhs = (4.0 / static_cast<double>(dim_for(n)) * f) * d0;
    return make_report(IdentityId::kPhaseFlipIdentityBranch, n, inputs, max_abs_diff(lhs, rhs),
                       tolerance, "branch G_x, f = " + std::to_string(f.real()));
}

/// (2/N) [s+, N D0]_+ = s+ - (WDW) s+ (WDW) for sigma0 in G.
inline IdentityReport check_diffusion_anticommutator(const ProductTerm& sigma0,
                                                     std::optional<double> tol = std::nullopt) {
    const int n = sigma0.spin_count();
    if (classify_g(sigma0.factors) == GClass::kInGx) {
        throw PreconditionError("sigma0 = " + to_string(sigma0.factors) +
                                " is in G_x (only E and I_x factors); the identity needs f{sigma0} = 0");
    }
    const OperatorSum plus_sym = to_plus_frame(OperatorSum::from_term(sigma0));
    const DenseOperator plus = to_dense(plus_sym);
    const DenseOperator w = build_w(n);
    const DenseOperator wdw = w * build_diffusion(n) * w;
    const DenseOperator lhs = Complex{2.0 / static_cast<double>(dim_for(n))} *
                              to_dense(anticommutator(plus_sym, lomso_expand(n)));
    const DenseOperator rhs = plus - wdw * plus * wdw;
    return make_report(IdentityId::kDiffusionAnticommutator, n,
                       "sigma0 = " + to_string(sigma0.factors) + ", sigma+ = " +
                           detail::describe_sum(plus_sym),
                       max_abs_diff(lhs, rhs),
                       tol.value_or(default_identity_tolerance(n)));
}

/// prod I^- and prod I^+ over all spins.
inline OperatorSum all_lowering(int n) {
    LadderSum l(n);
    l.add(LadderString(static_cast<std::size_t>(n), LadderFactor::Minus), 1.0);
    return from_ladder(l);
}

inline OperatorSum all_raising(int n) {
    LadderSum l(n);
    l.add(LadderString(static_cast<std::size_t>(n), LadderFactor::Plus), 1.0);
    return from_ladder(l);
}

inline std::string residue_case_label(int n) {
    static const char* labels[] = {"4m", "4m+1", "4m+2", "4m+3"};
    return labels[n % 4];
}

/// The four-case form of [s+, N D0]_+ for s+ = 2^(n-1) I_1y ... I_ny:
/// 2^(n-1) times (M + P), i(M - P), -(M + P), -i(M - P) for n = 0..3 mod 4.
inline OperatorSum coherence_case_form(int n) {
    const OperatorSum m = all_lowering(n);
    const OperatorSum p = all_raising(n);
    const double scale = std::ldexp(1.0, n - 1);
    switch (n % 4) {
        case 0: return (m + p) * Complex{scale};
        case 1: return (m - p) * Complex{0.0, scale};
        case 2: return (m + p) * Complex{-scale};
        default: return (m - p) * Complex{0.0, -scale};
    }
}

inline IdentityReport check_coherence_table(int n, std::optional<double> tol = std::nullopt) {
    if (n < 2) throw PreconditionError("the coherence table needs n >= 2");
    const OperatorSum plus = multibody_generator(n, all_spins(n), Axis::kY);
    const OperatorSum computed = anticommutator(plus, lomso_expand(n));
    const double r = max_abs_diff(to_dense(computed), to_dense(coherence_case_form(n)));
    return make_report(IdentityId::kCoherenceTable, n, "sigma+ = 2^(n-1) I_1y...I_ny", r,
                       tol.value_or(default_identity_tolerance(n)),
                       "case " + residue_case_label(n) +
                           "; coefficient 2^(n-1) multiplies the whole bracket");
}

/// exp(-i theta F_z) (M + P) exp(i theta F_z) = i (M - P) with n theta = pi/2.
inline IdentityReport check_parity_rotation(int n, std::optional<double> theta = std::nullopt,
                                            std::optional<double> tol = std::nullopt) {
    if (n < 2 || n % 2 != 0) throw PreconditionError("the parity rotation applies to even n >= 2");
    const double angle = theta.value_or(std::numbers::pi / (2.0 * n));
    const OperatorSum m = all_lowering(n);
    const OperatorSum p = all_raising(n);
    const DenseOperator u = rotation(collective(n, Axis::kZ), angle);
    const DenseOperator lhs = u * to_dense(m + p) * u.adjoint();
    const DenseOperator rhs = to_dense((m - p) * Complex{0.0, 1.0});
    return make_report(IdentityId::kParityRotation, n, "theta = " + std::to_string(angle),
                       max_abs_diff(lhs, rhs), tol.value_or(default_identity_tolerance(n)));
}

/// exp(-i (pi/4) 2^n I_1x...I_nx) 2^(n-1) i (M - P) exp(+...) = (N/2)(D_0 - D_{N-1}).
inline IdentityReport check_label_conversion(int n, std::optional<double> tol = std::nullopt) {
    if (n < 2) throw PreconditionError("the label conversion needs n >= 2");
    const OperatorSum coherence = (all_lowering(n) - all_raising(n)) *
                                  Complex{0.0, std::ldexp(1.0, n - 1)};
    const DenseOperator u = multibody_propagator(n, all_spins(n), Axis::kX, std::numbers::pi / 2);
    const DenseOperator lhs = u * to_dense(coherence) * u.adjoint();
    const auto big_n = dim_for(n);
    const DenseOperator rhs =
        Complex{static_cast<double>(big_n) / 2.0} * (build_ds(n, 0) - build_ds(n, big_n - 1));
    return make_report(IdentityId::kLabelConversion, n, "n-quantum coherence", max_abs_diff(lhs, rhs),
                       tol.value_or(default_identity_tolerance(n)));
}

}  // namespace epsprep
