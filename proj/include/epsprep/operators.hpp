#pragma once

// Named operators used by the preparation scheme, in symbolic and dense form.

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "epsprep/dense_engine.hpp"
#include "epsprep/pauli_algebra.hpp"

namespace epsprep {

enum class Axis { kX, kY, kZ };

inline Factor to_factor(Axis a) {
    return a == Axis::kX ? Factor::X : (a == Axis::kY ? Factor::Y : Factor::Z);
}

inline char axis_char(Axis a) { return a == Axis::kX ? 'x' : (a == Axis::kY ? 'y' : 'z'); }

inline Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::kX;
    if (s == "y") return Axis::kY;
    if (s == "z") return Axis::kZ;
    throw std::invalid_argument("axis must be x, y or z; got '" + s + "'");
}

/// Spins are 0-based here; subsets must be nonempty, sorted, duplicate-free.
inline void require_spin_subset(int n, const std::vector<int>& spins) {
    if (spins.empty()) throw std::invalid_argument("spin subset must be nonempty");
    if (!std::is_sorted(spins.begin(), spins.end()) ||
        std::adjacent_find(spins.begin(), spins.end()) != spins.end()) {
        throw std::invalid_argument("spin subset must be sorted and duplicate-free");
    }
    if (spins.front() < 0 || spins.back() >= n) {
        throw DimensionError("spin subset exceeds the system size");
    }
}

inline std::vector<int> all_spins(int n) {
    std::vector<int> s(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = k;
    return s;
}

/// F_mu = sum_k I_k,mu.
inline OperatorSum collective(int n, Axis axis) {
    OperatorSum out(n);
    for (int k = 0; k < n; ++k) out.add(factors_on(n, {k}, to_factor(axis)), 1.0);
    return out;
}

/// 2^(m-1) prod_{k in S} I_k,mu.
inline OperatorSum multibody_generator(int n, const std::vector<int>& spins, Axis axis) {
    require_spin_subset(n, spins);
    OperatorSum out(n);
    out.add(factors_on(n, spins, to_factor(axis)),
            std::ldexp(1.0, static_cast<int>(spins.size()) - 1));
    return out;
}

/// The longitudinal n-spin order 2^(n-1) I_1z ... I_nz.
inline OperatorSum zorder_state(int n) { return multibody_generator(n, all_spins(n), Axis::kZ); }

/// exp(-i theta G) for a Hermitian generator.
inline DenseOperator rotation(const OperatorSum& generator, double theta) {
    return matrix_exponential(to_dense(generator), Complex{0.0, -theta}, MatrixKind::kHermitian);
}

/// All-ones matrix.
inline DenseOperator build_q(int n) {
    require_dense_spins(n);
    return {n, Matrix::Ones(dim_for(n), dim_for(n))};
}

/// exp(-i alpha Q) = E - (1 - e^(-i alpha N)) Q / N. Pass -alpha for exp(+i alpha Q).
inline DenseOperator exp_alpha_q(int n, double alpha) {
    const double big_n = static_cast<double>(dim_for(n));
    const Complex c = (1.0 - std::exp(Complex{0.0, -alpha * big_n})) / big_n;
    DenseOperator out = DenseOperator::identity(n);
    out.m.array() -= c;
    return out;
}

inline void require_basis_index(int n, Eigen::Index s) {
    if (s < 0 || s >= dim_for(n)) {
        throw DimensionError("basis index " + std::to_string(s) + " out of range for n = " +
                             std::to_string(n));
    }
}

/// Projector onto basis state s: prod_k (E +/- 2 I_kz) / 2.
inline OperatorSum build_ds_symbolic(int n, Eigen::Index s) {
    require_dense_spins(n);
    require_basis_index(n, s);
    OperatorSum out = OperatorSum::identity(n);
    for (int k = 0; k < n; ++k) {
        const bool down = (s >> spin_bit(n, k)) & 1;
        OperatorSum site = OperatorSum::identity(n, 0.5);
        site.add(factors_on(n, {k}, Factor::Z), down ? -1.0 : 1.0);
        out = out * site;
    }
    return out;
}

inline DenseOperator build_ds(int n, Eigen::Index s) {
    require_basis_index(n, s);
    DenseOperator out = DenseOperator::zero(n);
    out.m(s, s) = 1.0;
    return out;
}

/// N D0 = E + sum 2 I_kz + sum 4 I_kz I_lz + ..., one term per spin subset.
inline OperatorSum lomso_expand(int n) {
    OperatorSum out(n);
    const unsigned subsets = 1U << n;
    for (unsigned mask = 0; mask < subsets; ++mask) {
        FactorString f(static_cast<std::size_t>(n), Factor::E);
        int size = 0;
        for (int k = 0; k < n; ++k) {
            if (mask & (1U << k)) {
                f[static_cast<std::size_t>(k)] = Factor::Z;
                ++size;
            }
        }
        out.add(f, std::ldexp(1.0, size));
    }
    return out;
}

/// Grover phase flip diag(-1, 1, ..., 1).
inline DenseOperator build_r(int n) {
    DenseOperator out = DenseOperator::identity(n);
    out.m(0, 0) = -1.0;
    return out;
}

/// n-fold tensor power of the one-qubit Hadamard.
inline DenseOperator build_w(int n) {
    require_dense_spins(n);
    Matrix w = Matrix::Ones(1, 1);
    const Matrix h = kernel::hadamard_2x2();
    for (int k = 0; k < n; ++k) {
        Matrix next(w.rows() * 2, w.cols() * 2);
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = 0; j < w.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = w(i, j) * h;
        }
        w = std::move(next);
    }
    return {n, std::move(w)};
}

/// D = W R W.
inline DenseOperator build_diffusion(int n) {
    const DenseOperator w = build_w(n);
    return w * build_r(n) * w;
}

/// exp(-i theta 2^(|S|-1) prod_{k in S} I_k,mu).
inline DenseOperator multibody_propagator(int n, const std::vector<int>& spins, Axis axis,
                                          double theta) {
    return rotation(multibody_generator(n, spins, axis), theta);
}

/// G_kl(lambda) = exp(-i lambda 2 I_kz I_lz).
inline DenseOperator two_qubit_diagonal(int n, int k, int l, double lambda) {
    if (k == l) throw std::invalid_argument("two-qubit diagonal gate needs distinct spins");
    std::vector<int> s{std::min(k, l), std::max(k, l)};
    return rotation(multibody_generator(n, s, Axis::kZ), lambda);
}

// ---------------------------------------------------------------------------

namespace named {
struct Q {};
struct Ds {
    Eigen::Index s = 0;
};
struct R {};
struct W {};
struct Diffusion {};
struct F {
    Axis axis = Axis::kZ;
};
struct Multibody {
    std::vector<int> spins;
    Axis axis = Axis::kX;
    double theta = 0.0;
};
struct TwoQubitDiagonal {
    int k = 0;
    int l = 1;
    double lambda = 0.0;
};
}  // namespace named

using NamedOperator = std::variant<named::Q, named::Ds, named::R, named::W, named::Diffusion,
                                   named::F, named::Multibody, named::TwoQubitDiagonal>;

inline DenseOperator build_dense(const NamedOperator& op, int n) {
    struct Visitor {
        int n;
        DenseOperator operator()(const named::Q&) const { return build_q(n); }
        DenseOperator operator()(const named::Ds& d) const { return build_ds(n, d.s); }
        DenseOperator operator()(const named::R&) const { return build_r(n); }
        DenseOperator operator()(const named::W&) const { return build_w(n); }
        DenseOperator operator()(const named::Diffusion&) const { return build_diffusion(n); }
        DenseOperator operator()(const named::F& f) const { return to_dense(collective(n, f.axis)); }
        DenseOperator operator()(const named::Multibody& m) const {
            return multibody_propagator(n, m.spins, m.axis, m.theta);
        }
        DenseOperator operator()(const named::TwoQubitDiagonal& g) const {
            return two_qubit_diagonal(n, g.k, g.l, g.lambda);
        }
    };
    return std::visit(Visitor{n}, op);
}

}  // namespace epsprep
