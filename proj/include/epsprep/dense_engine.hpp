#pragma once

// Dense 2^n x 2^n operators: the numerical ground truth that every symbolic
// identity and compiled circuit is checked against.
//
// Basis index convention: |00...0> is index 0 and spin 1 is the most
// significant bit, so spin k (0-based) lives at bit (n - 1 - k).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "epsprep/pauli_algebra.hpp"

namespace epsprep {

using Matrix = Eigen::MatrixXcd;

inline constexpr int kMaxDenseSpins = 10;
inline constexpr double kDenseTolerance = 1e-10;
inline constexpr double kStructureTolerance = 1e-12;

class ContractViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

inline void require_dense_spins(int n) {
    if (n < 1 || n > kMaxDenseSpins) {
        throw DimensionError("dense work supports 1 <= n <= " + std::to_string(kMaxDenseSpins) +
                             ", got n = " + std::to_string(n));
    }
}

inline Eigen::Index dim_for(int n) { return Eigen::Index{1} << n; }

/// Bit position of 0-based spin k in a basis index.
inline int spin_bit(int n, int k) { return n - 1 - k; }

struct DenseOperator {
    int spin_count = 1;
    Matrix m;

    Eigen::Index dim() const { return m.rows(); }

    static DenseOperator zero(int n) {
        require_dense_spins(n);
        return {n, Matrix::Zero(dim_for(n), dim_for(n))};
    }

    static DenseOperator identity(int n) {
        require_dense_spins(n);
        return {n, Matrix::Identity(dim_for(n), dim_for(n))};
    }

    static DenseOperator wrap(int n, Matrix m) {
        require_dense_spins(n);
        if (m.rows() != dim_for(n) || m.cols() != dim_for(n)) {
            throw DimensionError("matrix shape does not match 2^n for n = " + std::to_string(n));
        }
        return {n, std::move(m)};
    }

    DenseOperator adjoint() const { return {spin_count, m.adjoint()}; }

    friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
        detail::require_same_size(a.spin_count, b.spin_count);
        return {a.spin_count, a.m * b.m};
    }
    friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
        detail::require_same_size(a.spin_count, b.spin_count);
        return {a.spin_count, a.m + b.m};
    }
    friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
        detail::require_same_size(a.spin_count, b.spin_count);
        return {a.spin_count, a.m - b.m};
    }
    friend DenseOperator operator*(Complex s, const DenseOperator& a) {
        return {a.spin_count, s * a.m};
    }
};

/// Max-entry absolute difference.
inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
    detail::require_same_size(a.spin_count, b.spin_count);
    return (a.m - b.m).cwiseAbs().maxCoeff();
}

inline double max_abs(const DenseOperator& a) { return a.m.cwiseAbs().maxCoeff(); }

/// min over unit phases p of max |a - p b|, with p taken from the ratio at the
/// largest-magnitude entry of b.
inline double phase_insensitive_diff(const DenseOperator& a, const DenseOperator& b) {
    detail::require_same_size(a.spin_count, b.spin_count);
    Eigen::Index r = 0, c = 0;
    b.m.cwiseAbs().maxCoeff(&r, &c);
    const Complex ref = b.m(r, c);
    if (std::abs(ref) == 0.0) return max_abs(a);
    Complex ratio = a.m(r, c) / ref;
    const double mag = std::abs(ratio);
    const Complex phase = mag > 0.0 ? ratio / mag : Complex{1.0, 0.0};
    return (a.m - phase * b.m).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const DenseOperator& a, double tol = kStructureTolerance) {
    return (a.m - a.m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const DenseOperator& u, double tol = kStructureTolerance) {
    const Matrix id = Matrix::Identity(u.dim(), u.dim());
    return (u.m.adjoint() * u.m - id).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_diagonal(const DenseOperator& a, double tol = 0.0) {
    for (Eigen::Index j = 0; j < a.m.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.m.rows(); ++i) {
            if (i != j && std::abs(a.m(i, j)) > tol) return false;
        }
    }
    return true;
}

/// Kronecker assembly of every term; each product term has one nonzero per row.
inline DenseOperator to_dense(const OperatorSum& a) {
    const int n = a.spin_count();
    DenseOperator out = DenseOperator::zero(n);
    const Eigen::Index dim = out.dim();
    for (const auto& [factors, coeff] : a.terms()) {
        std::uint64_t flip = 0;
        for (int k = 0; k < n; ++k) {
            const Factor f = factors[static_cast<std::size_t>(k)];
            if (f == Factor::X || f == Factor::Y) flip |= std::uint64_t{1} << spin_bit(n, k);
        }
        for (Eigen::Index i = 0; i < dim; ++i) {
            Complex v = coeff;
            for (int k = 0; k < n; ++k) {
                const bool up = ((static_cast<std::uint64_t>(i) >> spin_bit(n, k)) & 1U) == 0;
                switch (factors[static_cast<std::size_t>(k)]) {
                    case Factor::E: break;
                    case Factor::X: v *= 0.5; break;
                    case Factor::Y: v *= up ? Complex{0.0, -0.5} : Complex{0.0, 0.5}; break;
                    case Factor::Z: v *= up ? 0.5 : -0.5; break;
                }
            }
            out.m(i, static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ flip)) += v;
        }
    }
    return out;
}

/// Projects onto the product basis: c_B = Tr(B^dag A) / Tr(B^dag B). One
/// Walsh-Hadamard transform per flip pattern, O(N^2 log N) overall.
inline OperatorSum from_dense(const DenseOperator& a, double drop_below = kCanonicalTolerance) {
    const int n = a.spin_count;
    const auto dim = static_cast<std::uint64_t>(a.dim());
    OperatorSum out(n);
    std::vector<Complex> v(dim);
    for (std::uint64_t flip = 0; flip < dim; ++flip) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            v[i] = a.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i ^ flip));
        }
        for (std::uint64_t h = 1; h < dim; h <<= 1) {
            for (std::uint64_t i = 0; i < dim; i += h << 1) {
                for (std::uint64_t j = i; j < i + h; ++j) {
                    const Complex x = v[j];
                    const Complex y = v[j + h];
                    v[j] = x + y;
                    v[j + h] = x - y;
                }
            }
        }
        for (std::uint64_t phase = 0; phase < dim; ++phase) {
            if (std::abs(v[phase]) == 0.0) continue;
            FactorString factors(static_cast<std::size_t>(n), Factor::E);
            int w = 0;
            int ys = 0;
            for (int k = 0; k < n; ++k) {
                const bool x = (flip >> spin_bit(n, k)) & 1U;
                const bool z = (phase >> spin_bit(n, k)) & 1U;
                Factor& f = factors[static_cast<std::size_t>(k)];
                f = x ? (z ? Factor::Y : Factor::X) : (z ? Factor::Z : Factor::E);
                w += (x || z);
                ys += (x && z);
            }
            static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            const Complex c = std::ldexp(1.0, w) * kIPow[ys % 4] * v[phase] /
                              static_cast<double>(dim);
            if (std::abs(c) >= drop_below) out.add(factors, c);
        }
    }
    return out;
}

/// U A U^dag. U must be unitary.
inline DenseOperator unitary_conjugate(const DenseOperator& u, const DenseOperator& a) {
    detail::require_same_size(u.spin_count, a.spin_count);
    if (!is_unitary(u)) throw ContractViolation("unitary_conjugate: U is not unitary");
    return {a.spin_count, u.m * a.m * u.m.adjoint()};
}

enum class MatrixKind { kGeneral, kHermitian };

/// exp(scale * H). Diagonal inputs are exponentiated entrywise; Hermitian
/// inputs go through an eigendecomposition; everything else uses Eigen's
/// Pade scaling-and-squaring.
inline DenseOperator matrix_exponential(const DenseOperator& h, Complex scale,
                                        MatrixKind kind = MatrixKind::kGeneral) {
    const Eigen::Index dim = h.dim();
    if (is_diagonal(h)) {
        Matrix out = Matrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) out(i, i) = std::exp(scale * h.m(i, i));
        return {h.spin_count, std::move(out)};
    }
    if (kind == MatrixKind::kHermitian) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(h.m);
        if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
        const Eigen::VectorXcd phases =
            (scale * eig.eigenvalues().cast<Complex>()).array().exp().matrix();
        return {h.spin_count,
                eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint()};
    }
    const Matrix scaled = scale * h.m;
    return {h.spin_count, scaled.exp()};
}

/// Sum of weight * A over all pairs.
inline DenseOperator weighted_accumulate(std::span<const std::pair<double, DenseOperator>> pairs) {
    if (pairs.empty()) throw DimensionError("weighted_accumulate needs at least one operator");
    DenseOperator out = DenseOperator::zero(pairs.front().second.spin_count);
    for (const auto& [w, a] : pairs) {
        detail::require_same_size(a.spin_count, out.spin_count);
        out.m += w * a.m;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structured kernels. Each applies a local unitary from the left in O(N^2)
// without forming the full matrix; conjugation reuses the left action through
// U A U^dag = (U (U A)^dag)^dag.

namespace kernel {

/// 2x2 matrix exp(-i theta sigma_axis / 2) for axis 'x', 'y' or 'z'.
inline Eigen::Matrix2cd rotation_2x2(char axis, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Eigen::Matrix2cd u;
    switch (axis) {
        case 'x': u << c, Complex{0, -s}, Complex{0, -s}, c; break;
        case 'y': u << c, -s, s, c; break;
        case 'z': u << Complex{c, -s}, 0, 0, Complex{c, s}; break;
        default: throw std::invalid_argument("rotation axis must be x, y or z");
    }
    return u;
}

inline Eigen::Matrix2cd hadamard_2x2() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd h;
    h << r, r, r, -r;
    return h;
}

inline void left_one_qubit(Matrix& m, int n, int k, const Eigen::Matrix2cd& u) {
    const Eigen::Index bit = Eigen::Index{1} << spin_bit(n, k);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i & bit) continue;
        const Eigen::Index j = i | bit;
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const Complex a = m(i, c);
            const Complex b = m(j, c);
            m(i, c) = u(0, 0) * a + u(0, 1) * b;
            m(j, c) = u(1, 0) * a + u(1, 1) * b;
        }
    }
}

inline void left_diagonal(Matrix& m, const Eigen::VectorXcd& d) { m = d.asDiagonal() * m; }

/// Left action of exp(-i phi sigma_P), where P flips the bits in `flip` and
/// carries Y or Z on the bits in `phase`.
inline void left_pauli_exponential(Matrix& m, std::uint64_t flip, std::uint64_t phase, double phi) {
    static constexpr Complex kMinusIPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const int ys = std::popcount(flip & phase);
    const Complex y_phase = kMinusIPow[ys % 4];
    const double c = std::cos(phi);
    const Complex mis{0.0, -std::sin(phi)};
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const double sign = (std::popcount(ui & phase) % 2) ? -1.0 : 1.0;
        const auto src = static_cast<Eigen::Index>(ui ^ flip);
        out.row(i) = c * m.row(i) + (mis * y_phase * sign) * m.row(src);
    }
    m = std::move(out);
}

template <typename LeftAction>
void conjugate(Matrix& rho, LeftAction&& left) {
    left(rho);
    rho.adjointInPlace();
    left(rho);
    rho.adjointInPlace();
}

/// Keeps only zero-quantum entries |i><j| with popcount(i) == popcount(j).
inline void crush_nonzero_coherence(Matrix& rho) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            if (std::popcount(static_cast<std::uint64_t>(i)) !=
                std::popcount(static_cast<std::uint64_t>(j))) {
                rho(i, j) = 0.0;
            }
        }
    }
}

}  // namespace kernel

}  // namespace epsprep
