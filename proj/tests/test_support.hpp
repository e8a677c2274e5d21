#pragma once

// Independent oracles for the tests: product operators are assembled here with
// Eigen's Kronecker product rather than the library's to_dense().

#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <random>
#include <vector>

#include "epsprep/dense_engine.hpp"
#include "epsprep/pauli_algebra.hpp"

namespace epsprep::testing {

inline Eigen::Matrix2cd site_matrix(Factor f) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    switch (f) {
        case Factor::E: m << 1, 0, 0, 1; break;
        case Factor::X: m << 0, 0.5, 0.5, 0; break;
        case Factor::Y: m << 0, C(0, -0.5), C(0, 0.5), 0; break;
        case Factor::Z: m << 0.5, 0, 0, -0.5; break;
    }
    return m;
}

/// Spin 1 is the leftmost Kronecker factor (most significant bit).
inline Matrix kron_string(const FactorString& f) {
    Matrix out = Matrix::Ones(1, 1);
    for (Factor x : f) {
        Matrix next = Eigen::kroneckerProduct(out, site_matrix(x)).eval();
        out = std::move(next);
    }
    return out;
}

inline Matrix kron_sum(const OperatorSum& a) {
    const Eigen::Index dim = Eigen::Index{1} << a.spin_count();
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& [f, c] : a.terms()) out += c * kron_string(f);
    return out;
}

/// Every factor string of length n, in E<X<Y<Z order.
inline std::vector<FactorString> all_strings(int n) {
    std::vector<FactorString> out{{}};
    for (int k = 0; k < n; ++k) {
        std::vector<FactorString> next;
        for (const auto& s : out) {
            for (Factor f : {Factor::E, Factor::X, Factor::Y, Factor::Z}) {
                auto t = s;
                t.push_back(f);
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

inline FactorString random_string(std::mt19937_64& rng, int n) {
    static constexpr Factor kAll[] = {Factor::E, Factor::X, Factor::Y, Factor::Z};
    std::uniform_int_distribution<int> pick(0, 3);
    FactorString f;
    for (int k = 0; k < n; ++k) f.push_back(kAll[pick(rng)]);
    return f;
}

/// Random basis term in G (at least one Y or Z factor).
inline FactorString random_g_string(std::mt19937_64& rng, int n) {
    for (;;) {
        auto f = random_string(rng, n);
        if (classify_g(f) == GClass::kInG) return f;
    }
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index dim) {
    std::normal_distribution<double> g;
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = {g(rng), g(rng)};
    }
    return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
    const Matrix a = random_matrix(rng, dim);
    return (a + a.adjoint()) / 2.0;
}

inline OperatorSum random_sum(std::mt19937_64& rng, int n, int terms) {
    std::normal_distribution<double> g;
    OperatorSum out(n);
    for (int t = 0; t < terms; ++t) out.add(random_string(rng, n), Complex{g(rng), g(rng)});
    return out;
}

/// Random Hermitian operator with no identity component.
inline OperatorSum random_traceless_hermitian(std::mt19937_64& rng, int n, int terms) {
    std::normal_distribution<double> g;
    OperatorSum out(n);
    for (int t = 0; t < terms; ++t) {
        auto f = random_string(rng, n);
        if (weight(f) == 0) continue;
        out.add(f, g(rng));
    }
    return out;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace epsprep::testing
