#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "epsprep/operators.hpp"
#include "test_support.hpp"

namespace {

using namespace epsprep;
using epsprep::testing::max_diff;

constexpr double kPi = std::numbers::pi;

TEST(BuildQ, Examples) {
    EXPECT_LT(max_diff(build_q(1).m, Matrix::Ones(2, 2)), 1e-300);
    const DenseOperator q = build_q(3);
    EXPECT_LT(max_abs_diff(q * q, Complex{8.0} * q), 1e-13);
    EXPECT_THROW(build_q(kMaxDenseSpins + 1), DimensionError);
}

TEST(BuildQ, DecomposesThroughCollectiveYRotation) {
    for (int n = 1; n <= 5; ++n) {
        const DenseOperator u = rotation(collective(n, Axis::kY), kPi / 2);
        const DenseOperator rhs = Complex{static_cast<double>(dim_for(n))} * (u * build_ds(n, 0) * u.adjoint());
        EXPECT_LT(max_abs_diff(build_q(n), rhs), 1e-11) << "n = " << n;
    }
}

TEST(BuildQ, SandwichGivesEntrySum) {
    std::mt19937_64 rng(101);
    for (int n = 1; n <= 4; ++n) {
        const DenseOperator a = DenseOperator::wrap(n, epsprep::testing::random_matrix(rng, dim_for(n)));
        const DenseOperator q = build_q(n);
        EXPECT_LT(max_abs_diff(q * a * q, a.m.sum() * q), 1e-11);
    }
}

TEST(ExpAlphaQ, Examples) {
    EXPECT_LT(max_abs_diff(exp_alpha_q(3, 0.0), DenseOperator::identity(3)), 1e-15);
    Matrix expected(2, 2);
    expected << 0, -1, -1, 0;
    EXPECT_LT(max_diff(exp_alpha_q(1, kPi / 2).m, expected), 1e-15);
    for (int n = 1; n <= 4; ++n) {
        const double big_n = static_cast<double>(dim_for(n));
        const DenseOperator e = DenseOperator::identity(n) - Complex{2.0 / big_n} * build_q(n);
        EXPECT_LT(max_abs_diff(exp_alpha_q(n, kPi / big_n), e), 1e-14);
    }
}

TEST(ExpAlphaQ, MatchesPadeAndInvertsAndIsUnitary) {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    for (int n = 1; n <= 5; ++n) {
        for (int t = 0; t < 10; ++t) {
            const double a = angle(rng);
            const DenseOperator closed = exp_alpha_q(n, a);
            const DenseOperator pade = matrix_exponential(build_q(n), Complex{0, -a});
            EXPECT_LT(max_abs_diff(closed, pade), 1e-12);
            EXPECT_LT(max_abs_diff(closed * exp_alpha_q(n, -a), DenseOperator::identity(n)), 1e-13);
            EXPECT_TRUE(is_unitary(closed));
        }
    }
}

TEST(BuildDs, Examples) {
    Matrix d(2, 2);
    d << 1, 0, 0, 0;
    EXPECT_LT(max_diff(build_ds(1, 0).m, d), 1e-300);
    DenseOperator sum = DenseOperator::zero(2);
    for (int s = 0; s < 4; ++s) sum = sum + build_ds(2, s);
    EXPECT_LT(max_abs_diff(sum, DenseOperator::identity(2)), 1e-300);
    EXPECT_THROW(build_ds(2, 4), DimensionError);
    EXPECT_THROW(build_ds(2, -1), DimensionError);
}

TEST(BuildDs, SymbolicFormMatchesDense) {
    for (int n = 1; n <= 4; ++n) {
        for (Eigen::Index s = 0; s < dim_for(n); ++s) {
            EXPECT_LT(max_abs_diff(to_dense(build_ds_symbolic(n, s)), build_ds(n, s)), 1e-14);
        }
    }
}

TEST(LomsoExpand, Examples) {
    const OperatorSum one = OperatorSum::identity(1) + OperatorSum::term("Z", 2.0);
    EXPECT_LT(max_coefficient_difference(lomso_expand(1), one), 1e-15);
    const OperatorSum two = OperatorSum::identity(2) + OperatorSum::term("ZE", 2.0) +
                            OperatorSum::term("EZ", 2.0) + OperatorSum::term("ZZ", 4.0);
    EXPECT_LT(max_coefficient_difference(lomso_expand(2), two), 1e-15);
    for (int n = 1; n <= 6; ++n) EXPECT_EQ(lomso_expand(n).size(), std::size_t{1} << n);
}

TEST(LomsoExpand, EqualsScaledGroundProjectorAndTensorForm) {
    for (int n = 1; n <= 6; ++n) {
        const double big_n = static_cast<double>(dim_for(n));
        EXPECT_LT(max_abs_diff(to_dense(lomso_expand(n)), Complex{big_n} * build_ds(n, 0)), 1e-13);
        // (E + 2 I_1z) x ... x (E + 2 I_nz), multiplied out symbolically.
        OperatorSum tensor = OperatorSum::identity(n);
        for (int k = 0; k < n; ++k) {
            OperatorSum site = OperatorSum::identity(n);
            site.add(factors_on(n, {k}, Factor::Z), 2.0);
            tensor = tensor * site;
        }
        EXPECT_LT(max_coefficient_difference(tensor, lomso_expand(n)), 1e-13);
        EXPECT_LT(max_coefficient_difference(build_ds_symbolic(n, 0) * Complex{big_n}, lomso_expand(n)), 1e-12);
    }
}

TEST(BuildR, Examples) {
    Eigen::Vector4cd d(-1, 1, 1, 1);
    EXPECT_LT(max_diff(build_r(2).m, Matrix(d.asDiagonal())), 1e-300);
    for (int n = 1; n <= 5; ++n) {
        const DenseOperator r = build_r(n);
        EXPECT_LT(max_abs_diff(r * r, DenseOperator::identity(n)), 1e-15);
        EXPECT_LT(max_abs_diff(r, DenseOperator::identity(n) - Complex{2.0} * build_ds(n, 0)), 1e-15);
        // cos(alpha N) = -1, sin(alpha N) = 0: both signs give diag(-1, 1, ..., 1).
        const double alpha = kPi / static_cast<double>(dim_for(n));
        const double big_n = static_cast<double>(dim_for(n));
        EXPECT_LT(max_abs_diff(matrix_exponential(build_ds(n, 0), Complex{0, big_n * alpha}), r), 1e-14);
        EXPECT_LT(max_abs_diff(matrix_exponential(build_ds(n, 0), Complex{0, -big_n * alpha}), r), 1e-14);
    }
}

TEST(BuildW, Examples) {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix h(2, 2);
    h << s, s, s, -s;
    EXPECT_LT(max_diff(build_w(1).m, h), 1e-15);
    const DenseOperator w3 = build_w(3);
    EXPECT_LT(max_abs_diff(w3 * w3, DenseOperator::identity(3)), 1e-14);
    const DenseOperator w2 = build_w(2);
    EXPECT_LT(max_abs_diff(w2 * build_ds(2, 0) * w2, Complex{0.25} * build_q(2)), 1e-15);
}

TEST(BuildDiffusion, Examples) {
    Matrix d1(2, 2);
    d1 << 0, -1, -1, 0;
    EXPECT_LT(max_diff(build_diffusion(1).m, d1), 1e-15);
    for (int n = 1; n <= 6; ++n) {
        const DenseOperator w = build_w(n);
        const DenseOperator d = build_diffusion(n);
        EXPECT_LT(max_abs_diff(w * d * w, build_r(n)), 1e-11);
        EXPECT_LT(max_abs_diff(d * d, DenseOperator::identity(n)), 1e-11);
        EXPECT_LT(max_abs_diff(d, w * build_r(n) * w), 1e-15);
    }
}

TEST(MultibodyPropagator, Examples) {
    const DenseOperator single = multibody_propagator(1, {0}, Axis::kX, kPi / 2);
    EXPECT_LT(max_abs_diff(single, rotation(OperatorSum::term("X"), kPi / 2)), 1e-15);
    EXPECT_LT(max_abs_diff(multibody_propagator(3, {0, 2}, Axis::kY, 0.0), DenseOperator::identity(3)), 1e-15);
    EXPECT_THROW(multibody_propagator(3, {}, Axis::kX, 1.0), std::invalid_argument);
    EXPECT_THROW(multibody_propagator(3, {2, 1}, Axis::kX, 1.0), std::invalid_argument);
    EXPECT_THROW(multibody_propagator(3, {1, 1}, Axis::kX, 1.0), std::invalid_argument);
    EXPECT_THROW(multibody_propagator(3, {0, 3}, Axis::kX, 1.0), DimensionError);
}

// Generator 2^(m-1) prod I squares to 2^(m-1)^2 4^-m E = E/4, so
// exp(-i theta G) = cos(theta/2) E - 2 i sin(theta/2) G.
TEST(MultibodyPropagator, ClosedFormAndUnitarity) {
    std::mt19937_64 rng(107);
    for (int n = 1; n <= 5; ++n) {
        for (const Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
            const auto spins = all_spins(n);
            const double th = 0.77;
            const DenseOperator g = to_dense(multibody_generator(n, spins, axis));
            const DenseOperator closed = Complex{std::cos(th / 2)} * DenseOperator::identity(n) +
                                         Complex{0, -2.0 * std::sin(th / 2)} * g;
            const DenseOperator u = multibody_propagator(n, spins, axis, th);
            EXPECT_LT(max_abs_diff(u, closed), 1e-13);
            EXPECT_TRUE(is_unitary(u));
        }
    }
}

TEST(TwoQubitDiagonal, IsDiagonalWithExpectedPhases) {
    const double lambda = 0.9;
    const DenseOperator g = two_qubit_diagonal(3, 0, 2, lambda);
    EXPECT_TRUE(is_diagonal(g, 1e-15));
    for (Eigen::Index i = 0; i < 8; ++i) {
        const int zk = (i >> 2) & 1, zl = i & 1;
        const double parity = (zk == zl) ? 0.5 : -0.5;  // 2 I_kz I_lz eigenvalue
        EXPECT_NEAR(std::abs(g.m(i, i) - std::exp(Complex{0, -lambda * parity})), 0.0, 1e-14);
    }
    EXPECT_THROW(two_qubit_diagonal(3, 1, 1, lambda), std::invalid_argument);
}

TEST(NamedOperator, BuildDenseDispatches) {
    EXPECT_LT(max_abs_diff(build_dense(named::Q{}, 2), build_q(2)), 1e-300);
    EXPECT_LT(max_abs_diff(build_dense(named::Ds{3}, 2), build_ds(2, 3)), 1e-300);
    EXPECT_LT(max_abs_diff(build_dense(named::Diffusion{}, 2), build_diffusion(2)), 1e-300);
    EXPECT_LT(max_abs_diff(build_dense(named::F{Axis::kZ}, 2), to_dense(collective(2, Axis::kZ))), 1e-300);
    EXPECT_LT(max_abs_diff(build_dense(named::TwoQubitDiagonal{0, 1, 0.3}, 2), two_qubit_diagonal(2, 0, 1, 0.3)),
              1e-300);
}

}  // namespace
