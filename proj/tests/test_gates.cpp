#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "epsprep/gates.hpp"
#include "epsprep/planner.hpp"
#include "test_support.hpp"

namespace {

using namespace epsprep;

constexpr double kPi = std::numbers::pi;

void expect_gate_set(const GateSequence& seq) {
    for (const auto& g : seq.gates) {
        EXPECT_NO_THROW(validate_gate(g, seq.n));
        if (const auto* two = std::get_if<gate::Diagonal2>(&g)) EXPECT_NE(two->k, two->l);
    }
}

std::vector<UnitaryStep> sample_steps(int n) {
    const auto spins = all_spins(n);
    std::vector<UnitaryStep> out{
        step::OneQubitRotation{0, Axis::kY, Angle::pi_fraction(1, 3)},
        step::CollectiveRotation{spins, Axis::kX, Angle::pi_fraction(-1, 2)},
        step::CollectiveZRotation{Angle::from_radians(0.37)},
        step::WalshHadamard{},
        step::PhaseFlipR{},
        step::Diffusion{},
        step::MultibodyPropagator{spins, Axis::kX, Angle::pi_fraction(1, 2)},
        step::MultibodyPropagator{spins, Axis::kY, Angle::from_radians(0.9)},
        step::MultibodyPropagator{spins, Axis::kZ, Angle::pi_fraction(1, 4)},
    };
    if (n >= 2) out.push_back(step::TwoQubitDiagonal{0, n - 1, Angle::from_radians(-0.4)});
    return out;
}

TEST(CompileStep, EveryUnitaryStepLowersToTheGateSet) {
    for (int n = 1; n <= 4; ++n) {
        for (const auto& s : sample_steps(n)) {
            const GateSequence seq = compile_step(s, n);
            expect_gate_set(seq);
            const auto r = verify_compilation(s, seq);
            EXPECT_TRUE(r.passed) << describe(s) << " n=" << n << " residual " << r.residual;
        }
    }
}

TEST(CompileStep, PassthroughExamples) {
    const UnitaryStep one = step::OneQubitRotation{1, Axis::kX, Angle::pi_fraction(1, 2)};
    const GateSequence a = compile_step(one, 3);
    ASSERT_EQ(a.gates.size(), 1u);
    const auto& g = std::get<gate::OneQubit>(a.gates[0]);
    EXPECT_EQ(g.spin, 1);
    EXPECT_EQ(g.axis, Axis::kX);
    EXPECT_EQ(g.angle, Angle::pi_fraction(1, 2));

    const GateSequence b = compile_step(step::TwoQubitDiagonal{0, 2, Angle::from_radians(0.3)}, 3);
    ASSERT_EQ(b.gates.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<gate::Diagonal2>(b.gates[0]));

    const GateSequence c = compile_step(step::CollectiveRotation{{0, 2}, Axis::kY, Angle::from_radians(1.0)}, 3);
    EXPECT_EQ(c.gates.size(), 2u);
}

TEST(CompileStep, TwoSpinDiffusion) {
    const GateSequence seq = compile_step(step::Diffusion{}, 2);
    expect_gate_set(seq);
    EXPECT_LT(phase_insensitive_diff(recompose(seq), build_diffusion(2)), 1e-10);
}

TEST(CompileStep, CrusherIsNotCompilable) {
    EXPECT_THROW(compile_step(step::GradientCrusher{}, 2), NotCompilable);
    EXPECT_THROW(compile_steps({step::WalshHadamard{}, step::GradientCrusher{}}, 2), NotCompilable);
}

TEST(CompileZString, ThreeSpinQuarterTurn) {
    const GateSequence seq = compile_zstring({0, 1, 2}, Angle::pi_fraction(1, 4), 3);
    expect_gate_set(seq);
    EXPECT_LT(phase_insensitive_diff(recompose(seq), multibody_propagator(3, {0, 1, 2}, Axis::kZ, kPi / 4)), 1e-10);
}

TEST(CompileZString, RandomSubsetsAndAngles) {
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int n = 1; n <= 5; ++n) {
        for (const auto& s : odd_subsets(n)) {
            const double th = angle(rng);
            const GateSequence seq = compile_zstring(s, Angle::from_radians(th), n);
            EXPECT_LT(phase_insensitive_diff(recompose(seq), multibody_propagator(n, s, Axis::kZ, th)), 1e-10);
        }
    }
}

TEST(CompileMultibody, TransverseAxes) {
    for (int n = 1; n <= 5; ++n) {
        for (const Axis axis : {Axis::kX, Axis::kY}) {
            const auto spins = all_spins(n);
            const UnitaryStep s = step::MultibodyPropagator{spins, axis, Angle::pi_fraction(1, 2)};
            const GateSequence seq = compile_step(s, n);
            EXPECT_LT(phase_insensitive_diff(recompose(seq), multibody_propagator(n, spins, axis, kPi / 2)), 1e-10);
        }
    }
}

TEST(CompilePhaseFlip, GateCountGrowsWithSpins) {
    std::size_t previous = 0;
    for (int n = 1; n <= 5; ++n) {
        const GateSequence seq = compile_step(step::PhaseFlipR{}, n);
        EXPECT_GT(seq.gates.size(), previous);
        previous = seq.gates.size();
        EXPECT_LT(phase_insensitive_diff(recompose(seq), build_r(n)), 1e-10);
        // The product with its global phase is R itself, not just up to phase.
        EXPECT_LT(max_abs_diff(recompose(seq), build_r(n)), 1e-10);
    }
}

TEST(CompileWalshHadamard, ExactWithGlobalPhase) {
    for (int n = 1; n <= 4; ++n) {
        EXPECT_LT(max_abs_diff(recompose(compile_step(step::WalshHadamard{}, n)), build_w(n)), 1e-12);
    }
}

TEST(VerifyCompilation, GeneralPlanStepsAndCorruption) {
    const auto plan = general_plan(4);
    for (const auto& e : plan.experiments) {
        for (const auto& s : e.steps) {
            const auto r = verify_compilation(s, compile_step(s, 4));
            EXPECT_TRUE(r.passed) << describe(s);
            EXPECT_LE(r.residual, 1e-9);
        }
    }
    GateSequence bad = compile_step(step::Diffusion{}, 3);
    for (auto& g : bad.gates) {
        if (auto* one = std::get_if<gate::OneQubit>(&g); one && one->axis == Axis::kY) {
            one->angle = Angle::from_radians(one->angle.radians() + 0.05);
            break;
        }
    }
    const auto r = verify_compilation(step::Diffusion{}, bad);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.residual, 1e-3);
}

TEST(EvolveSymbolic, AgreesWithDenseEvolution) {
    std::mt19937_64 rng(223);
    for (int n = 2; n <= 4; ++n) {
        const OperatorSum a = epsprep::testing::random_sum(rng, n, 6);
        const auto steps = sample_steps(n);
        const OperatorSum sym = evolve_symbolic(a, steps);
        const DenseOperator dense = evolve(to_dense(a), steps);
        EXPECT_LT(max_abs_diff(to_dense(sym), dense), 1e-10);
    }
}

TEST(OrderChain, TwoAndThreeSpinIntermediates) {
    const auto two = equilibrium_to_order_chain(2);
    ASSERT_EQ(two.size(), 3u);
    EXPECT_LT(max_coefficient_difference(two[0], OperatorSum::term("ZE")), 1e-13);
    EXPECT_LT(max_coefficient_difference(two[1], OperatorSum::term("XZ", 2.0)), 1e-13);
    EXPECT_LT(max_coefficient_difference(two[2], OperatorSum::term("ZZ", 2.0)), 1e-13);

    const auto three = equilibrium_to_order_chain(3);
    ASSERT_EQ(three.size(), 5u);
    EXPECT_LT(max_coefficient_difference(three[2], OperatorSum::term("ZZE", 2.0)), 1e-13);
    EXPECT_LT(max_coefficient_difference(three.back(), OperatorSum::term("ZZZ", 4.0)), 1e-13);
}

TEST(OrderChain, ReachesFullZOrder) {
    for (int n = 2; n <= 6; ++n) {
        const auto chain = equilibrium_to_order_chain(n);
        EXPECT_EQ(chain.size(), static_cast<std::size_t>(2 * n - 1));
        EXPECT_LT(max_coefficient_difference(chain.back(), zorder_state(n)), 1e-12);
        const GateSequence seq = equilibrium_to_order_sequence(n);
        expect_gate_set(seq);
        EXPECT_LT(max_coefficient_difference(apply_gates_symbolic(chain.front(), seq), zorder_state(n)), 1e-12);
    }
    EXPECT_THROW(equilibrium_to_order_chain(1), std::invalid_argument);
}

TEST(OrderChain, FiveSpinDenseRoute) {
    const int n = 5;
    const DenseOperator u = recompose(equilibrium_to_order_sequence(n));
    const DenseOperator start = to_dense(OperatorSum::term("ZEEEE"));
    EXPECT_LT(max_abs_diff(unitary_conjugate(u, start), to_dense(zorder_state(n))), 1e-12);
}

TEST(SelectivePrep, KeepsOnlyTheSelectedSpin) {
    for (int n = 1; n <= 4; ++n) {
        const OperatorSum fz = collective(n, Axis::kZ);
        for (int k = 0; k < n; ++k) {
            const auto steps = selective_prep_sequence(n, k);
            ASSERT_EQ(steps.size(), 3u);
            const std::vector<UnitaryStep> pulses(steps.begin(), steps.end() - 1);
            OperatorSum before_crush = OperatorSum::term(to_string(factors_on(n, {k}, Factor::Z)));
            for (int j = 0; j < n; ++j) {
                if (j != k) before_crush.add(factors_on(n, {j}, Factor::Y), 1.0);
            }
            EXPECT_LT(max_coefficient_difference(evolve_symbolic(fz, pulses), before_crush), 1e-12);
            EXPECT_LT(max_abs_diff(evolve(to_dense(fz), pulses), to_dense(before_crush)), 1e-12);
            const OperatorSum after = evolve_symbolic(fz, steps);
            EXPECT_LT(max_coefficient_difference(after, OperatorSum::term(to_string(factors_on(n, {k}, Factor::Z)))),
                      1e-12);
        }
    }
    EXPECT_THROW(selective_prep_sequence(3, 3), DimensionError);
}

}  // namespace
