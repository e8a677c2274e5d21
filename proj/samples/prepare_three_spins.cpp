// Builds the three-spin preparation plan, simulates it and lowers every
// experiment to one- and two-qubit gates.

#include <iostream>

#include "epsprep/gates.hpp"
#include "epsprep/planner.hpp"

int main() {
    using namespace epsprep;
    const PreparationPlan plan = general_plan(3);
    std::cout << plan.experiments.size() << " experiments\n";
    for (const auto& e : plan.experiments) {
        std::cout << "  weight " << e.weight << ":";
        for (const auto& s : e.steps) std::cout << ' ' << describe(s);
        if (e.steps.empty()) std::cout << " (no pulses)";
        std::cout << '\n';
    }

    const SimulationResult sim = simulate_plan(plan);
    std::cout << "residual " << sim.report.residual << '\n';
    std::cout << "diagonal with offset:";
    for (Eigen::Index i = 0; i < sim.dense.dim(); ++i) {
        const double v = sim.dense.m(i, i).real() + plan.target.identity_coefficient;
        std::cout << ' ' << (std::abs(v) < 1e-12 ? 0.0 : v);
    }
    std::cout << '\n';

    for (const auto& e : plan.experiments) {
        const GateSequence seq = compile_steps(e.steps, plan.n);
        const IdentityReport r = verify_compilation(steps_unitary(e.steps, plan.n), seq);
        std::cout << seq.gates.size() << " gates, residual " << r.residual << '\n';
    }
    return sim.report.passed ? 0 : 1;
}
