#include <doctest.h>

#include <cmath>

#include "qpopf/circuit.hpp"
#include "qpopf/experiments.hpp"
#include "qpopf/kernels.hpp"
#include "qpopf/observable.hpp"
#include "qpopf/rng.hpp"

using namespace qpopf;

namespace {

constexpr double kPi = 3.14159265358979323846;

CircuitModel random_model(int n, int layers, std::uint64_t seed, int range = 1) {
    return init_circuit_model(n, layers, seed, range);
}

/// Independent depth oracle: explicit dependency DAG, longest path by
/// topological DP. Encoding contributes one source node per qubit.
int depth_dag_oracle(const CircuitModel& m) {
    const auto gates = gate_list(m);
    // level[q] = stage of the last node touching qubit q
    std::vector<int> last_level(static_cast<std::size_t>(m.n_qubits), 1);  // encoding nodes
    int depth = 1;
    for (const GateOp& g : gates) {
        std::vector<int> qubits{g.target};
        if (g.kind == GateKind::CNOT) qubits.push_back(g.control);
        int pred = 0;
        for (int q : qubits) pred = std::max(pred, last_level[static_cast<std::size_t>(q)]);
        const int level = pred + 1;
        for (int q : qubits) last_level[static_cast<std::size_t>(q)] = level;
        depth = std::max(depth, level);
    }
    return depth;
}

}  // namespace

TEST_SUITE("quantum") {

TEST_CASE("init_state basis vectors") {
    const StateVector s1 = init_state(1);
    CHECK(s1.amps[0] == cplx{1.0, 0.0});
    CHECK(s1.amps[1] == cplx{0.0, 0.0});
    const StateVector s2 = init_state(2);
    CHECK(s2.dim() == 4);
    CHECK(s2.amps[0] == cplx{1.0, 0.0});
    for (std::size_t i = 1; i < 4; ++i) CHECK(s2.amps[i] == cplx{0.0, 0.0});
    const StateVector s5 = init_state(5);
    CHECK(s5.dim() == 32);
    CHECK(s5.amps[0] == cplx{1.0, 0.0});
    CHECK(s5.norm_sq() == doctest::Approx(1.0));
    CHECK_THROWS_AS(init_state(0), ConfigError);
    CHECK_THROWS_AS(init_state(25), ConfigError);
}

TEST_CASE("gate matrices are unitary") {
    Rng rng(11);
    std::vector<double> theta(3);
    for (int trial = 0; trial < 200; ++trial) {
        for (double& t : theta) t = (rng.uniform() * 2.0 - 1.0) * 2.0 * kPi;
        for (GateKind kind : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::Rot,
                              GateKind::PauliX, GateKind::CNOT}) {
            GateOp g;
            g.kind = kind;
            g.target = 1;
            g.control = kind == GateKind::CNOT ? 0 : -1;
            g.param_indices = {0, 1, 2};
            CHECK(unitarity_defect(gate_matrix(g, theta)) < 1e-12);
        }
    }
}

TEST_CASE("apply_gate textbook actions") {
    std::vector<double> no_params;
    SUBCASE("PauliX flips |0> to |1>") {
        StateVector s = init_state(1);
        GateOp x{GateKind::PauliX, 0, -1, {}};
        apply_gate(s, x, no_params);
        CHECK(s.amps[0] == cplx{0.0, 0.0});
        CHECK(s.amps[1] == cplx{1.0, 0.0});
    }
    SUBCASE("CNOT(control=0, target=1) maps |10> to |11>") {
        StateVector s = init_state(2);
        GateOp x{GateKind::PauliX, 0, -1, {}};
        apply_gate(s, x, no_params);  // |q0=1, q1=0>, index 1
        GateOp cx{GateKind::CNOT, 1, 0, {}};
        apply_gate(s, cx, no_params);
        CHECK(s.amps[3] == cplx{1.0, 0.0});  // |q0=1, q1=1>
        CHECK(std::abs(s.amps[1]) == 0.0);
    }
    SUBCASE("RY(pi/2) rotates |0> to the diagonal state") {
        StateVector s = init_state(1);
        std::vector<double> theta{kPi / 2.0};
        GateOp ry{GateKind::RY, 0, -1, {0, -1, -1}};
        apply_gate(s, ry, theta);
        CHECK(s.amps[0].real() == doctest::Approx(std::cos(kPi / 4.0)).epsilon(1e-12));
        CHECK(s.amps[1].real() == doctest::Approx(std::sin(kPi / 4.0)).epsilon(1e-12));
    }
    SUBCASE("index validation") {
        StateVector s = init_state(2);
        GateOp bad{GateKind::PauliX, 5, -1, {}};
        CHECK_THROWS_AS(apply_gate(s, bad, no_params), ConfigError);
        GateOp same{GateKind::CNOT, 1, 1, {}};
        CHECK_THROWS_AS(apply_gate(s, same, no_params), ConfigError);
    }
}

TEST_CASE("angle encoding") {
    SUBCASE("zero angles give |0...0>") {
        const std::vector<double> x(5, 0.0);
        const StateVector s = angle_encode(x);
        CHECK(s.amps[0].real() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("x = (pi, 0) gives |10>") {
        const std::vector<double> x{kPi, 0.0};
        const StateVector s = angle_encode(x);
        CHECK(std::abs(s.amps[1] - cplx{1.0, 0.0}) < 1e-12);
    }
    SUBCASE("single qubit at pi/2") {
        const std::vector<double> x{kPi / 2.0};
        const StateVector s = angle_encode(x);
        CHECK(s.amps[0].real() == doctest::Approx(0.70710678118654752).epsilon(1e-12));
        CHECK(s.amps[1].real() == doctest::Approx(0.70710678118654752).epsilon(1e-12));
    }
}

TEST_CASE("run_circuit structure") {
    SUBCASE("L=0 with zero angles is the identity on the encoding") {
        CircuitModel m;
        m.n_qubits = 3;
        m.n_layers = 0;
        m.theta.assign(m.param_count(), 0.0);
        const std::vector<double> x(3, 0.0);
        const StateVector s = run_circuit(m, x);
        CHECK(std::abs(s.amps[0] - cplx{1.0, 0.0}) < 1e-12);
    }
    SUBCASE("n=1, L=0 with only a beta angle reduces to RY") {
        CircuitModel m;
        m.n_qubits = 1;
        m.n_layers = 0;
        const double beta = 0.83;
        m.theta = {0.0, beta, 0.0};
        const std::vector<double> x{0.0};
        const StateVector s = run_circuit(m, x);
        CHECK(s.amps[0].real() == doctest::Approx(std::cos(beta / 2.0)).epsilon(1e-12));
        CHECK(s.amps[1].real() == doctest::Approx(std::sin(beta / 2.0)).epsilon(1e-12));
    }
    SUBCASE("norm preserved through random layered circuits") {
        Rng rng(3);
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform() * 5.0);
            const int layers = static_cast<int>(rng.uniform() * 4.0);
            const CircuitModel m = random_model(n, layers, rng.bits());
            std::vector<double> x(static_cast<std::size_t>(n));
            for (double& v : x) v = rng.uniform() * kPi;
            const StateVector s = run_circuit(m, x);
            CHECK(std::abs(s.norm_sq() - 1.0) < 1e-10);
        }
    }
    SUBCASE("parameter count matches the layered layout") {
        const CircuitModel m = random_model(5, 10, 99);
        CHECK(m.param_count() == 165);
        CHECK(m.theta.size() == 165);
    }
}

TEST_CASE("expectation of Pauli-Z") {
    SUBCASE("computational basis states") {
        StateVector s = init_state(1);
        CHECK(expectation(s, {0}) == doctest::Approx(1.0));
        std::vector<double> no_params;
        GateOp x{GateKind::PauliX, 0, -1, {}};
        apply_gate(s, x, no_params);
        CHECK(expectation(s, {0}) == doctest::Approx(-1.0));
    }
    SUBCASE("encoding identity <Z_i> = cos(x_i)") {
        Rng rng(17);
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<double> x(4);
            for (double& v : x) v = (rng.uniform() * 2.0 - 1.0) * 2.0 * kPi;
            const StateVector s = angle_encode(x);
            for (int q = 0; q < 4; ++q)
                CHECK(expectation(s, {q}) ==
                      doctest::Approx(std::cos(x[static_cast<std::size_t>(q)])).epsilon(1e-10));
        }
    }
    SUBCASE("bounded in [-1, 1] on random circuits") {
        Rng rng(23);
        for (int trial = 0; trial < 30; ++trial) {
            const CircuitModel m = random_model(3, 2, rng.bits());
            std::vector<double> x(3);
            for (double& v : x) v = rng.uniform() * kPi;
            const double e = expectation(run_circuit(m, x), {static_cast<int>(rng.uniform() * 3)});
            CHECK(e >= -1.0 - 1e-12);
            CHECK(e <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("sample_expectation") {
    SUBCASE("deterministic eigenstate and argument checks") {
        const StateVector s = init_state(3);
        Rng rng(5);
        CHECK(sample_expectation(s, {1}, 50, rng) == 1.0);
        CHECK_THROWS_AS(sample_expectation(s, {1}, 0, rng), ArgumentError);
    }
    SUBCASE("equal superposition concentrates as 1/sqrt(shots)") {
        const std::vector<double> x{kPi / 2.0};
        const StateVector s = angle_encode(x);
        Rng rng(12345);
        const double est = sample_expectation(s, {0}, 1000000, rng);
        CHECK(std::abs(est) < 0.003);  // 3 sigma for a fair +/-1 coin at 1e6 shots
        CHECK(est >= -1.0);
        CHECK(est <= 1.0);
    }
    SUBCASE("identical seeds reproduce bit-identically") {
        const std::vector<double> x{0.3, 1.2};
        const StateVector s = angle_encode(x);
        Rng a(777);
        Rng b(777);
        CHECK(sample_expectation(s, {1}, 5000, a) == sample_expectation(s, {1}, 5000, b));
    }
}

TEST_CASE("circuit depth") {
    SUBCASE("encode plus final rotation layer") {
        const CircuitModel m = random_model(5, 0, 1);
        CHECK(circuit_depth(m) == 2);
    }
    SUBCASE("matches the dependency-graph longest path") {
        Rng rng(31);
        for (int trial = 0; trial < 60; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform() * 6.0);
            const int layers = static_cast<int>(rng.uniform() * 5.0);
            int range = 1 + static_cast<int>(rng.uniform() * 2.0);
            if (n > 1 && range % n == 0) range = 1;
            const CircuitModel m = random_model(n, layers, rng.bits(), n == 1 ? 1 : range);
            CHECK(circuit_depth(m) == depth_dag_oracle(m));
        }
    }
    SUBCASE("n=2, L=1 under the documented staging rule") {
        // encode (1) + Rot (1) + two chained CNOTs (2) + final Rot (1).
        const CircuitModel m = random_model(2, 1, 4);
        CHECK(circuit_depth(m) == 5);
        CHECK(depth_dag_oracle(m) == 5);
    }
    SUBCASE("paper configuration lands in the same timing decade") {
        const CircuitModel m = random_model(5, 10, 6);
        const int d = circuit_depth(m);
        CHECK(d == 62);  // 1 + 10 * (1 + 5) + 1
        const double t = quantum_time_seconds(m);
        CHECK(t > 1.0e-6);
        CHECK(t < 2.0e-6);  // paper reports 1.76e-6 for its (unstated) counting
    }
}

TEST_CASE("quantum_time formula") {
    CHECK(quantum_time_seconds(0) == 1.0e-6);
    CHECK(quantum_time_seconds(76) == 1.76e-6);  // exact in binary64
    const TimingModel doubled{1e-6, 2e-8};
    CHECK(quantum_time_seconds(50, doubled) - 1e-6 ==
          doctest::Approx(2.0 * (quantum_time_seconds(50) - 1e-6)).epsilon(1e-15));
}

}  // TEST_SUITE
