#include <doctest.h>

#include <cmath>

#include "qpopf/gradients.hpp"
#include "qpopf/rng.hpp"

using namespace qpopf;

namespace {

constexpr double kPi = 3.14159265358979323846;

double fd_tolerance(double g) { return std::max(1e-5, 1e-4 * std::abs(g)); }

}  // namespace

TEST_SUITE("gradients") {

TEST_CASE("finite differences on closed forms") {
    SUBCASE("quadratic is exact") {
        const auto f = [](std::span<const double> t) { return t[0] * t[0]; };
        const std::vector<double> theta{3.0};
        const GradientVector g = finite_diff_grad(f, theta, 1e-5);
        CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-8));
    }
    SUBCASE("cosine at zero by symmetry") {
        const auto f = [](std::span<const double> t) { return std::cos(t[0]); };
        const std::vector<double> theta{0.0};
        CHECK(std::abs(finite_diff_grad(f, theta, 1e-5)[0]) < 1e-9);
    }
    SUBCASE("h must be positive") {
        const auto f = [](std::span<const double> t) { return t[0]; };
        const std::vector<double> theta{1.0};
        CHECK_THROWS_AS(finite_diff_grad(f, theta, 0.0), ArgumentError);
        CHECK_THROWS_AS(finite_diff_grad(f, theta, -1e-3), ArgumentError);
    }
}

TEST_CASE("parameter shift on a single RY") {
    // n=1, L=0 circuit with only the beta angle active is <Z> = cos(beta).
    CircuitModel m;
    m.n_qubits = 1;
    m.n_layers = 0;
    const std::vector<double> x{0.0};
    SUBCASE("stationary at zero") {
        m.theta = {0.0, 0.0, 0.0};
        const GradientVector g = expectation_grad(m, x);
        CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("slope -1 at pi/2") {
        m.theta = {0.0, kPi / 2.0, 0.0};
        const GradientVector g = expectation_grad(m, x);
        CHECK(g[1] == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("parameter shift matches finite differences") {
    Rng rng(101);
    int checked = 0;
    for (const int n : {1, 2, 3}) {
        for (const int layers : {0, 1, 2}) {
            for (int rep = 0; rep < 3; ++rep) {
                const CircuitModel m = init_circuit_model(n, layers, rng.bits());
                std::vector<double> x(static_cast<std::size_t>(n));
                for (double& v : x) v = rng.uniform() * kPi;
                const GradientVector ps = expectation_grad(m, x);
                const auto f = [&](std::span<const double> theta) {
                    CircuitModel probe = m;
                    probe.theta.assign(theta.begin(), theta.end());
                    return circuit_expectation(probe, x);
                };
                const GradientVector fd = finite_diff_grad(f, m.theta, 1e-5);
                for (std::size_t j = 0; j < ps.size(); ++j) {
                    CHECK(std::abs(ps[j] - fd[j]) < fd_tolerance(ps[j]));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("rotations outside the measured light cone have exactly zero gradient") {
    // L=0: qubits never entangle, so only the measured qubit's final
    // rotation can matter.
    const CircuitModel m = init_circuit_model(4, 0, 55);
    const std::vector<double> x{0.1, 0.7, 1.3, 2.9};
    const GradientVector g = expectation_grad(m, x, {0});
    for (int q = 1; q < 4; ++q)
        for (int k = 0; k < 3; ++k) CHECK(g[static_cast<std::size_t>(3 * q + k)] == 0.0);
    // The measured qubit's own angles do move the expectation.
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) sum += std::abs(g[static_cast<std::size_t>(k)]);
    CHECK(sum > 1e-6);
}

TEST_CASE("loss gradient") {
    SUBCASE("perfect fit has zero loss and zero gradient") {
        CircuitModel m;
        m.n_qubits = 1;
        m.n_layers = 0;
        m.theta = {0.0, 0.0, 0.0};
        const std::vector<double> x{0.0};
        const double y_star = circuit_expectation(m, x);
        const auto [loss, grad] = loss_grad(m, x, y_star);
        CHECK(loss == 0.0);
        for (double g : grad) CHECK(g == 0.0);
    }
    SUBCASE("stationary point of the underlying expectation") {
        CircuitModel m;
        m.n_qubits = 1;
        m.n_layers = 0;
        m.theta = {0.0, 0.0, 0.0};
        const std::vector<double> x{0.0};
        const auto [loss, grad] = loss_grad(m, x, 0.0);  // yhat = 1
        CHECK(loss == doctest::Approx(1.0));
        CHECK(std::abs(grad[1]) < 1e-12);  // 2 * residual * d cos(0) = 0
    }
    SUBCASE("matches finite differences of the loss") {
        Rng rng(61);
        const CircuitModel m = init_circuit_model(2, 1, rng.bits());
        std::vector<double> x{rng.uniform() * kPi, rng.uniform() * kPi};
        const double y_star = rng.uniform() * 2.0 - 1.0;
        const auto [loss, ps] = loss_grad(m, x, y_star);
        (void)loss;
        const auto f = [&](std::span<const double> theta) {
            CircuitModel probe = m;
            probe.theta.assign(theta.begin(), theta.end());
            const double yhat = circuit_expectation(probe, x);
            return (yhat - y_star) * (yhat - y_star);
        };
        const GradientVector fd = finite_diff_grad(f, m.theta, 1e-5);
        for (std::size_t j = 0; j < ps.size(); ++j) CHECK(std::abs(ps[j] - fd[j]) < fd_tolerance(ps[j]));
    }
    SUBCASE("scales linearly in the residual") {
        Rng rng(62);
        const CircuitModel m = init_circuit_model(2, 1, rng.bits());
        const std::vector<double> x{0.4, 1.9};
        const double yhat = circuit_expectation(m, x);
        const auto [l1, g1] = loss_grad(m, x, yhat - 0.1);
        const auto [l2, g2] = loss_grad(m, x, yhat - 0.2);
        CHECK(l2 == doctest::Approx(4.0 * l1).epsilon(1e-12));
        for (std::size_t j = 0; j < g1.size(); ++j)
            CHECK(g2[j] == doctest::Approx(2.0 * g1[j]).epsilon(1e-9));
    }
}

}  // TEST_SUITE
