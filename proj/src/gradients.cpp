#include "qpopf/gradients.hpp"

#include <cmath>

#include "qpopf/kernels.hpp"

namespace qpopf {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

void apply_rot_layer(StateVector& s, const CircuitModel& m, int layer, std::span<const double> theta,
                     Exec exec) {
    for (int q = 0; q < m.n_qubits; ++q) {
        const std::size_t base = 3u * static_cast<std::size_t>(layer * m.n_qubits + q);
        kernels::apply_1q(s.amps.data(), s.dim(), q,
                          rot_matrix(theta[base], theta[base + 1], theta[base + 2]), exec);
    }
}

void apply_ring(StateVector& s, const CircuitModel& m, Exec exec) {
    if (m.n_qubits < 2) return;
    for (int q = 0; q < m.n_qubits; ++q)
        kernels::apply_cnot(s.amps.data(), s.dim(), q, (q + m.entangle_range) % m.n_qubits, exec);
}

/// Run from the state cached before `layer`'s rotations to the end.
double eval_suffix(const StateVector& cached, StateVector& scratch, const CircuitModel& m, int layer,
                   std::span<const double> theta, Observable obs, Exec exec) {
    scratch = cached;
    for (int l = layer; l <= m.n_layers; ++l) {
        apply_rot_layer(scratch, m, l, theta, exec);
        if (l < m.n_layers) apply_ring(scratch, m, exec);
    }
    return kernels::expectation_z(scratch.amps.data(), scratch.dim(), obs.qubit, exec);
}

/// cone[l][q]: whether qubit q's rotation in layer l can influence the
/// measured qubit through the gates that follow it.
std::vector<std::vector<bool>> light_cones(const CircuitModel& m, Observable obs) {
    const int n = m.n_qubits;
    std::vector<std::vector<bool>> cone(static_cast<std::size_t>(m.n_layers) + 1);
    std::vector<bool> cur(static_cast<std::size_t>(n), false);
    cur[static_cast<std::size_t>(obs.qubit)] = true;
    cone[static_cast<std::size_t>(m.n_layers)] = cur;
    for (int l = m.n_layers - 1; l >= 0; --l) {
        if (n > 1) {
            for (int q = n - 1; q >= 0; --q) {  // ring gates in reverse program order
                const int c = q;
                const int t = (q + m.entangle_range) % n;
                if (cur[static_cast<std::size_t>(c)] || cur[static_cast<std::size_t>(t)]) {
                    cur[static_cast<std::size_t>(c)] = true;
                    cur[static_cast<std::size_t>(t)] = true;
                }
            }
        }
        cone[static_cast<std::size_t>(l)] = cur;
    }
    return cone;
}

}  // namespace

double circuit_expectation(const CircuitModel& model, std::span<const double> x, Observable obs,
                           Exec exec) {
    const StateVector s = run_circuit(model, x, exec);
    return expectation(s, obs, exec);
}

std::pair<double, GradientVector> expectation_value_and_grad(const CircuitModel& model,
                                                             std::span<const double> x, Observable obs,
                                                             Exec exec) {
    model.validate();
    if (static_cast<int>(x.size()) != model.n_qubits)
        throw DimensionError("expectation_grad: feature vector length does not match n_qubits");
    if (obs.qubit < 0 || obs.qubit >= model.n_qubits)
        throw ConfigError("expectation_grad: observable qubit out of range");

    const int n = model.n_qubits;
    const int L = model.n_layers;

    // Forward pass, caching the state entering each rotation layer.
    std::vector<StateVector> cache(static_cast<std::size_t>(L) + 1);
    StateVector s = angle_encode(x);
    for (int l = 0; l <= L; ++l) {
        cache[static_cast<std::size_t>(l)] = s;
        apply_rot_layer(s, model, l, model.theta, exec);
        if (l < L) apply_ring(s, model, exec);
    }
    const double value = kernels::expectation_z(s.amps.data(), s.dim(), obs.qubit, exec);

    const auto cone = light_cones(model, obs);
    GradientVector grad(model.param_count(), 0.0);
    std::vector<double> theta(model.theta);
    StateVector scratch;
    for (int l = 0; l <= L; ++l) {
        for (int q = 0; q < n; ++q) {
            if (!cone[static_cast<std::size_t>(l)][static_cast<std::size_t>(q)]) continue;
            const std::size_t base = 3u * static_cast<std::size_t>(l * n + q);
            for (std::size_t k = 0; k < 3; ++k) {
                const std::size_t j = base + k;
                const double saved = theta[j];
                theta[j] = saved + kHalfPi;
                const double f_plus = eval_suffix(cache[static_cast<std::size_t>(l)], scratch, model, l,
                                                  theta, obs, exec);
                theta[j] = saved - kHalfPi;
                const double f_minus = eval_suffix(cache[static_cast<std::size_t>(l)], scratch, model, l,
                                                   theta, obs, exec);
                theta[j] = saved;
                grad[j] = (f_plus - f_minus) / 2.0;
            }
        }
    }
    return {value, std::move(grad)};
}

GradientVector expectation_grad(const CircuitModel& model, std::span<const double> x, Observable obs,
                                Exec exec) {
    return expectation_value_and_grad(model, x, obs, exec).second;
}

std::pair<double, GradientVector> loss_grad(const CircuitModel& model, std::span<const double> x,
                                            double y_star, Observable obs, Exec exec) {
    auto [yhat, grad] = expectation_value_and_grad(model, x, obs, exec);
    const double residual = yhat - y_star;
    for (double& g : grad) g *= 2.0 * residual;
    return {residual * residual, std::move(grad)};
}

GradientVector finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> theta, double h) {
    if (!(h > 0.0)) throw ArgumentError("finite_diff_grad: h must be > 0");
    std::vector<double> t(theta.begin(), theta.end());
    GradientVector grad(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double saved = t[j];
        t[j] = saved + h;
        const double fp = f(t);
        t[j] = saved - h;
        const double fm = f(t);
        t[j] = saved;
        grad[j] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace qpopf
