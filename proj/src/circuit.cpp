#include "qpopf/circuit.hpp"

#include <algorithm>
#include <cmath>

#include "qpopf/kernels.hpp"
#include "qpopf/rng.hpp"

namespace qpopf {

void CircuitModel::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw ConfigError("circuit: n_qubits must be in [1, 24]");
    if (n_layers < 0) throw ConfigError("circuit: n_layers must be >= 0");
    if (entangle_range < 1 || (n_qubits > 1 && entangle_range % n_qubits == 0))
        throw ConfigError("circuit: entangle_range must be >= 1 and not a multiple of n_qubits");
    if (theta.size() != param_count())
        throw DimensionError("circuit: theta has " + std::to_string(theta.size()) + " entries, expected " +
                             std::to_string(param_count()));
    for (double t : theta)
        if (!std::isfinite(t)) throw NumericError("circuit: non-finite angle");
}

CircuitModel init_circuit_model(int n_qubits, int n_layers, std::uint64_t seed, int entangle_range) {
    CircuitModel m;
    m.n_qubits = n_qubits;
    m.n_layers = n_layers;
    m.entangle_range = entangle_range;
    m.theta.resize(m.param_count());
    Rng rng(seed);
    for (double& t : m.theta) t = (rng.uniform() * 2.0 - 1.0) * 3.14159265358979323846;
    m.validate();
    return m;
}

StateVector angle_encode(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    if (n < 1 || n > kMaxQubits) throw DimensionError("angle_encode: feature count must be in [1, 24]");
    StateVector s = init_state(n);
    std::size_t dim = 1;
    for (int q = 0; q < n; ++q) {
        const double c = std::cos(x[static_cast<std::size_t>(q)] / 2.0);
        const double sn = std::sin(x[static_cast<std::size_t>(q)] / 2.0);
        for (std::size_t i = 0; i < dim; ++i) {
            s.amps[i + dim] = s.amps[i] * sn;
            s.amps[i] *= c;
        }
        dim <<= 1;
    }
    return s;
}

std::vector<GateOp> gate_list(const CircuitModel& model) {
    std::vector<GateOp> gates;
    const int n = model.n_qubits;
    auto rot_layer = [&](int layer) {
        for (int q = 0; q < n; ++q) {
            GateOp g;
            g.kind = GateKind::Rot;
            g.target = q;
            const int base = 3 * (layer * n + q);
            g.param_indices = {base, base + 1, base + 2};
            gates.push_back(g);
        }
    };
    for (int l = 0; l < model.n_layers; ++l) {
        rot_layer(l);
        if (n > 1) {
            for (int q = 0; q < n; ++q) {
                GateOp g;
                g.kind = GateKind::CNOT;
                g.control = q;
                g.target = (q + model.entangle_range) % n;
                gates.push_back(g);
            }
        }
    }
    rot_layer(model.n_layers);
    return gates;
}

StateVector run_circuit(const CircuitModel& model, std::span<const double> x, Exec exec) {
    model.validate();
    if (static_cast<int>(x.size()) != model.n_qubits)
        throw DimensionError("run_circuit: feature vector length " + std::to_string(x.size()) +
                             " != n_qubits " + std::to_string(model.n_qubits));
    StateVector s = angle_encode(x);
    for (const GateOp& g : gate_list(model)) apply_gate(s, g, model.theta, exec);
    return s;
}

int circuit_depth(const CircuitModel& model) {
    model.validate();
    const int n = model.n_qubits;
    std::vector<int> avail(static_cast<std::size_t>(n), 1);  // encoding occupies stage 1
    int depth = 1;
    for (const GateOp& g : gate_list(model)) {
        int start = avail[static_cast<std::size_t>(g.target)];
        if (g.kind == GateKind::CNOT) start = std::max(start, avail[static_cast<std::size_t>(g.control)]);
        const int finish = start + 1;
        avail[static_cast<std::size_t>(g.target)] = finish;
        if (g.kind == GateKind::CNOT) avail[static_cast<std::size_t>(g.control)] = finish;
        depth = std::max(depth, finish);
    }
    return depth;
}

std::vector<double> scale_features(const FeatureScale& scale, std::span<const double> x) {
    if (scale.min.size() != x.size() || scale.max.size() != x.size())
        throw DimensionError("scale_features: scaling statistics do not match feature count");
    constexpr double kPi = 3.14159265358979323846;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double range = scale.max[i] - scale.min[i];
        out[i] = range > 0.0 ? (x[i] - scale.min[i]) / range * kPi : kPi / 2.0;
    }
    return out;
}

double scale_target(const TargetScale& scale, double y) {
    const double range = scale.max - scale.min;
    return range > 0.0 ? 2.0 * (y - scale.min) / range - 1.0 : 0.0;
}

double unscale_target(const TargetScale& scale, double z) {
    return (z + 1.0) / 2.0 * (scale.max - scale.min) + scale.min;
}

}  // namespace qpopf
