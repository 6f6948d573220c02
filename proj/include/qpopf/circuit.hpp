#pragma once

#include <span>
#include <vector>

#include "qpopf/exec.hpp"
#include "qpopf/gates.hpp"
#include "qpopf/statevector.hpp"

namespace qpopf {

/// Min-max scaling parameters carried inside a model artifact.
struct FeatureScale {
    std::vector<double> min;
    std::vector<double> max;
};

struct TargetScale {
    double min = -1.0;
    double max = 1.0;
};

/// Parameterized circuit: angle encoding, then n_layers blocks of one
/// fused rotation per qubit followed by a ring of CNOTs
/// (control i -> (i + entangle_range) mod n), then one trailing rotation
/// layer. theta is flat, 3 * n_qubits * (n_layers + 1) angles; layer l,
/// qubit q owns indices 3*(l*n_qubits + q) .. +2.
struct CircuitModel {
    int n_qubits = 0;
    int n_layers = 0;
    int entangle_range = 1;
    std::vector<double> theta;

    FeatureScale feature_scale;
    TargetScale target_scale;

    std::size_t param_count() const {
        return 3u * static_cast<std::size_t>(n_qubits) * static_cast<std::size_t>(n_layers + 1);
    }

    void validate() const;
};

/// Fresh model with angles drawn uniformly from [-pi, pi).
CircuitModel init_circuit_model(int n_qubits, int n_layers, std::uint64_t seed, int entangle_range = 1);

/// Product state  (x)_i (cos(x_i/2)|0> + sin(x_i/2)|1>).
StateVector angle_encode(std::span<const double> x);

/// Encoding then all variational layers. x must have n_qubits entries.
StateVector run_circuit(const CircuitModel& model, std::span<const double> x,
                        Exec exec = Exec::automatic);

/// The model's gate sequence (encoding excluded), in application order.
std::vector<GateOp> gate_list(const CircuitModel& model);

/// Sequential stage count of the full circuit under same-stage parallelism
/// across disjoint qubits: the encoding is one stage, each fused rotation
/// is one stage, and CNOTs schedule at the earliest stage after both of
/// their qubits are free, in program order. Equal to the longest path of
/// the gate dependency DAG.
int circuit_depth(const CircuitModel& model);

/// Scale raw features to encoding angles in [0, pi] using stored
/// training-set statistics. Degenerate features (max == min) map to pi/2.
std::vector<double> scale_features(const FeatureScale& scale, std::span<const double> x);

/// Target scaling to [-1, 1] and back.
double scale_target(const TargetScale& scale, double y);
double unscale_target(const TargetScale& scale, double z);

}  // namespace qpopf
