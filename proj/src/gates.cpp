#include "qpopf/gates.hpp"

#include <cmath>

namespace qpopf {

void validate_gate(const GateOp& gate, int n_qubits, std::size_t n_params) {
    if (gate.target < 0 || gate.target >= n_qubits)
        throw ConfigError("gate target " + std::to_string(gate.target) + " out of range for " +
                          std::to_string(n_qubits) + " qubits");
    if (gate.kind == GateKind::CNOT) {
        if (gate.control < 0 || gate.control >= n_qubits)
            throw ConfigError("gate control " + std::to_string(gate.control) + " out of range");
        if (gate.control == gate.target) throw ConfigError("CNOT control equals target");
    }
    for (int i = 0; i < gate.param_count(); ++i) {
        const int p = gate.param_indices[static_cast<std::size_t>(i)];
        if (p < 0 || static_cast<std::size_t>(p) >= n_params)
            throw ConfigError("gate parameter index " + std::to_string(p) + " out of range");
    }
}

std::vector<std::vector<cplx>> gate_matrix(const GateOp& gate, std::span<const double> theta) {
    auto from_mat2 = [](const Mat2& m) {
        return std::vector<std::vector<cplx>>{{m[0], m[1]}, {m[2], m[3]}};
    };
    switch (gate.kind) {
        case GateKind::RX: return from_mat2(rx_matrix(theta[gate.param_indices[0]]));
        case GateKind::RY: return from_mat2(ry_matrix(theta[gate.param_indices[0]]));
        case GateKind::RZ: return from_mat2(rz_matrix(theta[gate.param_indices[0]]));
        case GateKind::Rot:
            return from_mat2(rot_matrix(theta[gate.param_indices[0]], theta[gate.param_indices[1]],
                                        theta[gate.param_indices[2]]));
        case GateKind::PauliX: return from_mat2(pauli_x_matrix());
        case GateKind::CNOT: {
            // Basis order (control, target) as bits of the 2-qubit index
            // with control = bit 0, target = bit 1.
            std::vector<std::vector<cplx>> u(4, std::vector<cplx>(4, cplx{0, 0}));
            u[0][0] = 1;  // |c=0,t=0>
            u[2][2] = 1;  // |c=0,t=1>
            u[1][3] = 1;  // |c=1,t=0> -> |c=1,t=1>
            u[3][1] = 1;
            return u;
        }
    }
    throw ConfigError("unknown gate kind");
}

double unitarity_defect(const std::vector<std::vector<cplx>>& u) {
    const std::size_t n = u.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx dot{0, 0};
            for (std::size_t k = 0; k < n; ++k) dot += std::conj(u[k][i]) * u[k][j];
            const cplx expect = (i == j) ? cplx{1, 0} : cplx{0, 0};
            worst = std::max(worst, std::abs(dot - expect));
        }
    }
    return worst;
}

}  // namespace qpopf
