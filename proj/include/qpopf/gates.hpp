#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "qpopf/errors.hpp"
#include "qpopf/statevector.hpp"

namespace qpopf {

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

enum class GateKind {
    RX,
    RY,
    RZ,
    Rot,  // RZ(alpha) * RY(beta) * RZ(gamma), one fused 2x2 matrix
    CNOT,
    PauliX,
};

/// One gate in a circuit. Parameterized kinds index into a shared
/// parameter vector; Rot consumes three consecutive indices.
struct GateOp {
    GateKind kind = GateKind::PauliX;
    int target = 0;
    int control = -1;                            // CNOT only
    std::array<int, 3> param_indices{-1, -1, -1};

    int param_count() const {
        switch (kind) {
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ: return 1;
            case GateKind::Rot: return 3;
            default: return 0;
        }
    }
};

inline Mat2 rx_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}};
}

inline Mat2 ry_matrix(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}};
}

inline Mat2 rz_matrix(double theta) {
    const cplx e_minus = std::polar(1.0, -theta / 2.0);
    const cplx e_plus = std::polar(1.0, theta / 2.0);
    return {e_minus, cplx{0, 0}, cplx{0, 0}, e_plus};
}

inline Mat2 pauli_x_matrix() { return {cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}}; }

inline Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

/// General single-qubit rotation RZ(alpha) * RY(beta) * RZ(gamma).
inline Mat2 rot_matrix(double alpha, double beta, double gamma) {
    return mat2_mul(rz_matrix(alpha), mat2_mul(ry_matrix(beta), rz_matrix(gamma)));
}

/// Dense matrix realization of a gate (2x2, or 4x4 for CNOT), for
/// unitarity checks and small-system tests.
std::vector<std::vector<cplx>> gate_matrix(const GateOp& gate, std::span<const double> theta);

/// max |U^dagger U - I| over all entries.
double unitarity_defect(const std::vector<std::vector<cplx>>& u);

void validate_gate(const GateOp& gate, int n_qubits, std::size_t n_params);

}  // namespace qpopf
