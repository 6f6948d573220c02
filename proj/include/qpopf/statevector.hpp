#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qpopf/errors.hpp"

namespace qpopf {

using cplx = std::complex<double>;

/// 2^n complex amplitudes of an n-qubit register.
///
/// Layout is little-endian: bit q of the amplitude index is the basis
/// state of qubit q. This is fixed so serialized states and all tests
/// are reproducible.
struct StateVector {
    int n_qubits = 0;
    std::vector<cplx> amps;

    std::size_t dim() const { return amps.size(); }

    double norm_sq() const {
        double s = 0.0;
        for (const cplx& a : amps) s += std::norm(a);
        return s;
    }
};

inline constexpr int kMaxQubits = 24;  // memory guard, ~256 MiB of amplitudes

/// |0...0> on n qubits.
inline StateVector init_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw ConfigError("init_state: n_qubits must be in [1, 24], got " + std::to_string(n_qubits));
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    s.amps[0] = cplx{1.0, 0.0};
    return s;
}

}  // namespace qpopf
