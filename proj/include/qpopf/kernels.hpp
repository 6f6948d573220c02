#pragma once

#include <complex>
#include <cstddef>

#include "qpopf/exec.hpp"
#include "qpopf/gates.hpp"
#include "qpopf/statevector.hpp"

namespace qpopf {
namespace kernels {

// Amplitude-level kernels. Each has a serial reference implementation and
// an OpenMP implementation over disjoint index ranges; the two are
// bit-identical by construction (independent writes, fixed-order sums).

void apply_1q_serial(cplx* amps, std::size_t dim, int target, const Mat2& u);
void apply_1q_parallel(cplx* amps, std::size_t dim, int target, const Mat2& u);
void apply_1q(cplx* amps, std::size_t dim, int target, const Mat2& u, Exec exec = Exec::automatic);

void apply_cnot_serial(cplx* amps, std::size_t dim, int control, int target);
void apply_cnot_parallel(cplx* amps, std::size_t dim, int control, int target);
void apply_cnot(cplx* amps, std::size_t dim, int control, int target, Exec exec = Exec::automatic);

/// <Z_qubit>: sum of |a_k|^2 signed by bit `qubit` of k. Summation is
/// chunked in fixed order so serial and parallel agree bitwise.
double expectation_z_serial(const cplx* amps, std::size_t dim, int qubit);
double expectation_z_parallel(const cplx* amps, std::size_t dim, int qubit);
double expectation_z(const cplx* amps, std::size_t dim, int qubit, Exec exec = Exec::automatic);

/// P(measuring qubit = 0), same chunked-sum contract as expectation_z.
double prob_zero(const cplx* amps, std::size_t dim, int qubit, Exec exec = Exec::automatic);

}  // namespace kernels

/// Apply one gate to a state, dispatching on kind.
/// Parameters are read through gate.param_indices.
void apply_gate(StateVector& state, const GateOp& gate, std::span<const double> theta,
                Exec exec = Exec::automatic);

}  // namespace qpopf
