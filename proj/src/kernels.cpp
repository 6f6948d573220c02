#include "qpopf/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <vector>

namespace qpopf {
namespace kernels {

namespace {

// Fixed chunk size for deterministic reductions: partial sums are formed
// per chunk and combined in ascending chunk order regardless of policy
// or thread count.
constexpr std::size_t kChunk = 1024;

inline void apply_1q_pair(cplx* amps, std::size_t pair_index, std::size_t mask, std::size_t lo_mask,
                          std::size_t hi_mask, const Mat2& u) {
    const std::size_t i0 = ((pair_index & hi_mask) << 1) | (pair_index & lo_mask);
    const std::size_t i1 = i0 | mask;
    const cplx a0 = amps[i0];
    const cplx a1 = amps[i1];
    amps[i0] = u[0] * a0 + u[1] * a1;
    amps[i1] = u[2] * a0 + u[3] * a1;
}

inline void cnot_pair(cplx* amps, std::size_t pair_index, std::size_t tmask, std::size_t lo_mask,
                      std::size_t hi_mask, std::size_t cmask) {
    const std::size_t k = ((pair_index & hi_mask) << 1) | (pair_index & lo_mask);
    if (k & cmask) std::swap(amps[k], amps[k | tmask]);
}

inline double z_chunk(const cplx* amps, std::size_t begin, std::size_t end, std::size_t qmask) {
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const double p = std::norm(amps[k]);
        acc += (k & qmask) ? -p : p;
    }
    return acc;
}

inline double p0_chunk(const cplx* amps, std::size_t begin, std::size_t end, std::size_t qmask) {
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        if (!(k & qmask)) acc += std::norm(amps[k]);
    }
    return acc;
}

template <typename ChunkFn>
double chunked_sum_serial(std::size_t dim, ChunkFn&& fn) {
    double total = 0.0;
    for (std::size_t begin = 0; begin < dim; begin += kChunk)
        total += fn(begin, std::min(begin + kChunk, dim));
    return total;
}

template <typename ChunkFn>
double chunked_sum_parallel(std::size_t dim, ChunkFn&& fn) {
    const std::size_t n_chunks = (dim + kChunk - 1) / kChunk;
    std::vector<double> partial(n_chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
        partial[static_cast<std::size_t>(c)] = fn(begin, std::min(begin + kChunk, dim));
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace

void apply_1q_serial(cplx* amps, std::size_t dim, int target, const Mat2& u) {
    const std::size_t mask = std::size_t{1} << target;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t pairs = dim >> 1;
    for (std::size_t i = 0; i < pairs; ++i) apply_1q_pair(amps, i, mask, lo_mask, hi_mask, u);
}

void apply_1q_parallel(cplx* amps, std::size_t dim, int target, const Mat2& u) {
    const std::size_t mask = std::size_t{1} << target;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::ptrdiff_t pairs = static_cast<std::ptrdiff_t>(dim >> 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < pairs; ++i)
        apply_1q_pair(amps, static_cast<std::size_t>(i), mask, lo_mask, hi_mask, u);
}

void apply_1q(cplx* amps, std::size_t dim, int target, const Mat2& u, Exec exec) {
    if (use_parallel(exec, dim >> 1))
        apply_1q_parallel(amps, dim, target, u);
    else
        apply_1q_serial(amps, dim, target, u);
}

void apply_cnot_serial(cplx* amps, std::size_t dim, int control, int target) {
    const std::size_t tmask = std::size_t{1} << target;
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t lo_mask = tmask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t pairs = dim >> 1;
    for (std::size_t i = 0; i < pairs; ++i) cnot_pair(amps, i, tmask, lo_mask, hi_mask, cmask);
}

void apply_cnot_parallel(cplx* amps, std::size_t dim, int control, int target) {
    const std::size_t tmask = std::size_t{1} << target;
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t lo_mask = tmask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::ptrdiff_t pairs = static_cast<std::ptrdiff_t>(dim >> 1);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < pairs; ++i)
        cnot_pair(amps, static_cast<std::size_t>(i), tmask, lo_mask, hi_mask, cmask);
}

void apply_cnot(cplx* amps, std::size_t dim, int control, int target, Exec exec) {
    if (use_parallel(exec, dim >> 1))
        apply_cnot_parallel(amps, dim, control, target);
    else
        apply_cnot_serial(amps, dim, control, target);
}

double expectation_z_serial(const cplx* amps, std::size_t dim, int qubit) {
    const std::size_t qmask = std::size_t{1} << qubit;
    return chunked_sum_serial(dim, [&](std::size_t b, std::size_t e) { return z_chunk(amps, b, e, qmask); });
}

double expectation_z_parallel(const cplx* amps, std::size_t dim, int qubit) {
    const std::size_t qmask = std::size_t{1} << qubit;
    return chunked_sum_parallel(dim, [&](std::size_t b, std::size_t e) { return z_chunk(amps, b, e, qmask); });
}

double expectation_z(const cplx* amps, std::size_t dim, int qubit, Exec exec) {
    if (use_parallel(exec, dim))
        return expectation_z_parallel(amps, dim, qubit);
    return expectation_z_serial(amps, dim, qubit);
}

double prob_zero(const cplx* amps, std::size_t dim, int qubit, Exec exec) {
    const std::size_t qmask = std::size_t{1} << qubit;
    if (use_parallel(exec, dim))
        return chunked_sum_parallel(dim, [&](std::size_t b, std::size_t e) { return p0_chunk(amps, b, e, qmask); });
    return chunked_sum_serial(dim, [&](std::size_t b, std::size_t e) { return p0_chunk(amps, b, e, qmask); });
}

}  // namespace kernels

void apply_gate(StateVector& state, const GateOp& gate, std::span<const double> theta, Exec exec) {
    validate_gate(gate, state.n_qubits, theta.size());
    cplx* a = state.amps.data();
    const std::size_t dim = state.dim();
    switch (gate.kind) {
        case GateKind::RX:
            kernels::apply_1q(a, dim, gate.target, rx_matrix(theta[gate.param_indices[0]]), exec);
            break;
        case GateKind::RY:
            kernels::apply_1q(a, dim, gate.target, ry_matrix(theta[gate.param_indices[0]]), exec);
            break;
        case GateKind::RZ:
            kernels::apply_1q(a, dim, gate.target, rz_matrix(theta[gate.param_indices[0]]), exec);
            break;
        case GateKind::Rot:
            kernels::apply_1q(a, dim, gate.target,
                              rot_matrix(theta[gate.param_indices[0]], theta[gate.param_indices[1]],
                                         theta[gate.param_indices[2]]),
                              exec);
            break;
        case GateKind::CNOT:
            kernels::apply_cnot(a, dim, gate.control, gate.target, exec);
            break;
        case GateKind::PauliX:
            kernels::apply_1q(a, dim, gate.target, pauli_x_matrix(), exec);
            break;
    }
}

}  // namespace qpopf
