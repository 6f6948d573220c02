#pragma once

#include "qpopf/exec.hpp"
#include "qpopf/rng.hpp"
#include "qpopf/statevector.hpp"

namespace qpopf {

/// Single-qubit Pauli-Z measurement; eigenvalues are exactly {+1, -1}.
struct Observable {
    int qubit = 0;
};

/// Exact <psi| Z_qubit |psi>, always in [-1, 1].
double expectation(const StateVector& state, const Observable& obs, Exec exec = Exec::automatic);

/// Mean of `shots` i.i.d. +/-1 measurement outcomes with
/// P(+1) = sum of |amp|^2 over basis states where the qubit is 0.
double sample_expectation(const StateVector& state, const Observable& obs, std::uint64_t shots,
                          Rng& rng, Exec exec = Exec::automatic);

}  // namespace qpopf
