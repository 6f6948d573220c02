#include "qpopf/observable.hpp"

#include "qpopf/kernels.hpp"

namespace qpopf {

double expectation(const StateVector& state, const Observable& obs, Exec exec) {
    if (obs.qubit < 0 || obs.qubit >= state.n_qubits)
        throw ConfigError("expectation: observable qubit out of range");
    return kernels::expectation_z(state.amps.data(), state.dim(), obs.qubit, exec);
}

double sample_expectation(const StateVector& state, const Observable& obs, std::uint64_t shots,
                          Rng& rng, Exec exec) {
    if (shots == 0) throw ArgumentError("sample_expectation: shots must be >= 1");
    if (obs.qubit < 0 || obs.qubit >= state.n_qubits)
        throw ConfigError("sample_expectation: observable qubit out of range");
    const double p_plus = kernels::prob_zero(state.amps.data(), state.dim(), obs.qubit, exec);
    std::uint64_t n_plus = 0;
    for (std::uint64_t s = 0; s < shots; ++s)
        if (rng.uniform() < p_plus) ++n_plus;
    return (2.0 * static_cast<double>(n_plus) - static_cast<double>(shots)) / static_cast<double>(shots);
}

}  // namespace qpopf
