#pragma once

#include <cstddef>

namespace qpopf {

/// Execution policy for the data-parallel kernels. Every parallel kernel
/// has a serial twin that produces bit-identical results; tests compare
/// the two and the kernel benchmark times them against each other.
enum class Exec {
    serial,
    parallel,
    automatic,  // parallel for large work sizes, serial otherwise
};

/// Below this many amplitude pairs the OpenMP fork/join overhead dominates.
inline constexpr std::size_t kParallelAmplitudeThreshold = std::size_t{1} << 12;

inline bool use_parallel(Exec exec, std::size_t work) {
    switch (exec) {
        case Exec::serial: return false;
        case Exec::parallel: return true;
        case Exec::automatic: return work >= kParallelAmplitudeThreshold;
    }
    return false;
}

/// Batch-level loops (per-sample gradients, Monte Carlo scenarios) carry
/// enough work per item that parallelism pays off almost immediately.
inline bool use_parallel_items(Exec exec, std::size_t items) {
    switch (exec) {
        case Exec::serial: return false;
        case Exec::parallel: return true;
        case Exec::automatic: return items >= 2;
    }
    return false;
}

}  // namespace qpopf
