#pragma once

#include <vector>

#include "qpopf/grid.hpp"
#include "qpopf/uncertainty.hpp"

namespace qpopf {

/// Backward/forward-sweep solution of the branch-flow equations on a
/// radial network with fixed injections. This is the serial physics
/// reference: the conic OPF solver is tested against it and uses it to
/// polish solutions.
struct SweepResult {
    std::vector<double> line_p;  // sending-end active flow per line, pu
    std::vector<double> line_q;
    std::vector<double> line_l;  // squared current per line, pu
    std::vector<double> bus_v;   // squared voltage per bus, pu
    bool converged = false;
    int iterations = 0;
    double total_loss_p = 0.0;  // sum of r * l over lines, pu
};

SweepResult sweep_power_flow(const GridModel& grid, const InjectionSet& injections,
                             int max_iterations = 200, double tolerance = 1e-13);

}  // namespace qpopf
