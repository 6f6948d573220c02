#include "qpopf/sweep.hpp"

#include <cmath>

namespace qpopf {

SweepResult sweep_power_flow(const GridModel& grid, const InjectionSet& injections,
                             int max_iterations, double tolerance) {
    const std::size_t nb = grid.n_buses();
    const std::size_t nl = grid.n_lines();
    if (injections.p.size() != nb || injections.q.size() != nb)
        throw DimensionError("sweep: injection vectors must have one entry per bus");

    SweepResult res;
    res.line_p.assign(nl, 0.0);
    res.line_q.assign(nl, 0.0);
    res.line_l.assign(nl, 0.0);
    res.bus_v.assign(nb, grid.slack_v);

    for (int it = 0; it < max_iterations; ++it) {
        // Backward: accumulate sending-end flows from the leaves.
        for (auto u_it = grid.topo_order.rbegin(); u_it != grid.topo_order.rend(); ++u_it) {
            const std::size_t u = static_cast<std::size_t>(*u_it);
            const int lu = grid.parent_line[u];
            if (lu < 0) continue;  // slack
            const GridLine& ln = grid.lines[static_cast<std::size_t>(lu)];
            double p = -injections.p[u];
            double q = -injections.q[u];
            for (int lc : grid.children[u]) {
                p += res.line_p[static_cast<std::size_t>(lc)];
                q += res.line_q[static_cast<std::size_t>(lc)];
            }
            res.line_p[static_cast<std::size_t>(lu)] = p + ln.r * res.line_l[static_cast<std::size_t>(lu)];
            res.line_q[static_cast<std::size_t>(lu)] = q + ln.x * res.line_l[static_cast<std::size_t>(lu)];
        }
        // Forward: refresh voltages and squared currents from the root.
        double delta = 0.0;
        for (int ui : grid.topo_order) {
            const std::size_t u = static_cast<std::size_t>(ui);
            const int lu = grid.parent_line[u];
            if (lu < 0) continue;
            const GridLine& ln = grid.lines[static_cast<std::size_t>(lu)];
            const std::size_t j = static_cast<std::size_t>(grid.line_from_idx[static_cast<std::size_t>(lu)]);
            const double p = res.line_p[static_cast<std::size_t>(lu)];
            const double q = res.line_q[static_cast<std::size_t>(lu)];
            const double l_old = res.line_l[static_cast<std::size_t>(lu)];
            const double v_new = res.bus_v[j] - 2.0 * (ln.r * p + ln.x * q) + (ln.r * ln.r + ln.x * ln.x) * l_old;
            const double l_new = (p * p + q * q) / res.bus_v[j];
            delta = std::max(delta, std::abs(v_new - res.bus_v[u]));
            delta = std::max(delta, std::abs(l_new - l_old));
            res.bus_v[u] = v_new;
            res.line_l[static_cast<std::size_t>(lu)] = l_new;
        }
        res.iterations = it + 1;
        if (delta < tolerance) {
            res.converged = true;
            break;
        }
    }
    for (std::size_t l = 0; l < nl; ++l) res.total_loss_p += grid.lines[l].r * res.line_l[l];
    return res;
}

}  // namespace qpopf
