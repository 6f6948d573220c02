// Scratch driver used while bringing the solver up; not installed.
#include <chrono>
#include <cstdio>

#include "qpopf/opf.hpp"
#include "qpopf/popf.hpp"

using namespace qpopf;

int main() {
    GridModel grid = make_ieee33();

    const auto t0 = std::chrono::steady_clock::now();
    OPFSolution sol = solve_opf(grid);
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("one solve: %.1f ms, V30=%.4f kV\n",
                std::chrono::duration<double, std::milli>(t1 - t0).count(), sol.voltage_kv(grid, 30));

    for (double wind_cap : {0.5, 1.0, 1.5, 2.0}) {
        for (double pv_cap : {1.0, 2.0}) {
            DistributionSpec spec;
            spec.wind_capacity_mw = wind_cap;
            spec.solar_capacity_mw = pv_cap;
            const auto m0 = std::chrono::steady_clock::now();
            PopfReport rep = monte_carlo_popf(grid, spec, 200, Rng(42), Exec::parallel);
            const auto m1 = std::chrono::steady_clock::now();
            const auto& v30 = rep.quantities.at("v_kv_30");
            std::printf(
                "windcap=%.1f pvcap=%.1f: V30 mean=%.4f kV std=%.4f kV feas=%d/%d (%.1f s)\n",
                wind_cap, pv_cap, v30.mean, v30.std, rep.n_feasible, rep.n_total,
                std::chrono::duration<double>(m1 - m0).count());
        }
    }
    return 0;
}
