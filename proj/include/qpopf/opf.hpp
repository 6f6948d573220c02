#pragma once

#include <vector>

#include "qpopf/grid.hpp"
#include "qpopf/sweep.hpp"
#include "qpopf/uncertainty.hpp"

namespace qpopf {

struct OPFOptions {
    double gap_tol_rel = 1e-8;  // duality-gap bound relative to |objective|
    double t_initial = 1.0;
    double t_growth = 20.0;
    int max_outer = 60;
    int max_inner = 200;
    bool refine = true;  // polish with a sweep power flow at the optimal dispatch
};

struct OPFResiduals {
    double balance_p = 0.0;      // worst active-power balance violation, pu
    double balance_q = 0.0;
    double voltage_drop = 0.0;   // worst voltage-drop equation violation, pu
    double relaxation_gap = 0.0; // max over lines of l*v_from - P^2 - Q^2, pu
};

struct OPFSolution {
    std::vector<double> line_p;  // sending-end flows, pu
    std::vector<double> line_q;
    std::vector<double> line_l;  // squared currents, pu
    std::vector<double> bus_v;   // squared voltages, pu
    std::vector<double> pg_mw;   // dispatched active power per bus (MW)
    std::vector<double> qg_mvar;
    double slack_import_mw = 0.0;
    double slack_export_mw = 0.0;
    double objective = 0.0;  // cost units
    OPFResiduals residuals;
    double duality_gap = 0.0;
    int newton_iterations = 0;
    bool refined = false;

    double voltage_kv(const GridModel& grid, int bus_id) const;
};

/// Minimum-cost dispatch subject to the branch-flow equalities, box
/// limits, and the conic relaxation l * v_from >= P^2 + Q^2 per line.
/// Solved with an infeasible-start Newton barrier method; the returned
/// point is optionally polished to exact physics by a backward/forward
/// sweep at the optimal dispatch.
OPFSolution solve_opf(const GridModel& grid, const UncertainSample& sample = {},
                      const OPFOptions& options = {});

/// Residuals of the branch-flow equations evaluated at a given solution.
OPFResiduals evaluate_residuals(const GridModel& grid, const UncertainSample& sample,
                                const OPFSolution& solution);

}  // namespace qpopf
