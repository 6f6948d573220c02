#pragma once

#include <string>
#include <vector>

#include "qpopf/errors.hpp"

namespace qpopf {

enum class BusKind { slack, load, dg };

/// All electrical quantities are stored in per-unit on (base_kv, base_mva);
/// squared voltages and squared currents throughout. MW/MVar appear only
/// at the file and report boundaries.
struct GridBus {
    int id = 0;
    double p_load = 0.0;  // nominal active load, pu
    double q_load = 0.0;
    double pmin = 0.0, pmax = 0.0;  // dispatch bounds (dg / slack), pu
    double qmin = 0.0, qmax = 0.0;
    double vmin = 0.81, vmax = 1.1025;  // squared pu
    double cost = 0.0;                  // cost units per MW generated
    BusKind kind = BusKind::load;
};

struct GridLine {
    int from = 0, to = 0;  // external bus ids; oriented parent -> child after validation
    double r = 0.0, x = 0.0;  // pu
    double lmax = 9.0;        // squared current limit, pu
};

struct Placements {
    std::vector<int> wt;  // wind turbine buses, feature order
    std::vector<int> pv;
    int customer = 0;  // bus carrying the perturbed / patterned load
};

struct GridModel {
    double base_kv = 12.66;
    double base_mva = 10.0;
    int slack = 1;
    double slack_v = 1.0;       // squared pu held at the slack bus
    double export_price = 5.0;  // revenue per MW exported through the slack
    std::vector<GridBus> buses;
    std::vector<GridLine> lines;
    Placements placements;

    // Derived topology, filled by finalize(). Buses are indexed by position
    // in `buses`; lines are re-oriented so that `to` is the child bus.
    std::vector<int> parent_line;           // per bus index, -1 at the slack
    std::vector<std::vector<int>> children; // child line indices per bus index
    std::vector<int> topo_order;            // bus indices, slack first
    std::vector<int> line_from_idx;         // parent bus index per line
    std::vector<int> line_to_idx;           // child bus index per line

    std::size_t n_buses() const { return buses.size(); }
    std::size_t n_lines() const { return lines.size(); }
    int bus_index(int id) const;
    const GridBus& bus(int id) const { return buses[static_cast<std::size_t>(bus_index(id))]; }

    /// Validates ids, bounds and radiality and computes the topology.
    void finalize();
};

struct Ieee33Options {
    std::vector<int> dg_buses{6, 12};
    std::vector<int> wt_buses{25, 30};
    std::vector<int> pv_buses{15, 22};
    int customer_bus = 30;
    double dg_pmax_mw = 8.0;
    double dg_qmax_mvar = 2.0;
    double dg_cost = 30.0;
    double slack_import_cost = 50.0;
    double export_price = 5.0;
    double slack_cap_mw = 100.0;
    double slack_cap_mvar = 100.0;
    double vmin = 0.81;    // squared pu
    double vmax = 1.1025;  // squared pu
    double lmax = 9.0;     // squared pu
};

/// The standard 33-bus radial feeder (12.66 kV, 10 MVA base) with
/// configurable DER placement and limits.
GridModel make_ieee33(const Ieee33Options& options = {});

/// Load from a JSON file, or build a named built-in ("ieee33").
GridModel load_grid(const std::string& source);

GridModel grid_from_json(const std::string& json_text);
std::string grid_to_json(const GridModel& grid);

}  // namespace qpopf
