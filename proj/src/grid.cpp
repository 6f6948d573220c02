#include "qpopf/grid.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <queue>

#include "qpopf/io.hpp"

namespace qpopf {

int GridModel::bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    throw SchemaError("grid: unknown bus id " + std::to_string(id));
}

void GridModel::finalize() {
    if (buses.empty()) throw SchemaError("grid: no buses");
    if (!(base_kv > 0.0) || !(base_mva > 0.0)) throw SchemaError("grid: bases must be positive");

    std::map<int, int> index;
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (index.count(buses[i].id)) throw SchemaError("grid: duplicate bus id " + std::to_string(buses[i].id));
        index[buses[i].id] = static_cast<int>(i);
    }
    if (!index.count(slack)) throw SchemaError("grid: slack bus " + std::to_string(slack) + " not present");
    if (buses[static_cast<std::size_t>(index[slack])].kind != BusKind::slack)
        throw SchemaError("grid: slack bus must have kind 'slack'");

    for (const GridBus& b : buses) {
        if (b.pmin > b.pmax || b.qmin > b.qmax || b.vmin > b.vmax)
            throw SchemaError("grid: bus " + std::to_string(b.id) + " has inverted bounds");
        if (b.vmin < 0.0) throw SchemaError("grid: negative squared-voltage bound");
    }

    if (lines.size() != buses.size() - 1)
        throw TopologyError("grid: " + std::to_string(lines.size()) + " lines for " +
                            std::to_string(buses.size()) + " buses; a radial network needs n_buses - 1");

    // BFS from the slack; orient every line parent -> child.
    const std::size_t nb = buses.size();
    std::vector<std::vector<std::pair<int, int>>> adj(nb);  // (neighbor bus index, line index)
    for (std::size_t l = 0; l < lines.size(); ++l) {
        if (!index.count(lines[l].from) || !index.count(lines[l].to))
            throw SchemaError("grid: line endpoints reference unknown buses");
        if (lines[l].from == lines[l].to) throw TopologyError("grid: self-loop line");
        if (lines[l].r < 0.0 || lines[l].x < 0.0) throw SchemaError("grid: negative impedance");
        adj[static_cast<std::size_t>(index[lines[l].from])].push_back({index[lines[l].to], static_cast<int>(l)});
        adj[static_cast<std::size_t>(index[lines[l].to])].push_back({index[lines[l].from], static_cast<int>(l)});
    }

    parent_line.assign(nb, -1);
    children.assign(nb, {});
    topo_order.clear();
    std::vector<bool> seen(nb, false);
    std::queue<int> frontier;
    const int root = index[slack];
    seen[static_cast<std::size_t>(root)] = true;
    frontier.push(root);
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        topo_order.push_back(u);
        for (const auto& [v, l] : adj[static_cast<std::size_t>(u)]) {
            // With n_buses - 1 lines, connectivity (checked below) rules
            // out cycles, so visited neighbors are just the parent edge.
            if (seen[static_cast<std::size_t>(v)]) continue;
            seen[static_cast<std::size_t>(v)] = true;
            parent_line[static_cast<std::size_t>(v)] = l;
            // Orient the line parent -> child.
            GridLine& ln = lines[static_cast<std::size_t>(l)];
            if (index[ln.to] != v) std::swap(ln.from, ln.to);
            children[static_cast<std::size_t>(u)].push_back(l);
            frontier.push(v);
        }
    }
    for (std::size_t i = 0; i < nb; ++i)
        if (!seen[i]) throw TopologyError("grid: bus " + std::to_string(buses[i].id) + " unreachable from slack");

    line_from_idx.resize(lines.size());
    line_to_idx.resize(lines.size());
    for (std::size_t l = 0; l < lines.size(); ++l) {
        line_from_idx[l] = index[lines[l].from];
        line_to_idx[l] = index[lines[l].to];
    }

    auto check_placement = [&](int id, const char* what) {
        if (!index.count(id)) throw SchemaError(std::string("grid: ") + what + " placement references unknown bus " +
                                                std::to_string(id));
    };
    for (int b : placements.wt) check_placement(b, "wt");
    for (int b : placements.pv) check_placement(b, "pv");
    if (placements.customer != 0) check_placement(placements.customer, "customer");
}

namespace {

// Baran-Wu 33-bus feeder: from, to, R (ohm), X (ohm), P load (kW), Q load (kVar)
// at the receiving bus.
struct Ieee33Row {
    int from, to;
    double r_ohm, x_ohm, p_kw, q_kvar;
};

constexpr std::array<Ieee33Row, 32> kIeee33{{
    {1, 2, 0.0922, 0.0470, 100, 60},   {2, 3, 0.4930, 0.2511, 90, 40},
    {3, 4, 0.3660, 0.1864, 120, 80},   {4, 5, 0.3811, 0.1941, 60, 30},
    {5, 6, 0.8190, 0.7070, 60, 20},    {6, 7, 0.1872, 0.6188, 200, 100},
    {7, 8, 0.7114, 0.2351, 200, 100},  {8, 9, 1.0300, 0.7400, 60, 20},
    {9, 10, 1.0440, 0.7400, 60, 20},   {10, 11, 0.1966, 0.0650, 45, 30},
    {11, 12, 0.3744, 0.1238, 60, 35},  {12, 13, 1.4680, 1.1550, 60, 35},
    {13, 14, 0.5416, 0.7129, 120, 80}, {14, 15, 0.5910, 0.5260, 60, 10},
    {15, 16, 0.7463, 0.5450, 60, 20},  {16, 17, 1.2890, 1.7210, 60, 20},
    {17, 18, 0.7320, 0.5740, 90, 40},  {2, 19, 0.1640, 0.1565, 90, 40},
    {19, 20, 1.5042, 1.3554, 90, 40},  {20, 21, 0.4095, 0.4784, 90, 40},
    {21, 22, 0.7089, 0.9373, 90, 40},  {3, 23, 0.4512, 0.3083, 90, 50},
    {23, 24, 0.8980, 0.7091, 420, 200},{24, 25, 0.8960, 0.7011, 420, 200},
    {6, 26, 0.2030, 0.1034, 60, 25},   {26, 27, 0.2842, 0.1447, 60, 25},
    {27, 28, 1.0590, 0.9337, 60, 20},  {28, 29, 0.8042, 0.7006, 120, 70},
    {29, 30, 0.5075, 0.2585, 200, 600},{30, 31, 0.9744, 0.9630, 150, 70},
    {31, 32, 0.3105, 0.3619, 210, 100},{32, 33, 0.3410, 0.5302, 60, 40},
}};

BusKind kind_from_string(const std::string& s) {
    if (s == "slack") return BusKind::slack;
    if (s == "load") return BusKind::load;
    if (s == "dg") return BusKind::dg;
    throw SchemaError("grid: unknown bus kind '" + s + "'");
}

std::string kind_to_string(BusKind k) {
    switch (k) {
        case BusKind::slack: return "slack";
        case BusKind::load: return "load";
        case BusKind::dg: return "dg";
    }
    return "load";
}

}  // namespace

GridModel make_ieee33(const Ieee33Options& opt) {
    GridModel g;
    g.base_kv = 12.66;
    g.base_mva = 10.0;
    g.slack = 1;
    g.export_price = opt.export_price;
    const double z_base = g.base_kv * g.base_kv / g.base_mva;

    for (int id = 1; id <= 33; ++id) {
        GridBus b;
        b.id = id;
        b.vmin = opt.vmin;
        b.vmax = opt.vmax;
        if (id == 1) {
            b.kind = BusKind::slack;
            b.cost = opt.slack_import_cost;
            b.pmin = -opt.slack_cap_mw / g.base_mva;
            b.pmax = opt.slack_cap_mw / g.base_mva;
            b.qmin = -opt.slack_cap_mvar / g.base_mva;
            b.qmax = opt.slack_cap_mvar / g.base_mva;
            b.vmin = 0.0;
            b.vmax = 4.0;  // slack voltage is pinned by an equality, not the box
        }
        g.buses.push_back(b);
    }
    for (const Ieee33Row& row : kIeee33) {
        GridBus& b = g.buses[static_cast<std::size_t>(row.to - 1)];
        b.p_load = row.p_kw / 1000.0 / g.base_mva;
        b.q_load = row.q_kvar / 1000.0 / g.base_mva;
        GridLine l;
        l.from = row.from;
        l.to = row.to;
        l.r = row.r_ohm / z_base;
        l.x = row.x_ohm / z_base;
        l.lmax = opt.lmax;
        g.lines.push_back(l);
    }
    for (int id : opt.dg_buses) {
        GridBus& b = g.buses.at(static_cast<std::size_t>(id - 1));
        b.kind = BusKind::dg;
        b.pmax = opt.dg_pmax_mw / g.base_mva;
        b.qmax = opt.dg_qmax_mvar / g.base_mva;
        b.cost = opt.dg_cost;
    }
    g.placements.wt = opt.wt_buses;
    g.placements.pv = opt.pv_buses;
    g.placements.customer = opt.customer_bus;
    g.finalize();
    return g;
}

GridModel grid_from_json(const std::string& json_text) {
    using nlohmann::json;
    json j = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw SchemaError("grid json: parse error");
    GridModel g;
    for (const char* req : {"base_kv", "base_mva", "slack", "buses", "lines"})
        if (!j.contains(req)) throw SchemaError(std::string("grid json: missing field ") + req);
    g.base_kv = j["base_kv"].get<double>();
    g.base_mva = j["base_mva"].get<double>();
    g.slack = j["slack"].get<int>();
    g.slack_v = j.value("slack_v", 1.0);
    g.export_price = j.value("export_price", 5.0);
    const std::string units = j.value("impedance_units", "pu");
    double z_scale = 1.0;
    if (units == "ohm")
        z_scale = 1.0 / (g.base_kv * g.base_kv / g.base_mva);
    else if (units != "pu")
        throw SchemaError("grid json: impedance_units must be 'pu' or 'ohm'");

    for (const auto& jb : j["buses"]) {
        GridBus b;
        b.id = jb.at("id").get<int>();
        b.p_load = jb.value("p", 0.0) / g.base_mva;
        b.q_load = jb.value("q", 0.0) / g.base_mva;
        b.pmin = jb.value("pmin", 0.0) / g.base_mva;
        b.pmax = jb.value("pmax", 0.0) / g.base_mva;
        b.qmin = jb.value("qmin", 0.0) / g.base_mva;
        b.qmax = jb.value("qmax", 0.0) / g.base_mva;
        b.vmin = jb.value("vmin", 0.81);
        b.vmax = jb.value("vmax", 1.1025);
        b.cost = jb.value("cost", 0.0);
        b.kind = kind_from_string(jb.value("kind", "load"));
        g.buses.push_back(b);
    }
    for (const auto& jl : j["lines"]) {
        GridLine l;
        l.from = jl.at("from").get<int>();
        l.to = jl.at("to").get<int>();
        l.r = jl.at("r").get<double>() * z_scale;
        l.x = jl.at("x").get<double>() * z_scale;
        l.lmax = jl.value("lmax", 9.0);
        g.lines.push_back(l);
    }
    if (j.contains("placements")) {
        const auto& jp = j["placements"];
        if (jp.contains("wt")) g.placements.wt = jp["wt"].get<std::vector<int>>();
        if (jp.contains("pv")) g.placements.pv = jp["pv"].get<std::vector<int>>();
        g.placements.customer = jp.value("customer", 0);
    }
    g.finalize();
    return g;
}

std::string grid_to_json(const GridModel& grid) {
    JsonWriter w;
    w.begin_object();
    w.key("base_kv").value(grid.base_kv);
    w.key("base_mva").value(grid.base_mva);
    w.key("slack").value(grid.slack);
    w.key("slack_v").value(grid.slack_v);
    w.key("export_price").value(grid.export_price);
    w.key("impedance_units").value("pu");
    w.key("buses").begin_array();
    for (const GridBus& b : grid.buses) {
        w.begin_object();
        w.key("id").value(b.id);
        w.key("p").value(b.p_load * grid.base_mva);
        w.key("q").value(b.q_load * grid.base_mva);
        w.key("pmin").value(b.pmin * grid.base_mva);
        w.key("pmax").value(b.pmax * grid.base_mva);
        w.key("qmin").value(b.qmin * grid.base_mva);
        w.key("qmax").value(b.qmax * grid.base_mva);
        w.key("vmin").value(b.vmin);
        w.key("vmax").value(b.vmax);
        w.key("cost").value(b.cost);
        w.key("kind").value(kind_to_string(b.kind));
        w.end_object();
    }
    w.end_array();
    w.key("lines").begin_array();
    for (const GridLine& l : grid.lines) {
        w.begin_object();
        w.key("from").value(l.from);
        w.key("to").value(l.to);
        w.key("r").value(l.r);
        w.key("x").value(l.x);
        w.key("lmax").value(l.lmax);
        w.end_object();
    }
    w.end_array();
    w.key("placements").begin_object();
    w.key("wt").begin_array();
    for (int b : grid.placements.wt) w.value(b);
    w.end_array();
    w.key("pv").begin_array();
    for (int b : grid.placements.pv) w.value(b);
    w.end_array();
    w.key("customer").value(grid.placements.customer);
    w.end_object();
    w.end_object();
    return w.str();
}

GridModel load_grid(const std::string& source) {
    if (source == "ieee33") return make_ieee33();
    return grid_from_json(read_text_file(source));
}

}  // namespace qpopf
