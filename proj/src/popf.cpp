#include "qpopf/popf.hpp"

#include <cmath>

#include "qpopf/io.hpp"

namespace qpopf {

namespace {

struct ScenarioResult {
    bool feasible = false;
    UncertainSample sample;
    OPFSolution solution;
};

std::vector<ScenarioResult> run_scenarios(const GridModel& grid, const DistributionSpec& spec,
                                          int n_samples, const Rng& rng, Exec exec) {
    if (n_samples < 1) throw ArgumentError("monte carlo: n_samples must be >= 1");
    std::vector<ScenarioResult> results(static_cast<std::size_t>(n_samples));
    const bool par = use_parallel_items(exec, static_cast<std::size_t>(n_samples));
#pragma omp parallel for schedule(dynamic) if (par)
    for (int i = 0; i < n_samples; ++i) {
        Rng stream = rng.split(static_cast<std::uint64_t>(i));
        ScenarioResult& r = results[static_cast<std::size_t>(i)];
        r.sample = sample_uncertainty(spec, stream);
        try {
            r.solution = solve_opf(grid, r.sample);
            r.feasible = true;
        } catch (const InfeasibleError&) {
            r.feasible = false;
        } catch (const ConvergenceError&) {
            r.feasible = false;
        }
    }
    return results;
}

QuantityStats stats_of(const std::vector<double>& values) {
    QuantityStats s;
    const std::size_t n = values.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

}  // namespace

PopfReport monte_carlo_popf(const GridModel& grid, const DistributionSpec& spec, int n_samples,
                            const Rng& rng, Exec exec, std::vector<UncertainSample>* keep_samples,
                            std::vector<double>* keep_target_kv, int target_bus) {
    const auto results = run_scenarios(grid, spec, n_samples, rng, exec);

    PopfReport report;
    report.n_total = n_samples;
    std::map<std::string, std::vector<double>> columns;
    for (int i = 0; i < n_samples; ++i) {
        const ScenarioResult& r = results[static_cast<std::size_t>(i)];
        if (!r.feasible) {
            report.infeasible_samples.push_back(i);
            continue;
        }
        ++report.n_feasible;
        const OPFSolution& sol = r.solution;
        for (std::size_t bi = 0; bi < grid.n_buses(); ++bi) {
            const int id = grid.buses[bi].id;
            columns["v_kv_" + std::to_string(id)].push_back(std::sqrt(sol.bus_v[bi]) * grid.base_kv);
        }
        columns["objective"].push_back(sol.objective);
        columns["slack_import_mw"].push_back(sol.slack_import_mw);
        columns["slack_export_mw"].push_back(sol.slack_export_mw);
        double dg_total = 0.0;
        for (std::size_t bi = 0; bi < grid.n_buses(); ++bi)
            if (grid.buses[bi].kind == BusKind::dg) dg_total += sol.pg_mw[bi];
        columns["dg_total_mw"].push_back(dg_total);
        if (keep_samples) keep_samples->push_back(r.sample);
        if (keep_target_kv && target_bus != 0)
            keep_target_kv->push_back(sol.voltage_kv(grid, target_bus));
    }
    if (report.n_feasible == 0)
        throw AggregationError("monte carlo: every scenario was infeasible, nothing to aggregate");
    for (const auto& [name, values] : columns) report.quantities[name] = stats_of(values);
    return report;
}

std::string popf_report_to_json(const PopfReport& report) {
    JsonWriter w;
    w.begin_object();
    for (const auto& [name, st] : report.quantities) {
        w.key(name).begin_object();
        w.key("mean").value(st.mean);
        w.key("std").value(st.std);
        w.key("n_feasible").value(report.n_feasible);
        w.key("n_total").value(report.n_total);
        w.end_object();
    }
    w.end_object();
    return w.str();
}

Dataset build_dataset(const GridModel& grid, const DistributionSpec& spec, int n, int target_bus,
                      const Rng& rng, Exec exec, DatasetBuildInfo* info) {
    if (n < 1) throw ArgumentError("build_dataset: n must be >= 1");
    (void)grid.bus_index(target_bus);  // validate early
    if (grid.placements.customer == 0)
        throw ConfigError("build_dataset: grid has no customer placement");
    const auto results = run_scenarios(grid, spec, n, rng, exec);

    Dataset ds;
    ds.n_features = 5;
    DatasetBuildInfo local;
    local.n_requested = n;
    for (int i = 0; i < n; ++i) {
        const ScenarioResult& r = results[static_cast<std::size_t>(i)];
        if (!r.feasible) {
            local.dropped.push_back(i);
            continue;
        }
        ++local.n_feasible;
        // The load feature is the realized (truncated) customer load.
        const std::size_t ci = static_cast<std::size_t>(grid.bus_index(grid.placements.customer));
        const double nominal_mw = grid.buses[ci].p_load * grid.base_mva;
        const double load_mw = std::max(0.0, nominal_mw + r.sample.load_perturbation_mw);
        const double row[5] = {r.sample.wind_mw[0], r.sample.wind_mw[1], r.sample.solar_mw[0],
                               r.sample.solar_mw[1], load_mw};
        ds.push_row(std::span<const double>(row, 5), r.solution.voltage_kv(grid, target_bus));
    }
    if (info) *info = local;
    if (2 * local.n_feasible < n)
        throw DataQualityError("build_dataset: only " + std::to_string(local.n_feasible) + " of " +
                               std::to_string(n) + " scenarios were feasible");
    return ds;
}

}  // namespace qpopf
