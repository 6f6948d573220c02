#include "qpopf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qpopf/io.hpp"

namespace qpopf {

double quantum_time_seconds(int depth, const TimingModel& timing) {
    if (depth < 0) throw ArgumentError("quantum_time: depth must be >= 0");
    return timing.prep_and_measure_s + timing.gate_s * static_cast<double>(depth);
}

double quantum_time_seconds(const CircuitModel& model, const TimingModel& timing) {
    return quantum_time_seconds(circuit_depth(model), timing);
}

double predict_kv(const CircuitModel& model, std::span<const double> raw_x, Exec exec) {
    const auto angles = scale_features(model.feature_scale, raw_x);
    const double z = circuit_expectation(model, angles, Observable{0}, exec);
    return unscale_target(model.target_scale, z);
}

double predict_kv(const MLPModel& model, std::span<const double> raw_x, Exec exec) {
    (void)exec;
    const auto scaled = scale_features(model.feature_scale, raw_x);
    return unscale_target(model.target_scale, mlp_forward(model, scaled));
}

namespace {

template <typename Model>
EvalResult evaluate_impl(const Model& model, const Dataset& raw, Exec exec) {
    EvalResult res;
    res.predictions_kv.resize(raw.size());
    const bool par = use_parallel_items(exec, raw.size());
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(raw.size()); ++i)
        res.predictions_kv[static_cast<std::size_t>(i)] =
            predict_kv(model, raw.row(static_cast<std::size_t>(i)), Exec::serial);
    res.r2 = r_squared(res.predictions_kv, raw.y);
    return res;
}

}  // namespace

EvalResult evaluate_model(const CircuitModel& model, const Dataset& raw, Exec exec) {
    return evaluate_impl(model, raw, exec);
}

EvalResult evaluate_model(const MLPModel& model, const Dataset& raw, Exec exec) {
    return evaluate_impl(model, raw, exec);
}

double Fig3Result::pearson_load_vs_model(std::size_t k) const {
    double mx = 0.0;
    double my = 0.0;
    const double n = static_cast<double>(rows.size());
    for (const Fig3Row& r : rows) {
        mx += r.load_mw;
        my += r.mean_kv[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (const Fig3Row& r : rows) {
        const double dx = r.load_mw - mx;
        const double dy = r.mean_kv[k] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ArgumentError("pearson: a column has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double Fig3Result::trace_variance(std::size_t k) const {
    double m = 0.0;
    const double n = static_cast<double>(rows.size());
    for (const Fig3Row& r : rows) m += r.mean_kv[k];
    m /= n;
    double ss = 0.0;
    for (const Fig3Row& r : rows) ss += (r.mean_kv[k] - m) * (r.mean_kv[k] - m);
    return ss / n;
}

Fig3Result run_figure3(const GridModel& grid,
                       const std::vector<std::pair<double, CircuitModel>>& models_by_sigma,
                       const DistributionSpec& spec, int t_max, const ShotConfig& shots,
                       std::uint64_t seed, double load_scale_mw, Exec exec) {
    if (models_by_sigma.empty()) throw ConfigError("figure3: no models configured");
    if (t_max < 1) throw ConfigError("figure3: t_max must be >= 1");
    if (shots.repeats < 1 || shots.shots < 1) throw ConfigError("figure3: bad shot configuration");
    if (grid.placements.customer == 0) throw ConfigError("figure3: grid has no customer placement");

    const std::size_t ci = static_cast<std::size_t>(grid.bus_index(grid.placements.customer));
    const double nominal_mw = grid.buses[ci].p_load * grid.base_mva;
    const double scale_mw = load_scale_mw > 0.0 ? load_scale_mw : nominal_mw;

    // Renewables held at their truncated means over the whole trace.
    const UncertainSample means = mean_sample(spec);

    Fig3Result out;
    for (const auto& [sigma, model] : models_by_sigma) {
        (void)model;
        out.sigmas.push_back(sigma);
    }
    out.rows.resize(static_cast<std::size_t>(t_max) + 1);

    const Rng root(seed);
    const bool par = use_parallel_items(exec, out.rows.size());
#pragma omp parallel for schedule(dynamic) if (par)
    for (int t = 0; t <= t_max; ++t) {
        Fig3Row& row = out.rows[static_cast<std::size_t>(t)];
        row.t = static_cast<double>(t);
        row.load_mw = scale_mw * load_pattern(static_cast<double>(t));

        UncertainSample sample = means;
        sample.load_perturbation_mw = row.load_mw - nominal_mw;
        const OPFSolution sol = solve_opf(grid, sample);
        row.v_opf_kv = sol.voltage_kv(grid, grid.placements.customer);

        const double raw_x[5] = {sample.wind_mw[0], sample.wind_mw[1], sample.solar_mw[0],
                                 sample.solar_mw[1], row.load_mw};
        row.mean_kv.resize(out.sigmas.size());
        row.std_kv.resize(out.sigmas.size());
        for (std::size_t k = 0; k < models_by_sigma.size(); ++k) {
            const CircuitModel& model = models_by_sigma[k].second;
            const auto angles = scale_features(model.feature_scale, raw_x);
            const StateVector state = run_circuit(model, angles, Exec::serial);
            std::vector<double> estimates(static_cast<std::size_t>(shots.repeats));
            for (int rep = 0; rep < shots.repeats; ++rep) {
                Rng stream = root.split((static_cast<std::uint64_t>(k) << 40) ^
                                        (static_cast<std::uint64_t>(t) << 8) ^
                                        static_cast<std::uint64_t>(rep));
                const double z = sample_expectation(state, Observable{0}, shots.shots, stream,
                                                    Exec::serial);
                estimates[static_cast<std::size_t>(rep)] = unscale_target(model.target_scale, z);
            }
            double m = 0.0;
            for (double e : estimates) m += e;
            m /= static_cast<double>(estimates.size());
            double ss = 0.0;
            for (double e : estimates) ss += (e - m) * (e - m);
            row.mean_kv[k] = m;
            row.std_kv[k] = estimates.size() > 1
                                ? std::sqrt(ss / static_cast<double>(estimates.size() - 1))
                                : 0.0;
        }
    }
    return out;
}

std::string figure3_to_csv(const Fig3Result& result) {
    std::string out = "t,load,v_opf";
    for (double s : result.sigmas) {
        // Sigma values in headers print compactly (0, 1, 5, 10, or 0.5).
        std::string tag = fmt_double(s);
        out += ",v_sigma" + tag + "_mean,v_sigma" + tag + "_std";
    }
    out += '\n';
    for (const Fig3Row& r : result.rows) {
        out += fmt_double(r.t);
        out += ',';
        out += fmt_double(r.load_mw);
        out += ',';
        out += fmt_double(r.v_opf_kv);
        for (std::size_t k = 0; k < result.sigmas.size(); ++k) {
            out += ',';
            out += fmt_double(r.mean_kv[k]);
            out += ',';
            out += fmt_double(r.std_kv[k]);
        }
        out += '\n';
    }
    return out;
}

Table2Result run_table2(const GridModel& grid,
                        const std::vector<std::pair<double, CircuitModel>>& models_by_sigma,
                        const DistributionSpec& spec, int n_samples, std::uint64_t seed,
                        int target_bus, Exec exec) {
    std::vector<UncertainSample> samples;
    std::vector<double> ref_kv;
    const Rng rng(seed);
    const PopfReport report =
        monte_carlo_popf(grid, spec, n_samples, rng, exec, &samples, &ref_kv, target_bus);

    Table2Result out;
    out.n_total = report.n_total;
    out.n_feasible = report.n_feasible;
    const auto& ref = report.quantities.at("v_kv_" + std::to_string(target_bus));
    out.ref_mean_kv = ref.mean;
    out.ref_std_kv = ref.std;

    const std::size_t ci = static_cast<std::size_t>(grid.bus_index(grid.placements.customer));
    const double nominal_mw = grid.buses[ci].p_load * grid.base_mva;

    for (const auto& [sigma, model] : models_by_sigma) {
        std::vector<double> pred(samples.size());
        const bool par = use_parallel_items(exec, samples.size());
#pragma omp parallel for schedule(static) if (par)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(samples.size()); ++i) {
            const UncertainSample& s = samples[static_cast<std::size_t>(i)];
            const double load_mw = std::max(0.0, nominal_mw + s.load_perturbation_mw);
            const double raw_x[5] = {s.wind_mw[0], s.wind_mw[1], s.solar_mw[0], s.solar_mw[1], load_mw};
            pred[static_cast<std::size_t>(i)] = predict_kv(model, std::span<const double>(raw_x, 5),
                                                           Exec::serial);
        }
        double mean = 0.0;
        for (double p : pred) mean += p;
        mean /= static_cast<double>(pred.size());
        double ss = 0.0;
        for (double p : pred) ss += (p - mean) * (p - mean);
        const double std_kv =
            pred.size() > 1 ? std::sqrt(ss / static_cast<double>(pred.size() - 1)) : 0.0;

        Table2Entry e;
        e.sigma = sigma;
        e.mean_kv = mean;
        e.std_kv = std_kv;
        e.eps_mean_pct = std::abs(mean - out.ref_mean_kv) / out.ref_mean_kv * 100.0;
        e.eps_std_pct = out.ref_std_kv > 0.0 ? std::abs(std_kv - out.ref_std_kv) / out.ref_std_kv * 100.0
                                             : 0.0;
        out.entries.push_back(e);
    }
    return out;
}

std::string table2_to_json(const Table2Result& result) {
    JsonWriter w;
    w.begin_object();
    w.key("reference").begin_object();
    w.key("mean_kv").value(result.ref_mean_kv);
    w.key("std_kv").value(result.ref_std_kv);
    w.key("n_feasible").value(result.n_feasible);
    w.key("n_total").value(result.n_total);
    w.end_object();
    w.key("models").begin_array();
    for (const Table2Entry& e : result.entries) {
        w.begin_object();
        w.key("sigma").value(e.sigma);
        w.key("mean_kv").value(e.mean_kv);
        w.key("std_kv").value(e.std_kv);
        w.key("eps_mean_pct").value(e.eps_mean_pct);
        w.key("eps_std_pct").value(e.eps_std_pct);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string table3_to_csv(const std::vector<Table3Row>& rows) {
    std::string out = "model,sigma,seed,r2,n_parameters,time_s\n";
    for (const Table3Row& r : rows) {
        out += r.model;
        out += ',';
        out += fmt_double(r.sigma);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += fmt_double(r.r2);
        out += ',';
        out += std::to_string(r.n_parameters);
        out += ',';
        out += fmt_double(r.time_s);
        out += '\n';
    }
    return out;
}

namespace {

template <typename Fn>
double median_time_s(Fn&& fn, int reps) {
    if (reps < 1) throw ArgumentError("measure_forward_time: reps must be >= 1");
    std::vector<double> times(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        times[static_cast<std::size_t>(i)] = std::chrono::duration<double>(t1 - t0).count();
    }
    std::nth_element(times.begin(), times.begin() + reps / 2, times.end());
    return times[static_cast<std::size_t>(reps) / 2];
}

}  // namespace

double measure_forward_time_s(const MLPModel& model, std::span<const double> raw_x, int reps) {
    volatile double sink = 0.0;
    const double r = median_time_s([&] { sink = predict_kv(model, raw_x, Exec::serial); }, reps);
    (void)sink;
    return r;
}

double measure_forward_time_s(const CircuitModel& model, std::span<const double> raw_x, int reps) {
    volatile double sink = 0.0;
    const double r = median_time_s([&] { sink = predict_kv(model, raw_x, Exec::serial); }, reps);
    (void)sink;
    return r;
}

}  // namespace qpopf
