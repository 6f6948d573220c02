#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpopf/model_io.hpp"
#include "qpopf/popf.hpp"
#include "qpopf/train.hpp"

namespace qpopf {

/// T = (T_p + T_M) + T_G * D analytic gate-time model.
struct TimingModel {
    double prep_and_measure_s = 1e-6;
    double gate_s = 1e-8;
};

double quantum_time_seconds(int depth, const TimingModel& timing = {});
double quantum_time_seconds(const CircuitModel& model, const TimingModel& timing = {});

/// Prediction in kV from raw (unscaled) features, exact expectation.
double predict_kv(const CircuitModel& model, std::span<const double> raw_x,
                  Exec exec = Exec::automatic);
double predict_kv(const MLPModel& model, std::span<const double> raw_x, Exec exec = Exec::automatic);

struct EvalResult {
    double r2 = 0.0;
    std::vector<double> predictions_kv;
};

EvalResult evaluate_model(const CircuitModel& model, const Dataset& raw, Exec exec = Exec::automatic);
EvalResult evaluate_model(const MLPModel& model, const Dataset& raw, Exec exec = Exec::automatic);

// ---------------------------------------------------------------------
// Voltage-trace experiment: sweep the patterned customer load over time,
// compare the non-private OPF voltage with each private model's
// shot-based prediction.

struct ShotConfig {
    std::uint64_t shots = 100;
    int repeats = 10;
};

struct Fig3Row {
    double t = 0.0;
    double load_mw = 0.0;
    double v_opf_kv = 0.0;
    std::vector<double> mean_kv;  // per configured sigma
    std::vector<double> std_kv;
};

struct Fig3Result {
    std::vector<double> sigmas;
    std::vector<Fig3Row> rows;

    /// Pearson correlation between the load column and model trace k.
    double pearson_load_vs_model(std::size_t k) const;
    /// Population variance of model trace k over time.
    double trace_variance(std::size_t k) const;
};

Fig3Result run_figure3(const GridModel& grid,
                       const std::vector<std::pair<double, CircuitModel>>& models_by_sigma,
                       const DistributionSpec& spec, int t_max, const ShotConfig& shots,
                       std::uint64_t seed, double load_scale_mw = 0.0,
                       Exec exec = Exec::automatic);

std::string figure3_to_csv(const Fig3Result& result);

// ---------------------------------------------------------------------
// POPF-accuracy experiment: Monte Carlo reference statistics vs statistics
// of each model's predictions on the same scenarios.

struct Table2Entry {
    double sigma = 0.0;
    double mean_kv = 0.0;
    double std_kv = 0.0;
    double eps_mean_pct = 0.0;  // |mean - ref_mean| / ref_mean * 100
    double eps_std_pct = 0.0;
};

struct Table2Result {
    double ref_mean_kv = 0.0;
    double ref_std_kv = 0.0;
    int n_feasible = 0;
    int n_total = 0;
    std::vector<Table2Entry> entries;
};

Table2Result run_table2(const GridModel& grid,
                        const std::vector<std::pair<double, CircuitModel>>& models_by_sigma,
                        const DistributionSpec& spec, int n_samples, std::uint64_t seed,
                        int target_bus, Exec exec = Exec::automatic);

std::string table2_to_json(const Table2Result& result);

// ---------------------------------------------------------------------
// Model-comparison rows (accuracy, size, timing).

struct Table3Row {
    std::string model;  // "qnn" or "mlp"
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double r2 = 0.0;
    std::size_t n_parameters = 0;
    double time_s = 0.0;  // analytic for the QNN, measured for the MLP
};

std::string table3_to_csv(const std::vector<Table3Row>& rows);

/// Median wall-clock seconds of one forward pass.
double measure_forward_time_s(const MLPModel& model, std::span<const double> raw_x, int reps);
double measure_forward_time_s(const CircuitModel& model, std::span<const double> raw_x, int reps);

}  // namespace qpopf
