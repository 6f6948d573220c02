#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpopf/dataset.hpp"
#include "qpopf/exec.hpp"
#include "qpopf/opf.hpp"

namespace qpopf {

struct QuantityStats {
    double mean = 0.0;
    double std = 0.0;  // (n-1)-normalized; 0 by convention for a single sample
};

struct PopfReport {
    std::map<std::string, QuantityStats> quantities;  // "v_kv_30", "objective", ...
    int n_total = 0;
    int n_feasible = 0;
    std::vector<int> infeasible_samples;  // indices of dropped scenarios
};

/// Draw n scenarios, solve each deterministically, aggregate mean and
/// standard deviation per quantity over the feasible ones. Scenario i uses
/// the rng stream split at i, so results are independent of scheduling.
PopfReport monte_carlo_popf(const GridModel& grid, const DistributionSpec& spec, int n_samples,
                            const Rng& rng, Exec exec = Exec::automatic,
                            std::vector<UncertainSample>* keep_samples = nullptr,
                            std::vector<double>* keep_target_kv = nullptr, int target_bus = 0);

std::string popf_report_to_json(const PopfReport& report);

/// (wind1, wind2, solar1, solar2, customer load MW) -> voltage magnitude
/// (kV) at the target bus. Infeasible scenarios are dropped and recorded;
/// more than half dropped is an error.
struct DatasetBuildInfo {
    int n_requested = 0;
    int n_feasible = 0;
    std::vector<int> dropped;
};

Dataset build_dataset(const GridModel& grid, const DistributionSpec& spec, int n, int target_bus,
                      const Rng& rng, Exec exec = Exec::automatic, DatasetBuildInfo* info = nullptr);

}  // namespace qpopf
