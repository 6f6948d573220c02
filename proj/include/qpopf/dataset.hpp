#pragma once

#include <span>
#include <string>
#include <vector>

#include "qpopf/circuit.hpp"

namespace qpopf {

/// Feature rows plus a scalar target, row-major.
struct Dataset {
    std::size_t n_features = 0;
    std::vector<double> x;  // size() * n_features
    std::vector<double> y;

    std::size_t size() const { return y.size(); }
    std::span<const double> row(std::size_t i) const {
        return {x.data() + i * n_features, n_features};
    }
    void push_row(std::span<const double> features, double target);
};

/// Column headers used by generated OPF datasets.
inline const std::vector<std::string> kDatasetColumns = {"wind1", "wind2", "solar1",
                                                         "solar2", "load",  "v_target_kv"};

std::string dataset_to_csv(const Dataset& ds, const std::vector<std::string>& columns = kDatasetColumns);
Dataset dataset_from_csv(const std::string& csv_text);

void write_dataset_csv(const std::string& path, const Dataset& ds);
Dataset read_dataset_csv(const std::string& path);

/// Per-column min/max of the features.
FeatureScale fit_feature_scale(const Dataset& ds);
TargetScale fit_target_scale(const Dataset& ds);

/// New dataset with features mapped to [0, pi] and targets to [-1, 1].
Dataset apply_scaling(const Dataset& ds, const FeatureScale& fs, const TargetScale& ts);

}  // namespace qpopf
