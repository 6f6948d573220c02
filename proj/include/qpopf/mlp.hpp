#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qpopf/circuit.hpp"  // FeatureScale / TargetScale
#include "qpopf/gradients.hpp"

namespace qpopf {

/// Fully connected regressor with tanh hidden activations and an identity
/// output. Parameters flatten in fixed order W1, b1, W2, b2, ... with each
/// W row-major (out x in); for the default (5, 32, 32, 1) shape that is
/// 1281 parameters.
struct MLPModel {
    std::vector<int> layer_sizes{5, 32, 32, 1};
    std::vector<double> params;  // flattened weights and biases

    FeatureScale feature_scale;
    TargetScale target_scale;

    std::size_t param_count() const;
    void validate() const;
};

/// Seeded init, each layer uniform in [-sqrt(1/fan_in), sqrt(1/fan_in)].
MLPModel init_mlp_model(const std::vector<int>& layer_sizes, std::uint64_t seed);

double mlp_forward(const MLPModel& model, std::span<const double> x);

/// Squared-error loss and its per-sample gradient w.r.t. every parameter.
std::pair<double, GradientVector> mlp_loss_grad(const MLPModel& model, std::span<const double> x,
                                                double y_star);

/// 1 - SS_res / SS_tot. Negative when predictions are worse than the mean.
double r_squared(std::span<const double> predictions, std::span<const double> truths);

}  // namespace qpopf
