#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpopf/dataset.hpp"
#include "qpopf/dp.hpp"
#include "qpopf/exec.hpp"
#include "qpopf/mlp.hpp"

namespace qpopf {

enum class Optimizer { sgd, adam };

/// Batch selection. `uniform` draws each batch uniformly without
/// replacement (the sampling the amplification theorem assumes);
/// `shuffle` partitions a per-epoch permutation.
enum class Sampling { uniform, shuffle };

struct DPConfig {
    double clip_norm = 1.0;
    double noise_multiplier = 0.0;
    int batch_size = 32;
    double learning_rate = 0.05;
    int epochs = 1000;
    Optimizer optimizer = Optimizer::adam;
    Sampling sampling = Sampling::uniform;
    std::uint64_t seed = 0;
    double delta = 1e-5;
    double delta_prime = 1e-5;
    double abort_loss_threshold = 1e12;
    bool record_theta = false;  // keep the full parameter trajectory
    Exec exec = Exec::automatic;

    void validate(std::size_t dataset_size) const;
};

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::int64_t step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState zeros(std::size_t dim);
};

/// Bias-corrected Adam update applied in place.
void adam_step(std::vector<double>& theta, const GradientVector& grad, AdamState& state,
               double learning_rate);

enum class TrainStatus { finished, aborted };

struct AbortDiagnostic {
    std::int64_t step = -1;
    double loss = 0.0;
    double param_norm = 0.0;
    std::string reason;
};

struct TrainResult {
    TrainStatus status = TrainStatus::finished;
    std::optional<AbortDiagnostic> abort;
    std::vector<double> step_loss;   // pre-update mean batch loss, one per step
    std::vector<double> epoch_loss;  // mean of each epoch's step losses
    PrivacySpend spend;              // composition over T = epochs
    PrivacySpend spend_per_step;     // composition over epochs * floor(N/B) steps
    std::int64_t steps_per_epoch = 0;
    std::uint64_t noise_draws = 0;
    std::vector<std::vector<double>> theta_trace;  // filled when record_theta
};

/// Differentially private training: per-sample gradients, l2 clipping,
/// Gaussian noise on the summed batch gradient, then an SGD or Adam step.
/// The dataset must already be feature/target scaled.
TrainResult train(const Dataset& scaled, CircuitModel& model, const DPConfig& config);
TrainResult train(const Dataset& scaled, MLPModel& model, const DPConfig& config);

/// Plain mini-batch training, no clipping or noise machinery; consumes
/// batch randomness identically to `train` so that sigma = 0 with a huge
/// clip norm reproduces it bit for bit.
TrainResult train_nonprivate(const Dataset& scaled, CircuitModel& model, const DPConfig& config);
TrainResult train_nonprivate(const Dataset& scaled, MLPModel& model, const DPConfig& config);

/// Predictions in scaled target space for every row of a scaled dataset.
std::vector<double> predict_scaled(const CircuitModel& model, const Dataset& scaled,
                                   Exec exec = Exec::automatic);
std::vector<double> predict_scaled(const MLPModel& model, const Dataset& scaled,
                                   Exec exec = Exec::automatic);

}  // namespace qpopf
