#include "qpopf/train.hpp"

#include <cmath>
#include <numeric>

namespace qpopf {

void DPConfig::validate(std::size_t dataset_size) const {
    if (!(clip_norm > 0.0)) throw ConfigError("train: clip norm must be > 0");
    if (noise_multiplier < 0.0) throw ConfigError("train: noise multiplier must be >= 0");
    if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
    if (static_cast<std::size_t>(batch_size) > dataset_size)
        throw ConfigError("train: batch size exceeds dataset size");
    if (!(learning_rate > 0.0)) throw ConfigError("train: learning rate must be > 0");
    if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("train: delta must be in (0, 1)");
    if (!(delta_prime > 0.0)) throw ConfigError("train: delta' must be > 0");
}

AdamState AdamState::zeros(std::size_t dim) {
    AdamState s;
    s.first_moment.assign(dim, 0.0);
    s.second_moment.assign(dim, 0.0);
    return s;
}

void adam_step(std::vector<double>& theta, const GradientVector& grad, AdamState& state,
               double learning_rate) {
    if (grad.size() != theta.size() || state.first_moment.size() != theta.size())
        throw DimensionError("adam_step: shape mismatch");
    state.step_count += 1;
    const double b1 = state.beta1;
    const double b2 = state.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
    for (std::size_t j = 0; j < theta.size(); ++j) {
        state.first_moment[j] = b1 * state.first_moment[j] + (1.0 - b1) * grad[j];
        state.second_moment[j] = b2 * state.second_moment[j] + (1.0 - b2) * grad[j] * grad[j];
        const double m_hat = state.first_moment[j] / bc1;
        const double v_hat = state.second_moment[j] / bc2;
        theta[j] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

namespace {

/// Uniform adapter over the two trainable model families.
struct QnnAccess {
    CircuitModel& model;
    std::vector<double>& params() const { return model.theta; }
    std::pair<double, GradientVector> loss_and_grad(std::span<const double> x, double y,
                                                    Exec exec) const {
        return loss_grad(model, x, y, Observable{0}, exec);
    }
};

struct MlpAccess {
    MLPModel& model;
    std::vector<double>& params() const { return model.params; }
    std::pair<double, GradientVector> loss_and_grad(std::span<const double> x, double y,
                                                    Exec /*exec*/) const {
        return mlp_loss_grad(model, x, y);
    }
};

/// Draw `batch_size` distinct indices uniformly from [0, n).
std::vector<std::size_t> draw_uniform_batch(std::size_t n, int batch_size, Rng& rng) {
    // Partial Fisher-Yates over an index pool.
    static thread_local std::vector<std::size_t> pool;
    pool.resize(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> batch(static_cast<std::size_t>(batch_size));
    for (int k = 0; k < batch_size; ++k) {
        const std::size_t r = static_cast<std::size_t>(k) +
                              static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - static_cast<std::size_t>(k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[std::min(r, n - 1)]);
        batch[static_cast<std::size_t>(k)] = pool[static_cast<std::size_t>(k)];
    }
    return batch;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t r = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(idx[i - 1], idx[std::min(r, i - 1)]);
    }
    return idx;
}

template <typename Access>
TrainResult train_impl(const Dataset& data, Access access, const DPConfig& cfg, bool privatized) {
    cfg.validate(data.size());
    std::vector<double>& theta = access.params();
    const std::size_t dim = theta.size();
    const std::size_t n = data.size();
    const int b = cfg.batch_size;
    const std::int64_t steps_per_epoch = static_cast<std::int64_t>(n) / b;
    if (steps_per_epoch < 1) throw ConfigError("train: dataset smaller than one batch");

    Rng batch_rng = Rng(cfg.seed).split(1);
    Rng noise_rng = Rng(cfg.seed).split(2);

    TrainResult result;
    result.steps_per_epoch = steps_per_epoch;
    result.step_loss.reserve(static_cast<std::size_t>(cfg.epochs * steps_per_epoch));
    result.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));

    AdamState adam = AdamState::zeros(dim);
    std::vector<GradientVector> slots(static_cast<std::size_t>(b));
    std::vector<double> sample_loss(static_cast<std::size_t>(b));

    std::int64_t global_step = 0;
    for (int epoch = 0; epoch < cfg.epochs && result.status == TrainStatus::finished; ++epoch) {
        std::vector<std::size_t> order;
        if (cfg.sampling == Sampling::shuffle) order = shuffled_indices(n, batch_rng);
        for (std::int64_t step = 0; step < steps_per_epoch; ++step) {
            std::vector<std::size_t> batch;
            if (cfg.sampling == Sampling::shuffle) {
                const auto begin = order.begin() + static_cast<std::ptrdiff_t>(step * b);
                batch.assign(begin, begin + b);
            } else {
                batch = draw_uniform_batch(n, b, batch_rng);
            }

            // Per-sample work is independent; gradients land in fixed
            // slots and every reduction below runs serially in ascending
            // sample order, so results do not depend on the thread count.
            const bool par = use_parallel_items(cfg.exec, static_cast<std::size_t>(b));
            bool bad_gradient = false;
#pragma omp parallel for schedule(static) if (par)
            for (int k = 0; k < b; ++k) {
                const std::size_t i = batch[static_cast<std::size_t>(k)];
                auto [loss, grad] = access.loss_and_grad(data.row(i), data.y[i], Exec::serial);
                bool finite = true;
                for (double g : grad)
                    if (!std::isfinite(g)) finite = false;
                if (!finite) {
#pragma omp atomic write
                    bad_gradient = true;
                } else if (privatized) {
                    grad = clip_gradient(grad, cfg.clip_norm);
                    // Clip contract, checked on every sample.
                    if (l2_norm(grad) > cfg.clip_norm * (1.0 + 1e-12)) {
#pragma omp atomic write
                        bad_gradient = true;
                    }
                }
                slots[static_cast<std::size_t>(k)] = std::move(grad);
                sample_loss[static_cast<std::size_t>(k)] = loss;
            }

            double batch_loss = 0.0;
            for (int k = 0; k < b; ++k) batch_loss += sample_loss[static_cast<std::size_t>(k)];
            batch_loss /= static_cast<double>(b);
            result.step_loss.push_back(batch_loss);

            if (bad_gradient || !std::isfinite(batch_loss) || batch_loss > cfg.abort_loss_threshold) {
                result.status = TrainStatus::aborted;
                AbortDiagnostic d;
                d.step = global_step;
                d.loss = batch_loss;
                d.param_norm = l2_norm(theta);
                d.reason = bad_gradient              ? "non-finite per-sample gradient"
                           : std::isfinite(batch_loss) ? "loss exceeded abort threshold"
                                                       : "non-finite loss";
                result.abort = d;
                break;
            }

            const GradientVector update = noisy_batch_gradient(
                slots, cfg.clip_norm, privatized ? cfg.noise_multiplier : 0.0, b, noise_rng);

            if (cfg.optimizer == Optimizer::adam) {
                adam_step(theta, update, adam, cfg.learning_rate);
            } else {
                for (std::size_t j = 0; j < dim; ++j) theta[j] -= cfg.learning_rate * update[j];
            }
            if (cfg.record_theta) result.theta_trace.push_back(theta);
            ++global_step;
        }
        const std::size_t epoch_begin = static_cast<std::size_t>(epoch) * static_cast<std::size_t>(steps_per_epoch);
        double esum = 0.0;
        std::size_t ecount = 0;
        for (std::size_t s = epoch_begin; s < result.step_loss.size(); ++s, ++ecount)
            esum += result.step_loss[s];
        if (ecount > 0) result.epoch_loss.push_back(esum / static_cast<double>(ecount));
    }

    result.noise_draws = noise_rng.normal_draw_count();
    const double q = static_cast<double>(b) / static_cast<double>(n);
    const double eps_step = per_step_epsilon(cfg.noise_multiplier, cfg.delta);
    result.spend = compose(eps_step, cfg.delta, q, cfg.epochs, cfg.delta_prime);
    result.spend_per_step =
        compose(eps_step, cfg.delta, q, static_cast<std::int64_t>(cfg.epochs) * steps_per_epoch,
                cfg.delta_prime);
    return result;
}

template <typename Model>
std::vector<double> predict_impl(const Model& model, const Dataset& data, Exec exec) {
    std::vector<double> out(data.size());
    const bool par = use_parallel_items(exec, data.size());
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(data.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if constexpr (std::is_same_v<Model, CircuitModel>) {
            out[idx] = circuit_expectation(model, data.row(idx), Observable{0}, Exec::serial);
        } else {
            out[idx] = mlp_forward(model, data.row(idx));
        }
    }
    return out;
}

}  // namespace

TrainResult train(const Dataset& scaled, CircuitModel& model, const DPConfig& config) {
    model.validate();
    if (scaled.n_features != static_cast<std::size_t>(model.n_qubits))
        throw DimensionError("train: dataset feature count does not match model");
    return train_impl(scaled, QnnAccess{model}, config, /*privatized=*/true);
}

TrainResult train(const Dataset& scaled, MLPModel& model, const DPConfig& config) {
    model.validate();
    if (scaled.n_features != static_cast<std::size_t>(model.layer_sizes.front()))
        throw DimensionError("train: dataset feature count does not match model");
    return train_impl(scaled, MlpAccess{model}, config, /*privatized=*/true);
}

TrainResult train_nonprivate(const Dataset& scaled, CircuitModel& model, const DPConfig& config) {
    model.validate();
    if (scaled.n_features != static_cast<std::size_t>(model.n_qubits))
        throw DimensionError("train: dataset feature count does not match model");
    return train_impl(scaled, QnnAccess{model}, config, /*privatized=*/false);
}

TrainResult train_nonprivate(const Dataset& scaled, MLPModel& model, const DPConfig& config) {
    model.validate();
    if (scaled.n_features != static_cast<std::size_t>(model.layer_sizes.front()))
        throw DimensionError("train: dataset feature count does not match model");
    return train_impl(scaled, MlpAccess{model}, config, /*privatized=*/false);
}

std::vector<double> predict_scaled(const CircuitModel& model, const Dataset& scaled, Exec exec) {
    return predict_impl(model, scaled, exec);
}

std::vector<double> predict_scaled(const MLPModel& model, const Dataset& scaled, Exec exec) {
    return predict_impl(model, scaled, exec);
}

}  // namespace qpopf
