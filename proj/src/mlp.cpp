#include "qpopf/mlp.hpp"

#include <cmath>

#include "qpopf/errors.hpp"
#include "qpopf/rng.hpp"

namespace qpopf {

std::size_t MLPModel::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
        n += static_cast<std::size_t>(layer_sizes[l + 1]) * static_cast<std::size_t>(layer_sizes[l]) +
             static_cast<std::size_t>(layer_sizes[l + 1]);
    return n;
}

void MLPModel::validate() const {
    if (layer_sizes.size() < 2) throw ConfigError("mlp: need at least input and output layers");
    for (int s : layer_sizes)
        if (s < 1) throw ConfigError("mlp: layer sizes must be positive");
    if (layer_sizes.back() != 1) throw ConfigError("mlp: output layer must have one unit");
    if (params.size() != param_count())
        throw DimensionError("mlp: parameter vector has wrong length");
}

MLPModel init_mlp_model(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    MLPModel m;
    m.layer_sizes = layer_sizes;
    m.params.resize(m.param_count());
    Rng rng(seed);
    std::size_t p = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto fan_in = static_cast<double>(layer_sizes[l]);
        const double bound = std::sqrt(1.0 / fan_in);
        const std::size_t n_layer = static_cast<std::size_t>(layer_sizes[l + 1]) *
                                        static_cast<std::size_t>(layer_sizes[l]) +
                                    static_cast<std::size_t>(layer_sizes[l + 1]);
        for (std::size_t i = 0; i < n_layer; ++i) m.params[p++] = (rng.uniform() * 2.0 - 1.0) * bound;
    }
    m.validate();
    return m;
}

namespace {

struct ForwardTrace {
    // Per layer: pre-activation z and activation a (a[0] is the input).
    std::vector<std::vector<double>> a;
    std::vector<std::vector<double>> z;
};

double forward_impl(const MLPModel& m, std::span<const double> x, ForwardTrace* trace) {
    const auto& sizes = m.layer_sizes;
    std::vector<double> act(x.begin(), x.end());
    if (trace) trace->a.push_back(act);
    std::size_t p = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t n_in = static_cast<std::size_t>(sizes[l]);
        const std::size_t n_out = static_cast<std::size_t>(sizes[l + 1]);
        std::vector<double> z(n_out);
        for (std::size_t o = 0; o < n_out; ++o) {
            double s = 0.0;
            const double* w = &m.params[p + o * n_in];
            for (std::size_t i = 0; i < n_in; ++i) s += w[i] * act[i];
            z[o] = s;
        }
        p += n_out * n_in;
        for (std::size_t o = 0; o < n_out; ++o) z[o] += m.params[p + o];
        p += n_out;
        const bool hidden = (l + 2 < sizes.size());
        std::vector<double> a_next(n_out);
        for (std::size_t o = 0; o < n_out; ++o) a_next[o] = hidden ? std::tanh(z[o]) : z[o];
        if (trace) {
            trace->z.push_back(std::move(z));
            trace->a.push_back(a_next);
        }
        act = std::move(a_next);
    }
    return act[0];
}

}  // namespace

double mlp_forward(const MLPModel& model, std::span<const double> x) {
    model.validate();
    if (static_cast<int>(x.size()) != model.layer_sizes.front())
        throw DimensionError("mlp_forward: feature vector length does not match input layer");
    return forward_impl(model, x, nullptr);
}

std::pair<double, GradientVector> mlp_loss_grad(const MLPModel& model, std::span<const double> x,
                                                double y_star) {
    model.validate();
    if (static_cast<int>(x.size()) != model.layer_sizes.front())
        throw DimensionError("mlp_loss_grad: feature vector length does not match input layer");
    ForwardTrace trace;
    const double yhat = forward_impl(model, x, &trace);
    const double residual = yhat - y_star;
    const double loss = residual * residual;

    const auto& sizes = model.layer_sizes;
    const std::size_t n_weight_layers = sizes.size() - 1;

    // Offset of each layer's weight block in the flat parameter vector.
    std::vector<std::size_t> offset(n_weight_layers);
    std::size_t p = 0;
    for (std::size_t l = 0; l < n_weight_layers; ++l) {
        offset[l] = p;
        p += static_cast<std::size_t>(sizes[l + 1]) * (static_cast<std::size_t>(sizes[l]) + 1);
    }

    GradientVector grad(model.param_count(), 0.0);
    std::vector<double> delta{2.0 * residual};  // d loss / d z at the output
    for (std::size_t l = n_weight_layers; l-- > 0;) {
        const std::size_t n_in = static_cast<std::size_t>(sizes[l]);
        const std::size_t n_out = static_cast<std::size_t>(sizes[l + 1]);
        const std::vector<double>& a_in = trace.a[l];
        double* gw = &grad[offset[l]];
        double* gb = gw + n_out * n_in;
        for (std::size_t o = 0; o < n_out; ++o) {
            for (std::size_t i = 0; i < n_in; ++i) gw[o * n_in + i] = delta[o] * a_in[i];
            gb[o] = delta[o];
        }
        if (l == 0) break;
        std::vector<double> delta_prev(n_in, 0.0);
        const double* w = &model.params[offset[l]];
        for (std::size_t i = 0; i < n_in; ++i) {
            double s = 0.0;
            for (std::size_t o = 0; o < n_out; ++o) s += w[o * n_in + i] * delta[o];
            const double a = trace.a[l][i];  // tanh activation of the layer below
            delta_prev[i] = s * (1.0 - a * a);
        }
        delta = std::move(delta_prev);
    }
    return {loss, std::move(grad)};
}

double r_squared(std::span<const double> predictions, std::span<const double> truths) {
    if (predictions.size() != truths.size())
        throw DimensionError("r_squared: prediction and truth lengths differ");
    if (truths.size() < 2) throw ArgumentError("r_squared: need at least two points");
    double mean = 0.0;
    for (double y : truths) mean += y;
    mean /= static_cast<double>(truths.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        ss_tot += (truths[i] - mean) * (truths[i] - mean);
        ss_res += (truths[i] - predictions[i]) * (truths[i] - predictions[i]);
    }
    if (ss_tot == 0.0) throw ArgumentError("r_squared: truths have zero variance, metric undefined");
    return 1.0 - ss_res / ss_tot;
}

}  // namespace qpopf
