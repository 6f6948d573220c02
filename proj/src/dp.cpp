#include "qpopf/dp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qpopf/errors.hpp"

namespace qpopf {

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

GradientVector clip_gradient(const GradientVector& g, double clip_norm) {
    if (!(clip_norm > 0.0)) throw ArgumentError("clip_gradient: clip norm must be > 0");
    double norm_sq = 0.0;
    for (double x : g) {
        if (!std::isfinite(x)) throw NumericError("clip_gradient: non-finite gradient entry");
        norm_sq += x * x;
    }
    const double norm = std::sqrt(norm_sq);
    GradientVector out(g);
    if (norm > clip_norm) {
        const double scale = clip_norm / norm;
        for (double& x : out) x *= scale;
    }
    return out;
}

GradientVector noisy_batch_gradient(const std::vector<GradientVector>& per_sample, double clip_norm,
                                    double noise_multiplier, int batch_size, Rng& rng) {
    if (per_sample.empty()) throw ArgumentError("noisy_batch_gradient: empty batch");
    if (static_cast<int>(per_sample.size()) != batch_size)
        throw ArgumentError("noisy_batch_gradient: batch has " + std::to_string(per_sample.size()) +
                            " gradients, expected " + std::to_string(batch_size));
    const std::size_t d = per_sample.front().size();
    GradientVector sum(d, 0.0);
    for (const GradientVector& g : per_sample) {
        if (g.size() != d) throw DimensionError("noisy_batch_gradient: ragged gradient list");
        for (std::size_t j = 0; j < d; ++j) sum[j] += g[j];
    }
    if (noise_multiplier > 0.0) {
        const double stddev = noise_multiplier * clip_norm;
        for (std::size_t j = 0; j < d; ++j) sum[j] += stddev * rng.normal();
    }
    const double inv_b = 1.0 / static_cast<double>(batch_size);
    for (double& x : sum) x *= inv_b;
    return sum;
}

double per_step_epsilon(double sigma, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("per_step_epsilon: delta must be in (0, 1)");
    if (sigma < 0.0) throw ArgumentError("per_step_epsilon: sigma must be >= 0");
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 * std::log(1.25 / delta)) / sigma;
}

double per_step_epsilon_verbatim(double sigma, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("per_step_epsilon: delta must be in (0, 1)");
    if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 * std::log(1.25) / delta) / sigma;
}

PrivacySpend compose(double eps_step, double delta_step, double q, std::int64_t steps,
                     double delta_prime) {
    if (!(q > 0.0 && q <= 1.0)) throw ArgumentError("compose: sampling rate q must be in (0, 1]");
    if (steps < 1) throw ArgumentError("compose: steps must be >= 1");
    if (!(delta_prime > 0.0)) throw ArgumentError("compose: delta' must be > 0");
    if (eps_step < 0.0 || delta_step < 0.0) throw ArgumentError("compose: negative per-step budget");

    PrivacySpend spend;
    spend.per_step_epsilon = eps_step;
    spend.subsampled_epsilon = q * eps_step;
    spend.subsampled_delta = q * delta_step;
    const double t = static_cast<double>(steps);
    const double eps_sub = spend.subsampled_epsilon;
    spend.composed_epsilon =
        std::sqrt(2.0 * t * std::log(1.0 / delta_prime)) * eps_sub + t * eps_sub * std::expm1(eps_sub);
    spend.composed_delta = t * spend.subsampled_delta + delta_prime;
    return spend;
}

}  // namespace qpopf
