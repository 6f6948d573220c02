#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qpopf/gradients.hpp"
#include "qpopf/rng.hpp"

namespace qpopf {

/// (epsilon, delta) bookkeeping for one training run: the Gaussian
/// mechanism's per-step budget, its subsampling-amplified version, and
/// the advanced-composition total.
struct PrivacySpend {
    double per_step_epsilon = 0.0;
    double subsampled_epsilon = 0.0;
    double subsampled_delta = 0.0;
    double composed_epsilon = 0.0;
    double composed_delta = 0.0;
};

/// Scale g by min(1, C / ||g||_2). Idempotent; output norm <= C.
GradientVector clip_gradient(const GradientVector& g, double clip_norm);

double l2_norm(std::span<const double> v);

/// (sum of clipped per-sample gradients + N(0, sigma^2 C^2 I)) / B.
/// One independent noise draw per coordinate; none at all when sigma == 0.
GradientVector noisy_batch_gradient(const std::vector<GradientVector>& per_sample, double clip_norm,
                                    double noise_multiplier, int batch_size, Rng& rng);

/// Smallest epsilon for which `sigma` satisfies the Gaussian-mechanism
/// bound sigma >= sqrt(2 ln(1.25/delta)) / epsilon at sensitivity C.
/// sigma == 0 returns +infinity (no privacy).
double per_step_epsilon(double sigma, double delta);

/// The same bound read with the noise formula's parenthesization taken
/// verbatim, sqrt(2 ln(1.25) / delta) / sigma. Dimensionally implausible
/// for delta < 1; computed only so the discrepancy can be logged next to
/// the canonical value.
double per_step_epsilon_verbatim(double sigma, double delta);

/// Amplify one step's (eps, delta) by uniform subsampling at rate q, then
/// compose `steps` such mechanisms:
///   eps' = sqrt(2 steps ln(1/delta')) * q eps + steps * q eps * (e^{q eps} - 1)
///   delta_total = steps * q * delta + delta'
PrivacySpend compose(double eps_step, double delta_step, double q, std::int64_t steps,
                     double delta_prime);

}  // namespace qpopf
