#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qpopf {

/// SplitMix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded random stream with the distributions this project needs.
///
/// All draws are generated from explicit uniform bits so results are
/// bit-reproducible for a given seed, independent of the standard
/// library's distribution implementations. Streams are splittable:
/// `split(i)` yields an independent stream derived from the root seed,
/// which is what makes parallel per-sample execution reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    /// Child stream `index` of this stream's seed.
    Rng split(std::uint64_t index) const { return Rng(mix64(seed_ ^ mix64(index + 1))); }

    std::uint64_t bits() { return engine_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal via Box-Muller. No caching: every call consumes two
    /// uniforms and bumps the draw counter, so noise accounting is exact.
    double normal() {
        ++normal_draws_;
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Number of normal() values delivered so far.
    std::uint64_t normal_draw_count() const { return normal_draws_; }

    double exponential(double scale) { return -scale * std::log(uniform_open()); }

    /// Weibull(shape k, scale lambda) by inverse transform.
    double weibull(double shape, double scale) {
        return scale * std::pow(-std::log(uniform_open()), 1.0 / shape);
    }

    /// Gamma(shape, 1). Marsaglia-Tsang for shape >= 1, boosted below 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform_open();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::uint64_t normal_draws_ = 0;
};

}  // namespace qpopf
