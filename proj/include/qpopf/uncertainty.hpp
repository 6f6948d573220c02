#pragma once

#include <vector>

#include "qpopf/grid.hpp"
#include "qpopf/rng.hpp"

namespace qpopf {

struct WeibullSpec {
    double shape = 1.0;
    double scale = 4.8;
};

struct BetaSpec {
    double a = 2.0;
    double b = 5.0;
};

struct NormalSpec {
    double mean = 0.0;
    double stddev = 0.3;
};

/// Sources of randomness for probabilistic OPF. Wind is Weibull (MW,
/// truncated to [0, wind_capacity_mw]); solar is capacity times a Beta
/// draw; the customer load receives an additive normal perturbation in MW,
/// truncated later so the net load stays non-negative.
struct DistributionSpec {
    WeibullSpec wind;
    double wind_capacity_mw = 1.5;
    BetaSpec solar;
    double solar_capacity_mw = 1.0;
    NormalSpec load;

    void validate() const;
};

/// One scenario: two wind plants, two solar plants, one load perturbation.
struct UncertainSample {
    double wind_mw[2] = {0.0, 0.0};
    double solar_mw[2] = {0.0, 0.0};
    double load_perturbation_mw = 0.0;
};

UncertainSample sample_uncertainty(const DistributionSpec& spec, Rng& rng);

/// Expected value of each sampled quantity after truncation, estimated
/// from a fixed-seed draw; used to pin renewables when tracing a single
/// load trajectory.
UncertainSample mean_sample(const DistributionSpec& spec);

/// Periodic demand profile of the patterned customer:
/// max{sin(0.05 t), 0.7} + 0.05 sin(0.05 t) + 0.025 sin(0.75 t).
double load_pattern(double t);

/// Per-bus net injections (generation minus load, pu) for a scenario.
/// `dispatch_p`/`dispatch_q` give each dispatchable bus's output in pu;
/// the slack entry is ignored (it balances the system).
struct InjectionSet {
    std::vector<double> p;  // per bus index
    std::vector<double> q;
    double customer_load_pu = 0.0;  // net customer load after truncation
};

InjectionSet build_injections(const GridModel& grid, const UncertainSample& sample,
                              const std::vector<double>& dispatch_p,
                              const std::vector<double>& dispatch_q);

}  // namespace qpopf
