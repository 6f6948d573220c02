#include "qpopf/uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace qpopf {

void DistributionSpec::validate() const {
    if (!(wind.shape > 0.0) || !(wind.scale > 0.0)) throw ConfigError("spec: Weibull parameters must be positive");
    if (!(solar.a > 0.0) || !(solar.b > 0.0)) throw ConfigError("spec: Beta parameters must be positive");
    if (load.stddev < 0.0) throw ConfigError("spec: load stddev must be >= 0");
    if (wind_capacity_mw < 0.0 || solar_capacity_mw < 0.0)
        throw ConfigError("spec: capacities must be >= 0");
}

UncertainSample sample_uncertainty(const DistributionSpec& spec, Rng& rng) {
    spec.validate();
    UncertainSample s;
    for (double& w : s.wind_mw)
        w = std::clamp(rng.weibull(spec.wind.shape, spec.wind.scale), 0.0, spec.wind_capacity_mw);
    for (double& p : s.solar_mw) p = spec.solar_capacity_mw * rng.beta(spec.solar.a, spec.solar.b);
    s.load_perturbation_mw =
        spec.load.stddev > 0.0 ? rng.normal(spec.load.mean, spec.load.stddev) : spec.load.mean;
    return s;
}

UncertainSample mean_sample(const DistributionSpec& spec) {
    spec.validate();
    Rng rng(0x9d2c5680u);  // fixed internal stream; estimate is deterministic
    constexpr int kDraws = 200000;
    UncertainSample acc;
    for (int i = 0; i < kDraws; ++i) {
        const UncertainSample s = sample_uncertainty(spec, rng);
        acc.wind_mw[0] += s.wind_mw[0];
        acc.wind_mw[1] += s.wind_mw[1];
        acc.solar_mw[0] += s.solar_mw[0];
        acc.solar_mw[1] += s.solar_mw[1];
    }
    acc.wind_mw[0] /= kDraws;
    acc.wind_mw[1] /= kDraws;
    acc.solar_mw[0] /= kDraws;
    acc.solar_mw[1] /= kDraws;
    acc.load_perturbation_mw = spec.load.mean;
    return acc;
}

double load_pattern(double t) {
    if (t < 0.0) throw ArgumentError("load_pattern: t must be >= 0");
    const double s = std::sin(0.05 * t);
    return std::max(s, 0.7) + 0.05 * s + 0.025 * std::sin(0.75 * t);
}

InjectionSet build_injections(const GridModel& grid, const UncertainSample& sample,
                              const std::vector<double>& dispatch_p,
                              const std::vector<double>& dispatch_q) {
    const std::size_t nb = grid.n_buses();
    if (dispatch_p.size() != nb || dispatch_q.size() != nb)
        throw DimensionError("build_injections: dispatch vectors must have one entry per bus");
    InjectionSet inj;
    inj.p.assign(nb, 0.0);
    inj.q.assign(nb, 0.0);
    for (std::size_t i = 0; i < nb; ++i) {
        inj.p[i] = dispatch_p[i] - grid.buses[i].p_load;
        inj.q[i] = dispatch_q[i] - grid.buses[i].q_load;
    }
    // Renewables enter as non-dispatchable negative load.
    for (std::size_t k = 0; k < grid.placements.wt.size() && k < 2; ++k)
        inj.p[static_cast<std::size_t>(grid.bus_index(grid.placements.wt[k]))] +=
            sample.wind_mw[k] / grid.base_mva;
    for (std::size_t k = 0; k < grid.placements.pv.size() && k < 2; ++k)
        inj.p[static_cast<std::size_t>(grid.bus_index(grid.placements.pv[k]))] +=
            sample.solar_mw[k] / grid.base_mva;
    // The customer's perturbed load is truncated so it never goes negative.
    if (grid.placements.customer != 0) {
        const std::size_t c = static_cast<std::size_t>(grid.bus_index(grid.placements.customer));
        const double nominal = grid.buses[c].p_load;
        const double net = std::max(0.0, nominal + sample.load_perturbation_mw / grid.base_mva);
        inj.p[c] += nominal - net;  // replace nominal load with the net one
        inj.customer_load_pu = net;
    }
    return inj;
}

}  // namespace qpopf
