#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qpopf/circuit.hpp"
#include "qpopf/observable.hpp"

namespace qpopf {

/// Flat gradient with one entry per model parameter.
using GradientVector = std::vector<double>;

/// <Z_obs> of the circuit output for encoding angles x.
double circuit_expectation(const CircuitModel& model, std::span<const double> x,
                           Observable obs = {0}, Exec exec = Exec::automatic);

/// Exact gradient of circuit_expectation w.r.t. every angle via the
/// parameter-shift rule: g_j = [f(theta_j + pi/2) - f(theta_j - pi/2)] / 2.
///
/// Rotations outside the measured qubit's backward light cone cannot move
/// the expectation, so their entries are exactly zero and are not
/// evaluated. Shifted evaluations restart from a cached state just before
/// the parameter's layer; this is bit-identical to re-running the full
/// circuit because the skipped prefix is deterministic.
GradientVector expectation_grad(const CircuitModel& model, std::span<const double> x,
                                Observable obs = {0}, Exec exec = Exec::automatic);

/// Same as expectation_grad but also returns the unshifted expectation.
std::pair<double, GradientVector> expectation_value_and_grad(const CircuitModel& model,
                                                             std::span<const double> x,
                                                             Observable obs = {0},
                                                             Exec exec = Exec::automatic);

/// Squared-error loss (yhat - y*)^2 and its gradient 2 (yhat - y*) * d yhat.
/// y_star must already live in the scaled [-1, 1] target space.
std::pair<double, GradientVector> loss_grad(const CircuitModel& model, std::span<const double> x,
                                            double y_star, Observable obs = {0},
                                            Exec exec = Exec::automatic);

/// Central finite differences, the test oracle for both gradient paths.
GradientVector finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> theta, double h);

}  // namespace qpopf
