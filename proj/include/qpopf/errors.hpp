#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qpopf {

// Exit codes surfaced by the CLI. Library errors map onto these.
enum class ExitCode : int {
    ok = 0,
    config = 2,      // bad arguments, schemas, indices, dimensions
    diagnostic = 3,  // infeasible problem, diverged training, non-convergence
    io = 4,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : ConfigError {
    using ConfigError::ConfigError;
};

struct ArgumentError : ConfigError {
    using ConfigError::ConfigError;
};

struct TopologyError : ConfigError {
    using ConfigError::ConfigError;
};

struct SchemaError : ConfigError {
    using ConfigError::ConfigError;
};

// Non-finite values where finite ones are required.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
    InfeasibleError(const std::string& what, std::vector<std::string> violated_constraints)
        : std::runtime_error(what), violated(std::move(violated_constraints)) {}
    std::vector<std::string> violated;
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double primal_residual, double dual_residual)
        : std::runtime_error(what), primal_residual(primal_residual), dual_residual(dual_residual) {}
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

struct DataQualityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AggregationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::config;
    if (dynamic_cast<const IoError*>(&e)) return ExitCode::io;
    if (dynamic_cast<const InfeasibleError*>(&e) || dynamic_cast<const ConvergenceError*>(&e) ||
        dynamic_cast<const DataQualityError*>(&e) || dynamic_cast<const AggregationError*>(&e) ||
        dynamic_cast<const NumericError*>(&e))
        return ExitCode::diagnostic;
    return ExitCode::diagnostic;
}

}  // namespace qpopf
