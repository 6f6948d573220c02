#pragma once

#include <string>

#include "qpopf/circuit.hpp"
#include "qpopf/mlp.hpp"

namespace qpopf {

std::string circuit_model_to_json(const CircuitModel& model);
CircuitModel circuit_model_from_json(const std::string& json_text);

std::string mlp_model_to_json(const MLPModel& model);
MLPModel mlp_model_from_json(const std::string& json_text);

void save_circuit_model(const std::string& path, const CircuitModel& model);
CircuitModel load_circuit_model(const std::string& path);

void save_mlp_model(const std::string& path, const MLPModel& model);
MLPModel load_mlp_model(const std::string& path);

/// True if the JSON document at `path` looks like a circuit model
/// (used by CLI subcommands that accept either family).
bool is_circuit_model_file(const std::string& path);

}  // namespace qpopf
