#include "qpopf/model_io.hpp"

#include <json.hpp>

#include "qpopf/io.hpp"

namespace qpopf {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw SchemaError("model json: parse error");
    return j;
}

std::vector<double> doubles(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array()) throw SchemaError(std::string("model json: missing array ") + field);
    return j[field].get<std::vector<double>>();
}

void write_scaling(JsonWriter& w, const FeatureScale& fs, const TargetScale& ts) {
    w.key("feature_scale").begin_object();
    w.key("min").value(fs.min);
    w.key("max").value(fs.max);
    w.end_object();
    w.key("target_scale").begin_object();
    w.key("min").value(ts.min);
    w.key("max").value(ts.max);
    w.end_object();
}

void read_scaling(const json& j, FeatureScale& fs, TargetScale& ts) {
    if (!j.contains("feature_scale") || !j.contains("target_scale"))
        throw SchemaError("model json: missing scaling");
    fs.min = doubles(j["feature_scale"], "min");
    fs.max = doubles(j["feature_scale"], "max");
    ts.min = j["target_scale"].value("min", -1.0);
    ts.max = j["target_scale"].value("max", 1.0);
}

}  // namespace

std::string circuit_model_to_json(const CircuitModel& model) {
    JsonWriter w;
    w.begin_object();
    w.key("n_qubits").value(model.n_qubits);
    w.key("n_layers").value(model.n_layers);
    w.key("entangle_range").value(model.entangle_range);
    w.key("theta").value(model.theta);
    write_scaling(w, model.feature_scale, model.target_scale);
    w.end_object();
    return w.str();
}

CircuitModel circuit_model_from_json(const std::string& json_text) {
    const json j = parse(json_text);
    CircuitModel m;
    if (!j.contains("n_qubits")) throw SchemaError("model json: missing n_qubits");
    m.n_qubits = j["n_qubits"].get<int>();
    m.n_layers = j.value("n_layers", 0);
    m.entangle_range = j.value("entangle_range", 1);
    m.theta = doubles(j, "theta");
    read_scaling(j, m.feature_scale, m.target_scale);
    m.validate();
    return m;
}

std::string mlp_model_to_json(const MLPModel& model) {
    JsonWriter w;
    w.begin_object();
    w.key("layer_sizes").begin_array();
    for (int s : model.layer_sizes) w.value(s);
    w.end_array();
    // Weights and biases per layer, sliced out of the flat parameter
    // vector in its canonical order.
    std::size_t p = 0;
    w.key("weights").begin_array();
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t nw = static_cast<std::size_t>(model.layer_sizes[l + 1]) *
                               static_cast<std::size_t>(model.layer_sizes[l]);
        w.begin_array();
        for (std::size_t i = 0; i < nw; ++i) w.value(model.params[p + i]);
        w.end_array();
        p += nw + static_cast<std::size_t>(model.layer_sizes[l + 1]);
    }
    w.end_array();
    p = 0;
    w.key("biases").begin_array();
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t nw = static_cast<std::size_t>(model.layer_sizes[l + 1]) *
                               static_cast<std::size_t>(model.layer_sizes[l]);
        const std::size_t nb = static_cast<std::size_t>(model.layer_sizes[l + 1]);
        w.begin_array();
        for (std::size_t i = 0; i < nb; ++i) w.value(model.params[p + nw + i]);
        w.end_array();
        p += nw + nb;
    }
    w.end_array();
    write_scaling(w, model.feature_scale, model.target_scale);
    w.end_object();
    return w.str();
}

MLPModel mlp_model_from_json(const std::string& json_text) {
    const json j = parse(json_text);
    MLPModel m;
    if (!j.contains("layer_sizes")) throw SchemaError("model json: missing layer_sizes");
    m.layer_sizes = j["layer_sizes"].get<std::vector<int>>();
    if (!j.contains("weights") || !j.contains("biases"))
        throw SchemaError("model json: missing weights/biases");
    const auto& jw = j["weights"];
    const auto& jb = j["biases"];
    if (jw.size() != m.layer_sizes.size() - 1 || jb.size() != m.layer_sizes.size() - 1)
        throw SchemaError("model json: layer count mismatch");
    m.params.reserve(m.param_count());
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        const auto wl = jw[l].get<std::vector<double>>();
        const auto bl = jb[l].get<std::vector<double>>();
        if (wl.size() != static_cast<std::size_t>(m.layer_sizes[l + 1]) *
                             static_cast<std::size_t>(m.layer_sizes[l]) ||
            bl.size() != static_cast<std::size_t>(m.layer_sizes[l + 1]))
            throw SchemaError("model json: weight/bias shape mismatch");
        m.params.insert(m.params.end(), wl.begin(), wl.end());
        m.params.insert(m.params.end(), bl.begin(), bl.end());
    }
    read_scaling(j, m.feature_scale, m.target_scale);
    m.validate();
    return m;
}

void save_circuit_model(const std::string& path, const CircuitModel& model) {
    write_text_file(path, circuit_model_to_json(model));
}

CircuitModel load_circuit_model(const std::string& path) {
    return circuit_model_from_json(read_text_file(path));
}

void save_mlp_model(const std::string& path, const MLPModel& model) {
    write_text_file(path, mlp_model_to_json(model));
}

MLPModel load_mlp_model(const std::string& path) { return mlp_model_from_json(read_text_file(path)); }

bool is_circuit_model_file(const std::string& path) {
    const json j = parse(read_text_file(path));
    return j.contains("n_qubits");
}

}  // namespace qpopf
