#include "qpopf/dataset.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "qpopf/errors.hpp"
#include "qpopf/io.hpp"

namespace qpopf {

void Dataset::push_row(std::span<const double> features, double target) {
    if (n_features == 0) n_features = features.size();
    if (features.size() != n_features) throw DimensionError("dataset: ragged feature row");
    x.insert(x.end(), features.begin(), features.end());
    y.push_back(target);
}

std::string dataset_to_csv(const Dataset& ds, const std::vector<std::string>& columns) {
    if (columns.size() != ds.n_features + 1)
        throw DimensionError("dataset_to_csv: column count does not match features + target");
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto row = ds.row(i);
        for (double v : row) {
            out += fmt_double(v);
            out += ',';
        }
        out += fmt_double(ds.y[i]);
        out += '\n';
    }
    return out;
}

Dataset dataset_from_csv(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("dataset csv: empty file");
    const std::size_t n_cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (n_cols < 2) throw SchemaError("dataset csv: need at least one feature and a target column");
    Dataset ds;
    ds.n_features = n_cols - 1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> vals;
        vals.reserve(n_cols);
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            const std::string cell = line.substr(pos, next - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw SchemaError("dataset csv: bad number at line " + std::to_string(line_no));
            vals.push_back(v);
            pos = next + 1;
            if (next == line.size()) break;
        }
        if (vals.size() != n_cols)
            throw SchemaError("dataset csv: wrong column count at line " + std::to_string(line_no));
        ds.x.insert(ds.x.end(), vals.begin(), vals.end() - 1);
        ds.y.push_back(vals.back());
    }
    return ds;
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
    write_text_file(path, dataset_to_csv(ds));
}

Dataset read_dataset_csv(const std::string& path) { return dataset_from_csv(read_text_file(path)); }

FeatureScale fit_feature_scale(const Dataset& ds) {
    if (ds.size() == 0) throw ArgumentError("fit_feature_scale: empty dataset");
    FeatureScale fs;
    fs.min.assign(ds.n_features, std::numeric_limits<double>::infinity());
    fs.max.assign(ds.n_features, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto row = ds.row(i);
        for (std::size_t j = 0; j < ds.n_features; ++j) {
            fs.min[j] = std::min(fs.min[j], row[j]);
            fs.max[j] = std::max(fs.max[j], row[j]);
        }
    }
    return fs;
}

TargetScale fit_target_scale(const Dataset& ds) {
    if (ds.size() == 0) throw ArgumentError("fit_target_scale: empty dataset");
    TargetScale ts;
    ts.min = *std::min_element(ds.y.begin(), ds.y.end());
    ts.max = *std::max_element(ds.y.begin(), ds.y.end());
    return ts;
}

Dataset apply_scaling(const Dataset& ds, const FeatureScale& fs, const TargetScale& ts) {
    Dataset out;
    out.n_features = ds.n_features;
    out.x.reserve(ds.x.size());
    out.y.reserve(ds.y.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto scaled = scale_features(fs, ds.row(i));
        out.x.insert(out.x.end(), scaled.begin(), scaled.end());
        out.y.push_back(scale_target(ts, ds.y[i]));
    }
    return out;
}

}  // namespace qpopf
