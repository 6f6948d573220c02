#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "qpopf/errors.hpp"

namespace qpopf {

/// Doubles in every serialized artifact are written with 17 significant
/// digits, enough to round-trip exactly and byte-stable across runs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Minimal JSON emitter. Writing goes through this (instead of a library)
/// so float formatting stays pinned at 17 significant digits; parsing is
/// nlohmann::json.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(long long v);
    JsonWriter& value(unsigned long long v);
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);
    JsonWriter& null();
    JsonWriter& value(const std::vector<double>& v);

    const std::string& str() const { return out_; }

  private:
    void comma();
    std::string out_;
    std::vector<bool> first_in_scope_{true};
    bool after_key_ = false;
};

std::string json_escape(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace qpopf
