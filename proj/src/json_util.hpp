#pragma once

// Internal helpers shared by the JSON writers.

#include <cstdio>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "tucore/errors.hpp"

namespace tucore::detail {

// 17 significant digits, shortest %g form. Always round-trips a double.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string json_array(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt17(v[i]);
  }
  out += "]";
  return out;
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

template <class T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad value for key '") + key + "': " + e.what());
  }
}

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace tucore::detail
