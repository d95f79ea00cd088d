#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace optosqueeze {

/// Numeric rendering used by every emitter: 12 significant digits, so that
/// re-parsing recovers values to the printed precision.
inline std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string json_bool(bool b) { return b ? "true" : "false"; }
inline std::string json_null() { return "null"; }

/// Key/value pairs with pre-rendered values, emitted as one JSON object.
inline std::string json_object(
    const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out = "{";
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out += ",";
    out += json_string(fields[k].first);
    out += ":";
    out += fields[k].second;
  }
  out += "}";
  return out;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) out += ",";
    out += cells[k];
  }
  return out;
}

}  // namespace optosqueeze
