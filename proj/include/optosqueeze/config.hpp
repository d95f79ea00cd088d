#pragma once

#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "optosqueeze/params.hpp"
#include "optosqueeze/spectrum.hpp"
#include "optosqueeze/steady_state.hpp"

namespace optosqueeze {

enum class OutputFormat { csv, json };

/// Everything a CLI run needs beyond the subcommand itself.
struct RunConfig {
  SystemParams params;
  std::optional<CothModel> coth;  // unset: per-temperature default
  double tol = 1e-7;
  BranchPolicy branch_policy = BranchPolicy::lowest_qs_stable;
  OutputFormat output = OutputFormat::json;
  int workers = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_number(const std::string& key, std::string_view text) {
  const std::string owned(text);
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (end == owned.c_str() || *end != '\0') {
    throw ConfigError(key, "value is not a number: '" + owned + "'");
  }
  return v;
}

inline const std::map<std::string, double SystemParams::*>& config_keys() {
  static const std::map<std::string, double SystemParams::*> keys = {
      {"wavelength_m", &SystemParams::wavelength_lambda},
      {"cavity_length_m", &SystemParams::cavity_length_L},
      {"mass_kg", &SystemParams::mass_m},
      {"kappa_rad_s", &SystemParams::kappa},
      {"omega_m_rad_s", &SystemParams::omega_m},
      {"quality", &SystemParams::quality_Q},
      {"power_w", &SystemParams::laser_power_P},
      {"temperature_k", &SystemParams::temperature_T},
      {"squeeze_r", &SystemParams::squeeze_r},
      {"squeeze_phi", &SystemParams::squeeze_phi},
      {"detuning0_rad_s", &SystemParams::detuning_Delta0},
  };
  return keys;
}

}  // namespace detail

/// Applies a flat `key = value` config stream onto existing parameters.
/// Lines may be blank or `#` comments. Unknown keys are rejected with the
/// offending key named.
inline void apply_config_text(SystemParams& params, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view stripped = detail::trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno),
                        "expected 'key = value'");
    }
    const std::string key(detail::trim(stripped.substr(0, eq)));
    const std::string_view value = detail::trim(stripped.substr(eq + 1));
    const auto& keys = detail::config_keys();
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw ConfigError(key, "unknown config key");
    }
    params.*(it->second) = detail::parse_number(key, value);
  }
}

/// Default worker count: OPTOSQUEEZE_WORKERS when set and >= 1, else 1.
inline int default_workers_from_env() {
  const char* env = std::getenv("OPTOSQUEEZE_WORKERS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<int>(v);
}

}  // namespace optosqueeze
