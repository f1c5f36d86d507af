#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "optomech/app/config.hpp"

namespace optomech::app {

enum class ToleranceProfile { standard, strict };

inline ToleranceProfile parse_profile(const std::string& name) {
  if (name == "default") return ToleranceProfile::standard;
  if (name == "strict") return ToleranceProfile::strict;
  throw Error(ErrorCode::ConfigError, "tolerance profile must be 'default' or 'strict'");
}

// Named acceptance thresholds of the validation checks. Config keys
// validate.tolerance.<name> override the defaults; the strict profile then
// tightens every numerical entry tenfold. "limit" bounds an asymptotic
// regime, not round-off, and is left alone.
class ToleranceSet {
 public:
  ToleranceSet() = default;

  static ToleranceSet from(const Config& cfg, ToleranceProfile profile = ToleranceProfile::standard) {
    ToleranceSet t;
    for (auto& [name, value] : t.values_) {
      value = cfg.number("validate.tolerance." + name, value);
      if (!(value > 0.0)) throw Error(ErrorCode::ConfigError, "tolerance '" + name + "' must be positive");
      if (profile == ToleranceProfile::strict && name != "limit") value *= 0.1;
    }
    return t;
  }

  double operator[](const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw Error(ErrorCode::InvalidArgument, "no tolerance '" + name + "'");
    return it->second;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, value] : values_) j[name] = value;
    return j;
  }

 private:
  std::map<std::string, double> values_ = {
      {"unitarity", 1e-10},   {"constraint", 1e-12}, {"closed_form", 1e-12},
      {"tan_mu", 1e-12},      {"elimination", 1e-12}, {"finite_difference", 1e-6},
      {"locus", 1e-9},        {"solver", 1e-4},      {"figure", 1e-12},
      {"resonance", 1e-10},   {"dk_dx", 1e-4},        {"limit", 1e-2},
  };
};

}  // namespace optomech::app
