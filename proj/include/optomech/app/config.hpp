#pragma once

// Flat key-value configuration. Files are INI text; "[mos]" followed by
// "t = 0.014" and a top-level "mos.t = 0.014" both give the key "mos.t".
// Comments start with '#' or ';'.
//
//   synthetic.{t, t_m, phi_r, psi}
//   mos.{l, lambda, t, t_m, phi_r, x, N, phi_over_phi0}
//   msi.{l, lambda, T_b_sq, r_ms, x, branch}
//   mate.{l, lambda, t, t_m, phi_r, x, branch, N}
//   noise.{gamma1, gamma2, gamma3, delta, omega, a0, g_omega0, g_gamma0, xi, units}
//   mech.{x_zpf, gamma_m, a0, omega}
//   regime.{thin_tandem, much_less}
//   scan.{parameter, from, to, points}
//   validate.tolerance.{unitarity, constraint, closed_form, tan_mu, elimination,
//                       finite_difference, locus, solver, figure, resonance, dk_dx,
//                       limit}

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "optomech/errors.hpp"

namespace optomech::app {

namespace detail {

inline const std::set<std::string>& numeric_keys() {
  static const std::set<std::string> keys = {
      "synthetic.t", "synthetic.t_m", "synthetic.phi_r", "synthetic.psi",
      "mos.l", "mos.lambda", "mos.t", "mos.t_m", "mos.phi_r", "mos.x", "mos.phi_over_phi0",
      "msi.l", "msi.lambda", "msi.T_b_sq", "msi.r_ms", "msi.x",
      "mate.l", "mate.lambda", "mate.t", "mate.t_m", "mate.phi_r", "mate.x",
      "noise.gamma1", "noise.gamma2", "noise.gamma3", "noise.delta", "noise.omega", "noise.a0",
      "noise.g_omega0", "noise.g_gamma0", "noise.xi",
      "mech.x_zpf", "mech.gamma_m", "mech.a0", "mech.omega",
      "regime.thin_tandem", "regime.much_less",
      "scan.from", "scan.to",
      "validate.tolerance.unitarity", "validate.tolerance.constraint",
      "validate.tolerance.closed_form", "validate.tolerance.tan_mu",
      "validate.tolerance.elimination", "validate.tolerance.finite_difference",
      "validate.tolerance.locus", "validate.tolerance.solver", "validate.tolerance.figure",
      "validate.tolerance.resonance", "validate.tolerance.dk_dx", "validate.tolerance.limit",
  };
  return keys;
}

inline const std::set<std::string>& integer_keys() {
  static const std::set<std::string> keys = {"mos.N", "msi.branch", "mate.N", "scan.points"};
  return keys;
}

inline const std::set<std::string>& string_keys() {
  static const std::set<std::string> keys = {"mate.branch", "noise.units", "scan.parameter"};
  return keys;
}

inline void flatten(const boost::property_tree::ptree& node, const std::string& prefix,
                    std::map<std::string, std::string>& out) {
  for (const auto& [name, child] : node) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (child.empty()) {
      if (!out.emplace(key, child.data()).second) {
        throw Error(ErrorCode::ConfigError, "duplicate key '" + key + "'");
      }
    } else {
      flatten(child, key, out);
    }
  }
}

}  // namespace detail

inline bool is_numeric_key(const std::string& key) { return detail::numeric_keys().count(key) > 0; }

inline bool is_known_key(const std::string& key) {
  return is_numeric_key(key) || detail::integer_keys().count(key) || detail::string_keys().count(key);
}

class Config {
 public:
  Config() = default;

  static Config from_file(const std::string& path) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
    Config cfg;
    detail::flatten(tree, "", cfg.values_);
    cfg.check();
    return cfg;
  }

  // --config wins, then $OPTOMECH_CONFIG, then built-in defaults.
  static Config load(const std::optional<std::string>& path) {
    if (path && !path->empty()) return from_file(*path);
    if (const char* env = std::getenv("OPTOMECH_CONFIG"); env && *env) return from_file(env);
    return {};
  }

  void set(const std::string& key, const std::string& value) {
    if (!is_known_key(key)) throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
    values_[key] = value;
  }

  void set(const std::string& key, double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    set(key, std::string(buf, res.ptr));
  }

  void erase(const std::string& key) { values_.erase(key); }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
  }

  std::optional<double> number(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return parse_double(key, it->second);
  }

  long integer(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_long(key, it->second);
  }

  std::optional<long> integer(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return parse_long(key, it->second);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  void check() const {
    for (const auto& [key, value] : values_) {
      if (!is_known_key(key)) throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
      if (is_numeric_key(key)) parse_double(key, value);
      if (detail::integer_keys().count(key)) parse_long(key, value);
    }
  }

  static double parse_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
      throw Error(ErrorCode::ConfigError, "key '" + key + "': '" + s + "' is not a finite number");
    }
    return v;
  }

  static long parse_long(const std::string& key, const std::string& s) {
    long v = 0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != end) {
      throw Error(ErrorCode::ConfigError, "key '" + key + "': '" + s + "' is not an integer");
    }
    return v;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace optomech::app
