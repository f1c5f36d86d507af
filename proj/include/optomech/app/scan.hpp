#pragma once

// One-parameter sweeps of a target. Points are evaluated on a worker pool;
// results are stored by index, so the output never depends on the number of
// workers or on scheduling.

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "optomech/app/config.hpp"
#include "optomech/app/dataset.hpp"
#include "optomech/app/targets.hpp"
#include "optomech/app/tolerances.hpp"

namespace optomech::app {

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Calls fn(i) for every i in [0, n). All points run; if any throw, the
// exception of the lowest index is rethrown after the pool drains.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < count; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ScanSpec {
  Target target = Target::mos;
  std::string parameter;  // full dotted key, e.g. "mos.phi_over_phi0"
  double from = 0.0;
  double to = 0.0;
  long points = 0;
  Config fixed;
  std::string output_path;

  std::vector<double> grid() const {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (long i = 0; i < points; ++i) {
      g[static_cast<std::size_t>(i)] =
          i == points - 1 ? to : from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return g;
  }
};

// scan.parameter without a dot is looked up in the target's section. The scan
// keys themselves are stripped from the fixed parameters.
inline ScanSpec scan_spec_from(Target target, const Config& cfg, const std::string& output_path = "") {
  ScanSpec s;
  s.target = target;
  s.output_path = output_path;
  auto name = cfg.text("scan.parameter", "");
  if (name.empty()) throw Error(ErrorCode::ConfigError, "scan.parameter is not set");
  if (name.find('.') == std::string::npos) name = to_string(target) + "." + name;
  s.parameter = name;
  auto from = cfg.number("scan.from");
  auto to = cfg.number("scan.to");
  auto points = cfg.integer("scan.points");
  if (!from || !to || !points) throw Error(ErrorCode::ConfigError, "scan needs scan.from, scan.to and scan.points");
  s.from = *from;
  s.to = *to;
  s.points = *points;
  s.fixed = cfg;
  for (const char* key : {"scan.parameter", "scan.from", "scan.to", "scan.points"}) s.fixed.erase(key);
  return s;
}

inline void validate(const ScanSpec& s) {
  if (!is_numeric_key(s.parameter)) {
    throw Error(ErrorCode::ConfigError, "'" + s.parameter + "' is not a numeric parameter");
  }
  if (s.parameter.rfind(to_string(s.target) + ".", 0) != 0 && s.parameter.rfind("regime.", 0) != 0) {
    throw Error(ErrorCode::ConfigError, "'" + s.parameter + "' is not a parameter of target " + to_string(s.target));
  }
  if (s.points < 2) throw Error(ErrorCode::ConfigError, "scan.points must be at least 2");
  if (!std::isfinite(s.from) || !std::isfinite(s.to)) throw Error(ErrorCode::ConfigError, "scan range must be finite");
  if (!(s.from < s.to)) throw Error(ErrorCode::ConfigError, "scan.from must be below scan.to");
  if (s.fixed.has(s.parameter)) {
    throw Error(ErrorCode::ConfigError, "'" + s.parameter + "' is swept and also fixed");
  }
}

inline nlohmann::ordered_json parameters_json(const ParamReader& p) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : p.used()) j[k] = v;
  for (const auto& [k, v] : p.text_used()) j[k] = v;
  return j;
}

// Phi0, gamma0 and g_00 of the MOS parameters in cfg.
inline nlohmann::ordered_json normalizers_json(const Config& cfg) {
  ParamReader p(cfg);
  const auto m = mos_from(p);
  nlohmann::ordered_json j;
  j["phi0"] = m.phi0();
  j["gamma0"] = mos::gamma0(m);
  j["g_00"] = mos::g00(m);
  return j;
}

inline Dataset run_scan(const ScanSpec& spec, unsigned workers = default_workers(),
                        const ToleranceSet& tol = {}) {
  validate(spec);
  const auto grid = spec.grid();
  Dataset ds;
  ds.columns.push_back(spec.parameter);
  for (const auto& c : output_columns(spec.target)) ds.columns.push_back(c);
  ds.rows.resize(grid.size());
  nlohmann::ordered_json params, normalizers;

  parallel_for(grid.size(), workers, [&](std::size_t i) {
    Config point = spec.fixed;
    point.set(spec.parameter, grid[i]);
    ParamReader p(point);
    std::vector<double> row{grid[i]};
    try {
      const auto out = evaluate(spec.target, p);
      row.insert(row.end(), out.begin(), out.end());
    } catch (const Error& e) {
      const std::string what = e.what();
      const auto colon = what.find(": ");
      throw Error(e.code(), (colon == std::string::npos ? what : what.substr(colon + 2)) + " [at " +
                                spec.parameter + " = " + format_value(grid[i]) + "]");
    }
    if (i == 0) {
      params = parameters_json(p);
      params.erase(spec.parameter);
      normalizers = normalizers_json(point);
    }
    ds.rows[i] = std::move(row);
  });

  ds.meta["kind"] = "scan";
  ds.meta["target"] = to_string(spec.target);
  ds.meta["scan"] = {{"parameter", spec.parameter}, {"from", spec.from}, {"to", spec.to}, {"points", spec.points}};
  ds.meta["parameters"] = params;
  ds.meta["normalizers"] = normalizers;  // at the first grid point
  ds.meta["tolerances"] = tol.to_json();
  ds.meta["version"] = kVersion;
  if (!spec.output_path.empty()) write_dataset(ds, spec.output_path);
  return ds;
}

}  // namespace optomech::app
