#pragma once

// MOS, MSI and MATE side by side at a shared cavity (l, lambda) and shared
// mechanics. Each system is evaluated at its zero-dispersive point.

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "optomech/app/scan.hpp"

namespace optomech::app {

enum class SystemId { mos = 0, msi = 1, mate = 2 };

inline std::string to_string(SystemId s) {
  switch (s) {
    case SystemId::mos: return "MOS";
    case SystemId::msi: return "MSI";
    case SystemId::mate: return "MATE";
  }
  return "";
}

struct ComparisonRow {
  SystemId system = SystemId::mos;
  bool ok = false;
  std::string error;              // NoZeroDispersivePoint message when !ok
  double g_gamma0 = NAN;          // |g_gamma0| at the zero-dispersive point, rad/s per m
  double gamma = NAN;             // decay rate there, rad/s
  double cooperativity = NAN;
  double sideband_factor = NAN;   // (2 omega / gamma)^2 entering C, 1 for MOS
  double g_ratio_mos = NAN;       // |g_gamma0^MOS| / |g_gamma0^row|
  double c_ratio_mos = NAN;       // C^MOS / C^row
};

struct ComparisonTable {
  std::array<ComparisonRow, 3> rows;
  nlohmann::ordered_json parameters;
};

inline constexpr double kDefaultMechOmega = kTwoPi * 1e6;  // rad/s

inline ComparisonTable compare_systems(const Config& cfg) {
  ParamReader p(cfg);
  const auto mos_cfg = mos_from(p);
  const auto margins = margins_from(p);
  noise::CavityDrive drive;
  drive.k = mos_cfg.k();
  drive.l = mos_cfg.l;
  drive.a0 = p.num("mech.a0", 1.0);
  drive.mech = mech_from(p);
  const double omega = p.num("mech.omega", kDefaultMechOmega);

  ComparisonTable table;
  auto& mos_row = table.rows[0];
  auto& msi_row = table.rows[1];
  auto& mate_row = table.rows[2];
  mos_row.system = SystemId::mos;
  msi_row.system = SystemId::msi;
  mate_row.system = SystemId::mate;

  if (mos_cfg.r_m() >= mos_cfg.r()) {
    mos_row.error = "NoZeroDispersivePoint: membrane must be less reflective than the mirror (r_m < r)";
  } else {
    const auto op = mos::operating_point_at_phi(mos_cfg, mos_cfg.phi0(), margins);
    mos_row.ok = true;
    mos_row.g_gamma0 = std::abs(op.g_gamma0);
    mos_row.gamma = op.gamma;
    mos_row.sideband_factor = 1.0;
    mos_row.cooperativity = noise::cooperativity(drive, noise::MosCooperativity{mos_cfg.t, mos_cfg.t_m});
  }

  const auto msi_cfg = msi::MsiConfig::balanced_from(p.num("msi.T_b_sq", 0.5), p.num("msi.r_ms", 0.9),
                                                      mos_cfg.l, mos_cfg.k());
  try {
    const auto z = msi::msi_zero_dispersive(msi_cfg, static_cast<int>(p.integer("msi.branch", 0)));
    msi_row.ok = true;
    msi_row.g_gamma0 = std::abs(z.g_gamma0);
    msi_row.gamma = z.gamma_ms;
    msi_row.sideband_factor = std::pow(2.0 * omega / z.gamma_ms, 2);
    msi_row.cooperativity = noise::cooperativity(drive, noise::MsiCooperativity{z.r_ms, z.T_ms, omega});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoZeroDispersivePoint) throw;
    msi_row.error = e.what();
  }

  mate::MateConfig mate_cfg;
  mate_cfg.l = mos_cfg.l;
  mate_cfg.lambda = mos_cfg.lambda;
  mate_cfg.t = p.num("mate.t", mos_cfg.t);
  mate_cfg.t_m = p.num("mate.t_m", mos_cfg.t_m);
  const auto z = mate::mate_zero_dispersive(mate_cfg, margins);
  mate_row.ok = true;
  mate_row.g_gamma0 = std::abs(z.g_gamma0);
  mate_row.gamma = z.gamma_mate;
  mate_row.sideband_factor = std::pow(2.0 * omega / z.gamma_mate, 2);
  mate_row.cooperativity = noise::cooperativity(drive, noise::MateCooperativity{mate_cfg.t, mate_cfg.t_m, omega});

  for (auto& row : table.rows) {
    if (!row.ok || !mos_row.ok) continue;
    row.g_ratio_mos = mos_row.g_gamma0 / row.g_gamma0;
    row.c_ratio_mos = mos_row.cooperativity / row.cooperativity;
  }
  table.parameters = parameters_json(p);
  return table;
}

// CSV form: system 0 = MOS, 1 = MSI, 2 = MATE; status 0 = ok,
// 1 = NoZeroDispersivePoint (numeric columns then nan).
inline Dataset comparison_dataset(const ComparisonTable& table, const ToleranceSet& tol = {}) {
  Dataset ds;
  ds.columns = {"system", "status", "g_gamma0", "gamma", "cooperativity", "sideband_factor",
                "g_gamma0_ratio_mos", "cooperativity_ratio_mos"};
  for (const auto& r : table.rows) {
    ds.rows.push_back({static_cast<double>(r.system), r.ok ? 0.0 : 1.0, r.g_gamma0, r.gamma, r.cooperativity,
                       r.sideband_factor, r.g_ratio_mos, r.c_ratio_mos});
  }
  ds.meta["kind"] = "compare";
  ds.meta["systems"] = {"MOS", "MSI", "MATE"};
  ds.meta["parameters"] = table.parameters;
  ds.meta["tolerances"] = tol.to_json();
  ds.meta["version"] = kVersion;
  return ds;
}

}  // namespace optomech::app
