#pragma once

// Datasets behind the three published plots:
//   fig2  g_omega0/g_00 and g_gamma0/g_00 against Phi/Phi0 in [-4, 4]
//   fig3  gamma/gamma0 against Phi/Phi0 in [-4, 4]
//   fig4  S_xx^imp S_FF / (hbar^2/4) against xi in [-10, 10] for gamma3/gamma in {0, 0.5, 1},
//         closed form and the linear solver at omega = 1e-6 gamma

#include <string>
#include <vector>

#include "optomech/app/scan.hpp"

namespace optomech::app {

enum class FigureId { fig2, fig3, fig4 };

inline FigureId parse_figure(const std::string& name) {
  if (name == "fig2") return FigureId::fig2;
  if (name == "fig3") return FigureId::fig3;
  if (name == "fig4") return FigureId::fig4;
  throw Error(ErrorCode::ConfigError, "figure id must be fig2, fig3 or fig4");
}

inline std::string to_string(FigureId id) {
  switch (id) {
    case FigureId::fig2: return "fig2";
    case FigureId::fig3: return "fig3";
    case FigureId::fig4: return "fig4";
  }
  return "";
}

inline constexpr long kFigurePoints = 801;
inline constexpr double kFig4Omega = 1e-6;  // omega / gamma for the solver columns

inline std::vector<double> uniform_grid(double from, double to, long points) {
  ScanSpec s;
  s.from = from;
  s.to = to;
  s.points = points;
  return s.grid();
}

namespace detail {

inline Dataset mos_figure(FigureId id, const Config& cfg, unsigned workers) {
  ParamReader p(cfg);
  const auto mos_cfg = mos_from(p);
  const auto margins = margins_from(p);
  const auto grid = uniform_grid(-4.0, 4.0, kFigurePoints);
  Dataset ds;
  ds.columns = id == FigureId::fig2
                   ? std::vector<std::string>{"phi_over_phi0", "g_omega0_over_g00", "g_gamma0_over_g00"}
                   : std::vector<std::string>{"phi_over_phi0", "gamma_over_gamma0"};
  ds.rows.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const auto op = mos::operating_point_at_phi(mos_cfg, grid[i] * mos_cfg.phi0(), margins);
    ds.rows[i] = id == FigureId::fig2
                     ? std::vector<double>{grid[i], op.g_omega0 / op.g_00, op.g_gamma0 / op.g_00}
                     : std::vector<double>{grid[i], op.gamma / op.gamma0};
  });
  ds.meta["parameters"] = parameters_json(p);
  return ds;
}

inline Dataset noise_figure(const Config& cfg, unsigned workers) {
  const std::vector<double> ratios{0.0, 0.5, 1.0};
  const auto grid = uniform_grid(-10.0, 10.0, kFigurePoints);
  Dataset ds;
  ds.columns = {"xi"};
  for (const char* kind : {"closed", "solver"}) {
    for (const char* r : {"0", "0.5", "1"}) ds.columns.push_back(std::string(kind) + "_gamma3_" + r);
  }
  ds.rows.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const double xi = grid[i];
    std::vector<double> row{xi};
    for (double q : ratios) row.push_back(noise::closed_form_product_over_sql(xi, 1.0 + 0.5 * q));
    for (double q : ratios) {
      const noise::PortRates rates{1.0, 1.0, q};
      const noise::DriveConfig drive{0.0, kFig4Omega, 1.0};
      const noise::Couplings g{xi, 1.0};
      row.push_back(noise::homodyne_spectra(rates, drive, g, noise::Units::dimensionless()).product_over_sql);
    }
    ds.rows[i] = std::move(row);
  });
  ParamReader p(cfg);
  mos_from(p);
  auto params = parameters_json(p);
  params["noise.gamma1"] = 1.0;
  params["noise.gamma2"] = 1.0;
  params["noise.gamma3_over_gamma"] = ratios;
  params["noise.delta"] = 0.0;
  params["noise.omega"] = kFig4Omega;
  params["noise.a0"] = 1.0;
  params["noise.g_gamma0"] = 1.0;
  ds.meta["parameters"] = params;
  ds.meta["product_normalizer"] = "hbar^2/4";
  return ds;
}

}  // namespace detail

inline Dataset reproduce_figure(FigureId id, const Config& cfg = {}, unsigned workers = default_workers(),
                                const ToleranceSet& tol = {}) {
  Dataset ds = id == FigureId::fig4 ? detail::noise_figure(cfg, workers) : detail::mos_figure(id, cfg, workers);
  nlohmann::ordered_json meta;
  meta["kind"] = "figure";
  meta["figure_id"] = to_string(id);
  meta["parameters"] = ds.meta["parameters"];
  if (ds.meta.contains("product_normalizer")) meta["product_normalizer"] = ds.meta["product_normalizer"];
  meta["normalizers"] = normalizers_json(cfg);
  meta["tolerances"] = tol.to_json();
  meta["version"] = kVersion;
  ds.meta = std::move(meta);
  return ds;
}

}  // namespace optomech::app
