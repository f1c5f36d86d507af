#pragma once

// Single-point evaluation of each model from a Config. Every evaluator reads
// its section with defaults, records the values it used, and returns one row
// in the fixed column order of output_columns().

#include <map>
#include <string>
#include <vector>

#include "optomech/app/config.hpp"
#include "optomech/mate.hpp"
#include "optomech/mos.hpp"
#include "optomech/msi.hpp"
#include "optomech/noise.hpp"

namespace optomech::app {

enum class Target { synthetic, mos, msi, mate, noise };

inline std::string to_string(Target t) {
  switch (t) {
    case Target::synthetic: return "synthetic";
    case Target::mos: return "mos";
    case Target::msi: return "msi";
    case Target::mate: return "mate";
    case Target::noise: return "noise";
  }
  return "";
}

inline Target parse_target(const std::string& name) {
  for (Target t : {Target::synthetic, Target::mos, Target::msi, Target::mate, Target::noise}) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorCode::ConfigError, "unknown target '" + name + "'");
}

// Reads keys with defaults and keeps the resolved values for metadata.
class ParamReader {
 public:
  explicit ParamReader(const Config& cfg) : cfg_(cfg) {}

  double num(const std::string& key, double fallback) {
    const double v = cfg_.number(key, fallback);
    used_[key] = v;
    return v;
  }

  std::optional<double> maybe(const std::string& key) {
    auto v = cfg_.number(key);
    if (v) used_[key] = *v;
    return v;
  }

  long integer(const std::string& key, long fallback) {
    const long v = cfg_.integer(key, fallback);
    used_[key] = static_cast<double>(v);
    return v;
  }

  std::optional<long> maybe_integer(const std::string& key) {
    auto v = cfg_.integer(key);
    if (v) used_[key] = static_cast<double>(*v);
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    auto v = cfg_.text(key, fallback);
    text_used_[key] = v;
    return v;
  }

  const std::map<std::string, double>& used() const { return used_; }
  const std::map<std::string, std::string>& text_used() const { return text_used_; }

 private:
  const Config& cfg_;
  std::map<std::string, double> used_;
  std::map<std::string, std::string> text_used_;
};

inline mos::RegimeMargins margins_from(ParamReader& p) {
  mos::RegimeMargins m;
  m.thin_tandem = p.num("regime.thin_tandem", m.thin_tandem);
  m.much_less = p.num("regime.much_less", m.much_less);
  return m;
}

inline mos::MosConfig mos_from(ParamReader& p) {
  mos::MosConfig c;
  c.l = p.num("mos.l", c.l);
  c.lambda = p.num("mos.lambda", c.lambda);
  c.t = p.num("mos.t", c.t);
  c.t_m = p.num("mos.t_m", c.t_m);
  c.phi_r = p.num("mos.phi_r", c.phi_r);
  c.x = p.num("mos.x", c.x);
  if (auto n = p.maybe_integer("mos.N")) c.N = static_cast<int>(*n);
  return c;
}

inline msi::MsiConfig msi_from(ParamReader& p) {
  const double lambda = p.num("msi.lambda", 0.85e-6);
  return msi::MsiConfig::balanced_from(p.num("msi.T_b_sq", 0.5), p.num("msi.r_ms", 0.9),
                                       p.num("msi.l", 1e-4), kTwoPi / lambda, p.num("msi.x", 0.0));
}

inline mate::MateConfig mate_from(ParamReader& p) {
  mate::MateConfig c;
  c.l = p.num("mate.l", c.l);
  c.x = p.num("mate.x", c.x);
  c.t = p.num("mate.t", c.t);
  c.t_m = p.num("mate.t_m", c.t_m);
  c.phi_r = p.num("mate.phi_r", c.phi_r);
  c.lambda = p.num("mate.lambda", c.lambda);
  const auto branch = p.text("mate.branch", "minus");
  if (branch == "plus") {
    c.branch = mate::Branch::plus;
  } else if (branch == "minus") {
    c.branch = mate::Branch::minus;
  } else {
    throw Error(ErrorCode::ConfigError, "mate.branch must be 'plus' or 'minus'");
  }
  c.N = static_cast<int>(p.integer("mate.N", c.N));
  return c;
}

inline noise::MechanicalParams mech_from(ParamReader& p) {
  noise::MechanicalParams m;
  m.x_zpf = p.num("mech.x_zpf", m.x_zpf);
  m.gamma_m = p.num("mech.gamma_m", m.gamma_m);
  return m;
}

inline const std::vector<std::string>& output_columns(Target t) {
  static const std::map<Target, std::vector<std::string>> cols = {
      {Target::synthetic, {"T", "mu", "dT_dpsi", "dmu_dpsi"}},
      {Target::mos,
       {"phi_over_phi0", "gamma_over_gamma0", "g_omega0_over_g00", "g_gamma0_over_g00", "T",
        "gamma", "g_omega0", "g_gamma0", "gamma_exact", "g_omega_exact"}},
      {Target::msi, {"tau", "mu", "gamma_ms", "g_omega0", "g_gamma0", "dtau_dx", "dmu_dx"}},
      {Target::mate,
       {"k_c", "g_omega0", "dk_dx", "x_subcavity", "gamma_mate", "dgamma_dx"}},
      {Target::noise,
       {"theta_opt", "s_xx_imp", "s_ff", "product_over_sql", "closed_form_over_sql", "xi", "A"}},
  };
  return cols.at(t);
}

namespace detail {

inline std::vector<double> eval_synthetic(ParamReader& p) {
  const auto mirror = ElementSpec::mirror(p.num("synthetic.t", 0.014));
  const auto membrane = ElementSpec::membrane(p.num("synthetic.t_m", 0.1), p.num("synthetic.phi_r", 0.0));
  const auto r = synthetic_response(p.num("synthetic.psi", kPi), mirror, membrane);
  return {r.T, r.mu, r.dT_dpsi, r.dmu_dpsi};
}

// mos.phi_over_phi0, when given, places the membrane at x_tilde + Phi/k and
// overrides mos.x.
inline std::vector<double> eval_mos(ParamReader& p) {
  auto cfg = mos_from(p);
  const auto margins = margins_from(p);
  if (auto u = p.maybe("mos.phi_over_phi0")) cfg = mos::at_phi(cfg, *u * cfg.phi0());
  const auto op = mos::operating_point(cfg, margins);
  const auto ex = mos::exact_corrections(cfg);
  return {op.phi / op.phi0, op.gamma / op.gamma0, op.g_omega0 / op.g_00, op.g_gamma0 / op.g_00,
          op.T, op.gamma, op.g_omega0, op.g_gamma0, ex.gamma_exact, ex.g_omega_exact};
}

inline std::vector<double> eval_msi(ParamReader& p) {
  const auto cfg = msi_from(p);
  const auto m = msi::msi_effective_mirror(cfg);
  const auto g = msi::msi_couplings(cfg);
  return {m.tau, m.mu, g.gamma_ms, g.g_omega0, g.g_gamma0, g.dtau_dx, g.dmu_dx};
}

// Resonance nearest the reference wavevector 2 pi / lambda.
inline std::vector<double> eval_mate(ParamReader& p) {
  const auto cfg = mate_from(p);
  const double k_c = mate::track_resonance(cfg, cfg.x, cfg.k());
  const auto g = mate::mate_dispersive_constant(cfg, k_c);
  const auto d = mate::mate_exact_decay(cfg, k_c, margins_from(p));
  return {k_c, g.g_omega0, g.dk_dx, g.family == mate::ModeFamily::x_subcavity ? 1.0 : 0.0,
          d.gamma_mate, d.dgamma_dx};
}

// noise.xi, when given, sets g_omega0 = xi g_gamma0.
inline std::vector<double> eval_noise(ParamReader& p) {
  noise::PortRates rates;
  rates.gamma1 = p.num("noise.gamma1", 1.0);
  rates.gamma2 = p.num("noise.gamma2", rates.gamma1);
  rates.gamma3 = p.num("noise.gamma3", 0.0);
  noise::DriveConfig drive;
  drive.delta = p.num("noise.delta", 0.0);
  drive.omega = p.num("noise.omega", 1e-6 * rates.gamma1);
  drive.a0 = p.num("noise.a0", 1.0);
  noise::Couplings g;
  g.g_gamma0 = p.num("noise.g_gamma0", 1.0);
  if (auto xi = p.maybe("noise.xi")) {
    g.g_omega0 = *xi * g.g_gamma0;
  } else {
    g.g_omega0 = p.num("noise.g_omega0", 0.0);
  }
  const auto units_name = p.text("noise.units", "dimensionless");
  noise::Units units;
  if (units_name == "dimensionless") {
    units = noise::Units::dimensionless();
  } else if (units_name != "si") {
    throw Error(ErrorCode::ConfigError, "noise.units must be 'si' or 'dimensionless'");
  }
  const auto rep = noise::homodyne_spectra(rates, drive, g, units);
  return {rep.theta_opt, rep.s_xx_imp, rep.s_ff, rep.product_over_sql,
          noise::closed_form_product_over_sql(rep.xi, rep.A), rep.xi, rep.A};
}

}  // namespace detail

inline std::vector<double> evaluate(Target t, ParamReader& p) {
  switch (t) {
    case Target::synthetic: return detail::eval_synthetic(p);
    case Target::mos: return detail::eval_mos(p);
    case Target::msi: return detail::eval_msi(p);
    case Target::mate: return detail::eval_mate(p);
    case Target::noise: return detail::eval_noise(p);
  }
  return {};
}

inline std::vector<double> evaluate(Target t, const Config& cfg) {
  ParamReader p(cfg);
  return evaluate(t, p);
}

}  // namespace optomech::app
