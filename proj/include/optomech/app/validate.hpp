#pragma once

// Runtime oracle checks. Each check reports the largest error it measured
// against its tolerance; failures are collected, never thrown. The full suite
// runs more random samples and adds randomized MATE geometries.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "optomech/app/figures.hpp"
#include "optomech/numerics.hpp"

namespace optomech::app {

enum class Suite { fast, full };

inline Suite parse_suite(const std::string& name) {
  if (name == "fast") return Suite::fast;
  if (name == "full") return Suite::full;
  throw Error(ErrorCode::ConfigError, "suite must be 'fast' or 'full'");
}

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }
};

namespace detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CheckResult finish(std::string name, double measured, double tol, std::size_t samples) {
  // NaN never passes.
  return {std::move(name), measured <= tol, measured, tol, samples};
}

struct RandomTandem {
  ElementSpec mirror, membrane;
  double x = 0.0, k = 0.0;
};

inline RandomTandem random_tandem(Rng& rng) {
  RandomTandem s;
  s.mirror = ElementSpec::mirror(uniform(rng, 0.01, 0.99));
  s.membrane = ElementSpec::membrane(uniform(rng, 0.01, 0.99), uniform(rng, -kPi, kPi));
  s.k = kTwoPi / uniform(rng, 0.5e-6, 1.5e-6);
  s.x = uniform(rng, 0.0, 2e-6);
  return s;
}

// t_m^2 < t << t_m << 1
inline std::pair<double, double> random_regime(Rng& rng) {
  const double tm = uniform(rng, 0.02, 0.15);
  return {tm * tm + uniform(rng, 0.0, 1.0) * (0.2 * tm - tm * tm), tm};
}

inline std::vector<CheckResult> scattering_checks(std::size_t n, const ToleranceSet& tol) {
  Rng rng(1001);
  double unitarity = 0.0, constraint = 0.0, elimination = 0.0, closed = 0.0, tan_mu = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = random_tandem(rng);
    for (const auto& e : {s.mirror, s.membrane}) {
      unitarity = std::max(unitarity, element_scattering(e).unitarity_error());
      constraint = std::max(constraint, std::abs(e.t * e.t + e.r * e.r - 1.0));
    }
    constraint = std::max(constraint,
                          std::abs(std::polar(1.0, 2.0 * (s.membrane.phi_r - s.membrane.phi_t)) + 1.0));
    const auto m = compose_synthetic(s.mirror, s.membrane, s.x, s.k);
    const auto e = compose_synthetic_by_elimination(s.mirror, s.membrane, s.x, s.k);
    unitarity = std::max({unitarity, m.unitarity_error(), e.unitarity_error()});
    elimination = std::max({elimination, std::abs(m.m11 - e.m11), std::abs(m.m12 - e.m12),
                            std::abs(m.m21 - e.m21), std::abs(m.m22 - e.m22)});
    const auto resp = synthetic_response(tandem_phase(s.x, s.k, s.membrane.phi_r), s.mirror, s.membrane);
    closed = std::max(closed, std::abs(std::norm(m.m11) - resp.T));
    // tan mu equality is equality of angles modulo pi.
    tan_mu = std::max(tan_mu, std::abs(std::sin(std::arg(-m.m21) - resp.mu)));
  }
  return {finish("unitarity", unitarity, tol["unitarity"], 3 * n),
          finish("constraint", constraint, tol["constraint"], 2 * n),
          finish("elimination", elimination, tol["elimination"], n),
          finish("closed_form_T", closed, tol["closed_form"], n),
          finish("tan_mu", tan_mu, tol["tan_mu"], n)};
}

// Five-point central differences against the closed-form derivatives of the
// synthetic mirror (in psi) and of the MSI effective mirror (in x).
inline CheckResult finite_difference_check(std::size_t n, const ToleranceSet& tol) {
  Rng rng(1002);
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto mirror = ElementSpec::mirror(uniform(rng, 0.05, 0.95));
    const auto membrane = ElementSpec::membrane(uniform(rng, 0.05, 0.95));
    const double psi = uniform(rng, -kPi, kPi);
    const auto resp = synthetic_response(psi, mirror, membrane);
    const double width = std::min(1.0 - mirror.r * membrane.r, std::abs(mirror.r - membrane.r));
    const double h = std::max(1e-2 * width, 1e-5);
    const double dT = numerics::central_difference5(
        [&](double p) { return synthetic_response(p, mirror, membrane).T; }, psi, h);
    const double dmu = numerics::central_difference5(
        [&](double p) { return synthetic_response(p, mirror, membrane).mu; }, psi, h);
    if (std::abs(resp.dT_dpsi) > 1e-3 * resp.T) {
      worst = std::max(worst, numerics::relative_error(resp.dT_dpsi, dT));
      ++used;
    }
    worst = std::max(worst, std::abs(resp.dmu_dpsi - dmu) / std::max(1.0, std::abs(dmu)));
    ++used;
  }
  const double k = kTwoPi / 0.85e-6;
  for (std::size_t i = 0; i < n; ++i) {
    const auto cfg = msi::MsiConfig::balanced_from(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0), 1e-4, k,
                                                   uniform(rng, 0.0, 0.85e-6));
    const auto m = msi::msi_effective_mirror(cfg);
    if (std::abs(m.tau) > 0.99 || std::abs(m.tau) < 1e-3) continue;
    const auto g = msi::msi_couplings(cfg);
    auto at = [&](double x) {
      auto c = cfg;
      c.x = x;
      return msi::msi_effective_mirror(c);
    };
    const double h = 1e-3 * std::max(1e-3, std::min(std::abs(m.rho), std::abs(m.tau))) / k;
    const double dtau = numerics::central_difference5([&](double x) { return at(x).tau; }, cfg.x, h);
    const double dmu = numerics::central_difference5(
        [&](double x) { return m.mu + std::arg(at(x).rho / m.rho); }, cfg.x, h);
    if (std::abs(g.dtau_dx) > 1e-3 * k) {
      worst = std::max(worst, numerics::relative_error(g.dtau_dx, dtau));
      ++used;
    }
    if (std::abs(g.dmu_dx) > 1e-3 * k) {
      worst = std::max(worst, numerics::relative_error(g.dmu_dx, dmu));
      ++used;
    }
  }
  return finish("finite_difference", worst, tol["finite_difference"], used);
}

// Analytic psi* against bisection of dmu/dpsi = 0, and (psi* - pi)/2 against
// -Phi0 measured in units of 3 t^2 / t_m^2.
inline std::vector<CheckResult> locus_checks(std::size_t n, const ToleranceSet& tol) {
  Rng rng(1003);
  double dpsi = 0.0, phi0_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [t, tm] = random_regime(rng);
    const auto z = mos::zero_dispersive_locus(t, tm);
    const auto mirror = ElementSpec::mirror(t);
    const auto membrane = ElementSpec::membrane(tm);
    auto f = [&](double psi) { return synthetic_response(psi, mirror, membrane).dmu_dpsi; };
    const double root = numerics::bisect(f, 0.0, kPi);
    dpsi = std::max(dpsi, std::abs(root - z.psi_lo));
    const double phi0 = 0.25 * tm * tm;
    phi0_err = std::max(phi0_err, std::abs(std::abs(z.half_offset_lo()) - phi0) / phi0 / (3.0 * t * t / (tm * tm)));
  }
  return {finish("locus", dpsi, tol["locus"], n), finish("locus_phi0", phi0_err, 1.0, n)};
}

// General-frequency solver against the omega -> 0 closed forms.
inline CheckResult solver_check(std::size_t n, const ToleranceSet& tol) {
  double worst = 0.0;
  std::size_t used = 0;
  for (double q : {0.0, 0.5, 1.0}) {
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = -10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      const noise::PortRates rates{1.0, 1.0, q};
      const noise::Couplings g{xi, 1.0};
      const auto rep = noise::homodyne_spectra(rates, {0.0, 1e-6, 1.0}, g, noise::Units::dimensionless());
      const double closed = noise::closed_form_product_over_sql(xi, 1.0 + 0.5 * q);
      const double imp = noise::closed_form_imprecision(1.0, q, 1.0, g);
      const double force = noise::closed_form_force(1.0, q, 1.0, g, noise::Units::dimensionless());
      worst = std::max({worst, numerics::relative_error(rep.product_over_sql, closed),
                        numerics::relative_error(rep.s_xx_imp, imp), numerics::relative_error(rep.s_ff, force)});
      ++used;
    }
  }
  return finish("solver", worst, tol["solver"], used);
}

// Published curve values at their marked points.
inline CheckResult figure_check(const ToleranceSet& tol) {
  double worst = 0.0;
  auto at = [](const Dataset& ds, std::size_t row, std::size_t col) { return ds.rows.at(row).at(col); };
  const auto f2 = reproduce_figure(FigureId::fig2, {}, 1);
  const auto f3 = reproduce_figure(FigureId::fig3, {}, 1);
  const auto f4 = reproduce_figure(FigureId::fig4, {}, 1);
  // rows 400 and 500 are Phi/Phi0 = 0 and 1; row 400 of fig4 is xi = 0
  worst = std::max({worst, std::abs(at(f2, 400, 1) - 1.0), std::abs(at(f2, 400, 2)),
                    std::abs(at(f2, 500, 1)), std::abs(at(f2, 500, 2) - 0.5),
                    std::abs(at(f3, 500, 1) - 0.5), std::abs(at(f3, 400, 1) - 1.0),
                    std::abs(at(f4, 400, 1) - 1.0), std::abs(at(f4, 400, 2) - 1.5625),
                    std::abs(at(f4, 400, 3) - 2.25)});
  return finish("figure", worst, tol["figure"], 9);
}

// Finite-thickness corrections stay within 1e-2 (tolerance "limit") of the
// synthetic-mirror forms while x is below 0.01 l t_m^4/(4t^2), and equal
// them at x = 0.
inline std::vector<CheckResult> limit_checks(std::size_t n, const ToleranceSet& tol) {
  Rng rng(1004);
  double regime = 0.0, at_zero = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [t, tm] = random_regime(rng);
    mos::MosConfig cfg;
    cfg.t = t;
    cfg.t_m = tm;
    cfg.phi_r = uniform(rng, -kPi, kPi);
    cfg.lambda = uniform(rng, 0.5e-6, 1.5e-6);
    const double bound = mos::thin_tandem_bound(cfg.l, t, tm);
    cfg.x = uniform(rng, 0.0, 0.01 * bound);
    const auto e = mos::exact_corrections(cfg);
    regime = std::max({regime, std::abs(e.gamma_exact / e.gamma_synthetic - 1.0),
                       std::abs(e.g_omega_exact / e.g_omega_synthetic - 1.0)});
    cfg.x = 0.0;
    const auto z = mos::exact_corrections(cfg);
    at_zero = std::max({at_zero, std::abs(z.gamma_exact / z.gamma_synthetic - 1.0),
                        std::abs(z.g_omega_exact / z.g_omega_synthetic - 1.0)});
  }
  return {finish("thin_tandem_limit", regime, tol["limit"], n),
          finish("zero_thickness_limit", at_zero, tol["closed_form"], n)};
}

// Every root of the MATE resonance equation in one free spectral range
// against the explicit +-/N family, and the closed-form dk/dx against
// re-solved resonances.
inline std::vector<CheckResult> mate_checks(const std::vector<mate::MateConfig>& configs,
                                            const ToleranceSet& tol) {
  double root_err = 0.0, dk_err = 0.0;
  std::size_t roots = 0;
  for (const auto& cfg : configs) {
    const double k0 = cfg.k();
    std::vector<mate::Resonance> found;
    try {
      found = mate::mate_resonances(cfg, {k0, k0 + kPi / cfg.l});
    } catch (const Error& e) {
      // Modes are not evenly spaced; a window one FSR wide can be empty.
      if (e.code() != ErrorCode::NoRootInWindow) throw;
    }
    for (const auto& r : found) {
      const double k_explicit = mate::explicit_branch_root(cfg, r.explicit_sign, r.N, r.k, 1e-3 * kPi / cfg.l);
      root_err = std::max(root_err, std::abs(k_explicit - r.k) / r.k);
      const auto d = mate::mate_dispersive_constant(cfg, r.k);
      dk_err = std::max(dk_err, std::abs(d.dk_dx / mate::mate_dk_dx_numeric(cfg, r.k) - 1.0));
      ++roots;
    }
  }
  if (roots == 0) root_err = dk_err = NAN;
  return {finish("resonance", root_err, tol["resonance"], roots), finish("dk_dx", dk_err, tol["dk_dx"], roots)};
}

}  // namespace detail

inline ValidationReport run_validation(Suite suite, const ToleranceSet& tol = {}) {
  const std::size_t n = suite == Suite::fast ? 200 : 2000;
  ValidationReport rep;
  // A check that throws is recorded as failed under its group name.
  auto add = [&](const char* group, auto&& run) {
    try {
      std::vector<CheckResult> v = run();
      rep.checks.insert(rep.checks.end(), v.begin(), v.end());
    } catch (const std::exception& e) {
      rep.checks.push_back({std::string(group) + " (" + e.what() + ")", false, NAN, 0.0, 0});
    }
  };
  add("scattering", [&] { return detail::scattering_checks(n, tol); });
  add("finite_difference", [&] { return std::vector{detail::finite_difference_check(n, tol)}; });
  add("locus", [&] { return detail::locus_checks(suite == Suite::fast ? 100 : 1000, tol); });
  add("solver", [&] { return std::vector{detail::solver_check(suite == Suite::fast ? 41 : 401, tol)}; });
  add("figure", [&] { return std::vector{detail::figure_check(tol)}; });
  add("limit", [&] { return detail::limit_checks(n, tol); });

  std::vector<mate::MateConfig> mate_configs{mate::MateConfig{}};
  if (suite == Suite::full) {
    detail::Rng rng(1005);
    for (int i = 0; i < 20; ++i) {
      mate::MateConfig c;
      c.x = detail::uniform(rng, 1e-7, 3e-5);
      c.t_m = detail::uniform(rng, 0.05, 0.5);
      c.phi_r = detail::uniform(rng, -kPi, kPi);
      mate_configs.push_back(c);
    }
  }
  add("mate", [&] { return detail::mate_checks(mate_configs, tol); });
  return rep;
}

}  // namespace optomech::app
