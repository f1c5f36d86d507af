// One PASS/FAIL line per acceptance criterion. Every reference value is
// computed here from its own formula or root finder, not taken from the
// library routine under test.

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "optomech/app/app.hpp"

using namespace optomech;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double stencil5(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Synthetic-mirror closed forms, written out independently.
double T_of(double t, double tm, double psi) {
  const double r = std::sqrt(1 - t * t), rm = std::sqrt(1 - tm * tm);
  return t * t * tm * tm / (1 + r * r * rm * rm + 2 * r * rm * std::cos(psi));
}

double mu_of(double t, double tm, double psi) {
  const double r = std::sqrt(1 - t * t), rm = std::sqrt(1 - tm * tm);
  return std::atan2(rm * t * t * std::sin(psi), rm * (1 + r * r) * std::cos(psi) + r * (1 + rm * rm));
}

Outcome fig2() {
  const auto ds = app::reproduce_figure(app::FigureId::fig2);
  double worst = 0.0;
  for (const auto& row : ds.rows) {
    const double u = row[0], q = (1 + u * u) * (1 + u * u);
    worst = std::max({worst, std::abs(row[1] - (1 - u * u) / q), std::abs(row[2] - 2 * u / q)});
  }
  const auto& zero = ds.rows[400];
  const auto& one = ds.rows[500];
  const auto& lo = ds.rows.front();
  const auto& hi = ds.rows.back();
  worst = std::max({worst, std::abs(zero[1] - 1), std::abs(zero[2]), std::abs(one[1]), std::abs(one[2] - 0.5)});
  // tails: past their extrema (|u| = sqrt 3 and 1/sqrt 3) both curves shrink toward 0
  bool decays = std::abs(lo[1]) < 0.06 && std::abs(hi[1]) < 0.06 && std::abs(lo[2]) < 0.03 && std::abs(hi[2]) < 0.03;
  for (std::size_t i = 1; i < ds.rows.size(); ++i) {
    const double u = ds.rows[i][0];
    if (u > std::sqrt(3.0)) decays = decays && std::abs(ds.rows[i][1]) < std::abs(ds.rows[i - 1][1]);
    if (u > 1 / std::sqrt(3.0) + 0.01) decays = decays && std::abs(ds.rows[i][2]) < std::abs(ds.rows[i - 1][2]);
  }
  return {worst < 1e-12 && decays && ds.rows.size() == 801,
          fmt("max deviation %.2e over 801 points; |curves| at |Phi/Phi0| = 4: %.4f, %.4f", worst, std::abs(hi[1]),
              std::abs(hi[2]))};
}

Outcome fig3() {
  const auto ds = app::reproduce_figure(app::FigureId::fig3);
  double worst = 0.0;
  for (const auto& row : ds.rows) worst = std::max(worst, std::abs(row[1] - 1 / (1 + row[0] * row[0])));
  return {worst < 1e-12 && ds.rows.size() == 801 && ds.rows[500][1] == 0.5,
          fmt("max deviation %.2e over %.0f points", worst, static_cast<double>(ds.rows.size()))};
}

Outcome fig4() {
  const auto ds = app::reproduce_figure(app::FigureId::fig4);
  const double A[3] = {1.0, 1.25, 1.5};
  const double at0[3] = {1.0, 1.5625, 2.25};
  const double asym[3] = {2.0, 2.5, 3.0};
  double closed = 0.0, solver = 0.0, asym_err = 0.0;
  for (const auto& row : ds.rows) {
    for (int j = 0; j < 3; ++j) {
      const double x2 = row[0] * row[0];
      const double ref = (A[j] * A[j] + 2 * A[j] * x2) / (1 + x2);
      closed = std::max(closed, std::abs(row[1 + j] - ref));
      solver = std::max(solver, std::abs(row[4 + j] / ref - 1));
    }
  }
  for (int j = 0; j < 3; ++j) {
    closed = std::max(closed, std::abs(ds.rows[400][1 + j] - at0[j]));
    asym_err = std::max({asym_err, std::abs(noise::closed_form_product_over_sql(1e9, A[j]) - asym[j]),
                         std::abs(noise::closed_form_product_over_sql(-1e9, A[j]) - asym[j])});
  }
  return {closed < 1e-12 && asym_err < 1e-12 && solver < 1e-4,
          fmt("closed form %.2e, asymptotes %.2e, solver at omega = 1e-6 gamma %.2e (relative)", closed, asym_err,
              solver)};
}

Outcome benchmark() {
  mos::MosConfig cfg;  // t_m = 0.1, t = 0.014, l = 1e-4 m, lambda = 0.85 um
  const double x_zpf = 1e-15, gamma_m = 0.1, a0 = 1.0;
  const double k = 2 * std::acos(-1.0) / 0.85e-6;
  const double C_ref = 299792458.0 * std::pow(k * a0 * x_zpf, 2) / (1e-4 * gamma_m) * 4 * 0.014 * 0.014 / std::pow(0.1, 6);
  noise::CavityDrive drive;
  drive.k = cfg.k();
  drive.l = cfg.l;
  drive.a0 = a0;
  drive.mech = {x_zpf, gamma_m};
  const double C = noise::cooperativity(drive, noise::MosCooperativity{cfg.t, cfg.t_m});
  const auto sp = mos::two_port_setpoint(cfg);
  const bool ok = C >= 0.5 && C <= 2 && std::abs(C / C_ref - 1) < 1e-12 && std::abs(sp.T_sym - 0.0392) <= 1e-6 &&
                  std::abs(sp.finesse - 80) <= 1 && std::abs(sp.delta_x * 1e9 - 0.338) <= 0.001;
  return {ok, fmt("C = %.4f, T_sym = %.6f, finesse = %.2f", C, sp.T_sym, sp.finesse) +
                  fmt(", delta_x = %.4f nm", sp.delta_x * 1e9)};
}

Outcome locus() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  double dpsi = 0.0, rel = 0.0;
  bool ok = true;
  for (int i = 0; i < 100; ++i) {
    const double tm = 0.02 + 0.13 * u(rng);
    const double t = tm * tm + u(rng) * (0.2 * tm - tm * tm);
    const auto z = mos::zero_dispersive_locus(t, tm);
    // mu = atan2(N, D): d mu / d psi has the sign of N'D - ND' = r_m t^2 [r_m(1 + r^2) + r(1 + r_m^2) cos psi]
    const double r = std::sqrt(1 - t * t), rm = std::sqrt(1 - tm * tm);
    auto dmu = [&](double psi) { return rm * (1 + r * r) + r * (1 + rm * rm) * std::cos(psi); };
    boost::uintmax_t iters = 200;
    const auto b = boost::math::tools::toms748_solve(dmu, 0.5, std::acos(-1.0) - 1e-9,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    const double root = 0.5 * (b.first + b.second);
    dpsi = std::max(dpsi, std::abs(root - z.psi_lo));
    const double phi0 = tm * tm / 4;
    const double e = std::abs(std::abs(0.5 * (z.psi_lo - std::acos(-1.0))) - phi0) / phi0;
    rel = std::max(rel, e / (3 * t * t / (tm * tm)));
    ok = ok && std::abs(root - z.psi_lo) < 1e-9 && e < 3 * t * t / (tm * tm);
  }
  return {ok, fmt("max |dpsi| = %.2e; max Phi0 error / (3 t^2/t_m^2) = %.3f", dpsi, rel)};
}

Outcome derivatives() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  const double pi = std::acos(-1.0);
  double worst = 0.0;
  int used = 0;
  auto take = [&](double analytic, double numeric) {
    worst = std::max(worst, std::abs(analytic - numeric) / std::abs(numeric));
    ++used;
  };
  for (int i = 0; i < 500; ++i) {
    const double t = 0.05 + 0.9 * u(rng), tm = 0.05 + 0.9 * u(rng), psi = -pi + 2 * pi * u(rng);
    const double r = std::sqrt(1 - t * t), rm = std::sqrt(1 - tm * tm);
    if (std::abs(r - rm) < 0.02) continue;  // cavity-side reflection nearly vanishes: phase jumps by pi
    const auto resp = synthetic_response(psi, ElementSpec::mirror(t), ElementSpec::membrane(tm));
    const double h = 1e-3 * std::min(1 - r * rm, std::abs(r - rm));
    const double dT = stencil5([&](double p) { return T_of(t, tm, p); }, psi, h);
    const double dmu = stencil5([&](double p) { return mu_of(t, tm, p); }, psi, h);
    if (std::abs(resp.dT_dpsi) > 1e-3 * resp.T) take(resp.dT_dpsi, dT);
    if (std::abs(resp.dmu_dpsi) > 1e-3) take(resp.dmu_dpsi, dmu);
  }
  // MSI: analytic d tau/dx and d mu/dx against a 5-point stencil of the effective mirror in x
  const double k = 2 * pi / 0.85e-6;
  for (int i = 0; i < 500; ++i) {
    const double Tb2 = u(rng), rms = u(rng), x = 0.85e-6 * u(rng);
    const auto cfg = msi::MsiConfig::balanced_from(Tb2, rms, 1e-4, k, x);
    const auto m = msi::msi_effective_mirror(cfg);
    if (std::abs(m.tau) > 0.99 || std::abs(m.tau) < 1e-3) continue;
    const auto g = msi::msi_couplings(cfg);
    auto mirror_at = [&](double xx) {
      auto c = cfg;
      c.x = xx;
      return msi::msi_effective_mirror(c);
    };
    const double h = 1e-3 * std::max(1e-3, std::min(std::abs(m.rho), std::abs(m.tau))) / k;
    const double dtau = stencil5([&](double xx) { return mirror_at(xx).tau; }, x, h);
    const double dmu = stencil5([&](double xx) { return m.mu + std::arg(mirror_at(xx).rho / m.rho); }, x, h);
    if (std::abs(g.dtau_dx) > 1e-3 * k) take(g.dtau_dx, dtau);
    if (std::abs(g.dmu_dx) > 1e-3 * k) take(g.dmu_dx, dmu);
  }
  return {worst < 1e-6 && used > 1000, fmt("max relative error %.2e over %.0f derivatives", worst, used)};
}

// Membrane position where the tracked resonance stops moving, by bisection on
// the numerically differentiated k_c(x).
double stationary_x(const mate::MateConfig& cfg, double k_c, double lo, double hi) {
  auto slope = [&](double x) {
    auto c = cfg;
    c.x = x;
    return mate::mate_dk_dx_numeric(c, mate::track_resonance(cfg, x, k_c));
  };
  double s_lo = slope(lo);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double s = slope(mid);
    if (std::signbit(s) == std::signbit(s_lo)) {
      lo = mid;
      s_lo = s;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Outcome mate_oracle() {
  const double pi = std::acos(-1.0);
  double root_err = 0.0, dk_err = 0.0;
  int roots = 0;
  for (double x : {1e-6, 2.3e-6, 4.1e-6, 1.1e-5}) {
    for (double tm : {0.1, 0.3}) {
      mate::MateConfig cfg;
      cfg.x = x;
      cfg.t_m = tm;
      const double k0 = cfg.k();
      std::vector<mate::Resonance> found;
      try {
        found = mate::mate_resonances(cfg, {k0, k0 + pi / cfg.l});
      } catch (const Error&) {
      }
      for (const auto& r : found) {
        // explicit family: k(2x - l) = +-acos(-cos(kl + phi_r)/r_m) + 2 pi N, solved by TOMS 748
        const double rm = cfg.r_m();
        auto g = [&](double kk) {
          return kk * (2 * cfg.x - cfg.l) - r.explicit_sign * std::acos(std::clamp(-std::cos(kk * cfg.l + cfg.phi_r) / rm, -1.0, 1.0)) -
                 2 * pi * static_cast<double>(r.N);
        };
        const double w = 1e-3 * pi / cfg.l;
        boost::uintmax_t iters = 200;
        const auto b = boost::math::tools::toms748_solve(g, r.k - w, r.k + w, boost::math::tools::eps_tolerance<double>(52), iters);
        root_err = std::max(root_err, std::abs(0.5 * (b.first + b.second) - r.k) / r.k);
        const double numeric = mate::mate_dk_dx_numeric(cfg, r.k);
        dk_err = std::max(dk_err, std::abs(mate::mate_dispersive_constant(cfg, r.k).dk_dx / numeric - 1));
        ++roots;
      }
    }
  }
  // zero-dispersive points at t_m = 0.1: geometry with a resonance at k0 near psi = pi -+ acos(r_m)
  mate::MateConfig base;
  base.t_m = 0.1;
  base.phi_r = pi;
  const double k0 = 7.39e6;
  base.lambda = 2 * pi / k0;
  const double a = std::acos(base.r_m());
  double phi_err = 0.0;
  for (int side : {+1, -1}) {
    auto cfg = base;
    const double two_kx = side > 0 ? a : 2 * pi - a;  // psi = 2kx + pi = pi + side * a (mod 2 pi)
    cfg.x = two_kx / (2 * k0);
    cfg.l = (two_kx + std::round((k0 * 1e-4 - two_kx) / pi) * pi) / k0;
    const double k_c = mate::track_resonance(cfg, cfg.x, k0);
    const double dx = 0.2 * cfg.t_m / (2 * k0);
    const double xs = stationary_x(cfg, k_c, cfg.x - dx, cfg.x + dx);
    double phi = std::remainder(k0 * xs + 0.5 * (cfg.phi_r - pi), pi);  // Phi = (psi - pi)/2
    phi_err = std::max(phi_err, std::abs(std::abs(phi) / (0.5 * cfg.t_m) - 1));
    if ((phi > 0) != (side > 0)) phi_err = INFINITY;
  }
  return {roots >= 8 && root_err < 1e-10 && dk_err < 1e-4 && phi_err < 1e-2,
          fmt("%.0f roots: k error %.2e, dk/dx error %.2e", roots, root_err, dk_err) +
              fmt("; stationary Phi vs +-t_m/2: %.2e", phi_err)};
}

Outcome cross_system() {
  double ratio_err = 0.0;
  for (auto [t, tm] : {std::pair{0.014, 0.1}, std::pair{0.004, 0.05}, std::pair{0.03, 0.2}}) {
    app::Config c;
    c.set("mos.t", t);
    c.set("mos.t_m", tm);
    const auto table = app::compare_systems(c);
    ratio_err = std::max(ratio_err, std::abs(table.rows[2].g_ratio_mos / (2 / std::pow(tm, 3)) - 1));
  }
  const double k = 2 * std::acos(-1.0) / 0.85e-6, l = 1e-4;
  const double wl = 299792458.0 * k / l;
  bool below = true;
  int feasible = 0;
  double closed_err = 0.0;
  for (int i = 1; i < 50; ++i) {
    for (int j = 1; j < 50; ++j) {
      const auto cfg = msi::MsiConfig::balanced_from(i / 50.0, j / 50.0, l, k);
      try {
        const auto z = msi::msi_zero_dispersive(cfg);
        const double g = j / 50.0 * std::sqrt(z.tau * z.tau) * wl;  // r_ms sqrt(T_ms) omega_c / l
        closed_err = std::max(closed_err, std::abs(z.g_gamma0_closed_form / g - 1));
        below = below && g < wl && std::abs(z.g_gamma0) < wl;
        ++feasible;
      } catch (const Error& e) {
        below = below && e.code() == ErrorCode::NoZeroDispersivePoint;
      }
    }
  }
  return {ratio_err < 1e-10 && below && feasible > 100 && closed_err < 1e-12,
          fmt("MOS:MATE ratio error %.2e; MSI below omega_c/l on %.0f grid points", ratio_err, feasible)};
}

Outcome thin_tandem_regime() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  const double pi = std::acos(-1.0), c = 299792458.0;
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    mos::MosConfig cfg;
    cfg.t_m = 0.02 + 0.13 * u(rng);
    cfg.t = cfg.t_m * cfg.t_m + u(rng) * (0.2 * cfg.t_m - cfg.t_m * cfg.t_m);
    cfg.l = 1e-5 + 1e-3 * u(rng);
    cfg.lambda = 0.5e-6 + 1e-6 * u(rng);
    cfg.phi_r = -pi + 2 * pi * u(rng);
    cfg.x = u(rng) * 0.01 * cfg.l * std::pow(cfg.t_m, 4) / (4 * cfg.t * cfg.t);
    const double k = 2 * pi / cfg.lambda;
    const double psi = 2 * k * cfg.x + cfg.phi_r;
    // x -> 0 counterparts: gamma = cT/2l, g_omega0 = -(c/2l) dmu/dx with dmu/dx = 2k dmu/dpsi
    const double gamma = c * T_of(cfg.t, cfg.t_m, psi) / (2 * cfg.l);
    const double dmu = stencil5([&](double p) { return mu_of(cfg.t, cfg.t_m, p); }, psi, 1e-3 * cfg.t_m * cfg.t_m);
    const double g_omega = -c / (2 * cfg.l) * 2 * k * dmu;
    const auto e = mos::exact_corrections(cfg);
    worst = std::max({worst, std::abs(e.gamma_exact / gamma - 1), std::abs(e.g_omega_exact / g_omega - 1)});
  }
  return {worst < 1e-2, fmt("max relative deviation %.3e over 2000 points with x < 0.01 l t_m^4/(4t^2)", worst)};
}

Outcome unitarity() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  const double pi = std::acos(-1.0);
  double worst = 0.0;
  auto check = [&](const ScatteringMatrix& s) {
    const cd m[2][2] = {{s.m11, s.m12}, {s.m21, s.m22}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        cd sum = std::conj(m[0][i]) * m[0][j] + std::conj(m[1][i]) * m[1][j];
        worst = std::max(worst, std::abs(sum - (i == j ? 1.0 : 0.0)));
      }
    }
  };
  for (int i = 0; i < 1000; ++i) {
    const auto mirror = ElementSpec::mirror(u(rng));
    const auto membrane = ElementSpec::membrane(u(rng), -pi + 2 * pi * u(rng));
    check(element_scattering(mirror));
    check(element_scattering(membrane));
    check(compose_synthetic(mirror, membrane, 2e-6 * u(rng), 2 * pi / (0.5e-6 + 1e-6 * u(rng))));
  }
  return {worst < 1e-10, fmt("max |S^dagger S - I| entry %.2e over 3000 matrices", worst)};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"Fig. 2 reproduction", fig2},
      {"Fig. 3 reproduction", fig3},
      {"Fig. 4 reproduction", fig4},
      {"single-photon benchmark", benchmark},
      {"zero-dispersive locus oracle", locus},
      {"derivative oracles", derivatives},
      {"MATE resonance oracle", mate_oracle},
      {"cross-system benchmark", cross_system},
      {"thin-tandem regime checks", thin_tandem_regime},
      {"unitarity suite", unitarity},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %-30s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
