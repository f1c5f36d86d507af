#include <gtest/gtest.h>

#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "optomech/mate.hpp"

using namespace optomech;
using namespace optomech::mate;

namespace {

const double kK0 = 7.39e6;

KWindow one_fsr(const MateConfig& cfg, double k0 = kK0) {
  return {k0 - 0.5 * kPi / cfg.l, k0 + 0.5 * kPi / cfg.l};
}

// Cavity length near l0 for which k0 is a resonance with the membrane exactly
// at a zero-dispersive point: 2k0 x + phi_r = pi + acos(r_m), k0 l - 2 k0 x = m pi.
MateConfig zero_dispersive_geometry(double t_m, double l0 = 1e-4, double k0 = kK0) {
  MateConfig cfg;
  cfg.t_m = t_m;
  cfg.phi_r = kPi;
  const double a = std::acos(cfg.r_m());
  cfg.x = a / (2.0 * k0);
  const double m = std::round((k0 * l0 - a) / kPi);
  cfg.l = (a + m * kPi) / k0;
  cfg.lambda = kTwoPi / k0;
  return cfg;
}

}  // namespace

TEST(Resonances, WindowAroundReferenceWavevector) {
  MateConfig cfg;
  const auto roots = mate_resonances(cfg, one_fsr(cfg));
  ASSERT_GE(roots.size(), 1u);
  for (const auto& r : roots) {
    EXPECT_LT(std::abs(r.residual), 1e-12);
    EXPECT_LT(r.explicit_phase_error, 1e-6);
    const double k_explicit = explicit_branch_root(cfg, r.explicit_sign, r.N, r.k, 1e-3 * kPi / cfg.l);
    EXPECT_LT(std::abs(k_explicit - r.k) / r.k, 1e-10);
  }
  for (std::size_t i = 1; i < roots.size(); ++i) EXPECT_GT(roots[i].k, roots[i - 1].k);
}

TEST(Resonances, AgreeWithToms748) {
  MateConfig cfg;
  cfg.x = 3.3e-6;
  for (const auto& r : mate_resonances(cfg, one_fsr(cfg))) {
    auto f = [&](double k) { return resonance_residual(cfg, k); };
    const double w = 1e-4 * kPi / cfg.l;
    if (std::signbit(f(r.k - w)) == std::signbit(f(r.k + w))) continue;
    boost::uintmax_t iters = 200;
    auto b = boost::math::tools::toms748_solve(f, r.k - w, r.k + w, boost::math::tools::eps_tolerance<double>(50), iters);
    EXPECT_LT(std::abs(0.5 * (b.first + b.second) - r.k) / r.k, 1e-13);
  }
}

TEST(Resonances, TransparentMembrane) {
  MateConfig cfg;
  cfg.t_m = 1.0;
  for (const auto& r : mate_resonances(cfg, one_fsr(cfg))) {
    EXPECT_NEAR(std::cos(r.k * cfg.l + cfg.phi_r), 0.0, 1e-9);
  }
}

TEST(Resonances, OpaqueMembraneDecouples) {
  MateConfig cfg;
  cfg.t_m = 1e-5;
  cfg.x = 2.3e-6;
  int inner = 0, outer = 0;
  for (const auto& r : mate_resonances(cfg, {kK0 - 2.0 * kPi / cfg.l, kK0 + 2.0 * kPi / cfg.l})) {
    const double c_in = std::cos(2.0 * r.k * cfg.x + cfg.phi_r);
    const double c_out = std::cos(2.0 * r.k * (cfg.l - cfg.x) + cfg.phi_r);
    const bool on_inner = std::abs(c_in + 1.0) < 1e-6;
    const bool on_outer = std::abs(c_out + 1.0) < 1e-6;
    EXPECT_TRUE(on_inner || on_outer) << r.k;
    inner += on_inner;
    outer += on_outer;
  }
  EXPECT_GT(outer, 2);
}

TEST(Resonances, NoRootInWindow) {
  MateConfig cfg;
  const auto roots = mate_resonances(cfg, one_fsr(cfg));
  const double k = roots.front().k;
  try {
    mate_resonances(cfg, {k + 1e-9 * k, k + 2e-9 * k});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoRootInWindow);
  }
  EXPECT_THROW(mate_resonances(cfg, {2.0, 1.0}), Error);
  cfg.x = cfg.l;
  EXPECT_THROW(mate_resonances(cfg, {1.0, 2.0}), Error);
}

TEST(DispersiveConstant, ClosedFormMatchesResolvedResonances) {
  for (double x : {1e-6, 4.1e-6, 2e-5}) {
    MateConfig cfg;
    cfg.x = x;
    for (const auto& r : mate_resonances(cfg, one_fsr(cfg))) {
      const auto d = mate_dispersive_constant(cfg, r.k);
      const double numeric = mate_dk_dx_numeric(cfg, r.k);
      EXPECT_LT(std::abs(d.dk_dx / numeric - 1.0), 1e-4) << "x=" << x << " k=" << r.k;
      // Sign rule: x-subcavity modes have a positive constant.
      if (d.family == ModeFamily::x_subcavity) {
        EXPECT_GT(d.g_omega0, 0.0);
      } else {
        EXPECT_LT(d.g_omega0, 0.0);
      }
      EXPECT_EQ(d.family, r.family);
    }
  }
}

TEST(DispersiveConstant, MaximumOnTheMinusBranch) {
  // cos(kl - 2kx) = 0 and, on resonance, cos(kl + phi_r) = 0. The two choices
  // of phi_r land on opposite signs of the square-root term.
  const double k = kK0;
  MateConfig cfg;
  cfg.lambda = kTwoPi / k;
  cfg.x = 1e-9;
  cfg.l = (0.5 * kPi + std::round(k * 1e-4 / kPi) * kPi + 2.0 * k * cfg.x) / k;
  int found = 0;
  for (int n = 0; n < 2; ++n) {
    cfg.phi_r = std::remainder(0.5 * kPi + n * kPi - k * cfg.l, kTwoPi);
    ASSERT_NEAR(resonance_residual(cfg, k), 0.0, 1e-9);
    ASSERT_NEAR(std::cos(k * cfg.l - 2.0 * k * cfg.x), 0.0, 1e-9);
    const auto d = mate_dispersive_constant(cfg, k);
    if (d.derivative_sign < 0) {
      ++found;
      EXPECT_LT(std::abs(d.g_omega0 / max_dispersive_constant(cfg) - 1.0), cfg.t_m * cfg.t_m);
      // x << l t_m^2/4: the enhanced value 4 omega_c / (l t_m^2)
      EXPECT_LT(std::abs(d.g_omega0 / (4.0 * cfg.omega_c() / (cfg.l * cfg.t_m * cfg.t_m)) - 1.0),
                4.0 * cfg.x / (cfg.l * cfg.t_m * cfg.t_m) + cfg.t_m * cfg.t_m);
    } else {
      EXPECT_LT(d.g_omega0, 0.0);
      EXPECT_LT(std::abs(d.g_omega0), 2.0 * cfg.omega_c() / cfg.l);
    }
  }
  EXPECT_EQ(found, 1);
}

TEST(DispersiveConstant, AtPhi0OnTheXFamily) {
  // Membrane at Phi = Phi0; the cavity length is tuned onto resonance.
  const double k = kK0;
  MateConfig base;
  base.x = 2e-8;
  base.lambda = kTwoPi / k;
  const double phi0 = 0.25 * base.t_m * base.t_m;
  base.phi_r = kPi + 2.0 * phi0 - 2.0 * k * base.x;
  auto f = [&](double l) {
    MateConfig c = base;
    c.l = l;
    return resonance_residual(c, k);
  };
  const auto brackets = numerics::sign_change_brackets(f, 1e-4, 1e-4 + base.lambda, 2000);
  ASSERT_GE(brackets.size(), 2u);
  // Near the x-subcavity line every resonance at Phi0 carries the "-" sign.
  for (const auto& b : brackets) {
    MateConfig cfg = base;
    cfg.l = numerics::bisect(f, b.lo, b.hi);
    const double c = std::cos(k * cfg.l - 2.0 * k * cfg.x);
    EXPECT_NEAR(c * c, 0.5, 0.01);
    const auto d = mate_dispersive_constant(cfg, k);
    ASSERT_EQ(d.family, ModeFamily::x_subcavity);
    EXPECT_LT(std::abs(d.g_omega0 / dispersive_constant_at_phi0(cfg) - 1.0), 0.02);
    EXPECT_LT(std::abs(d.g_omega0 / (2.0 * cfg.omega_c() / (cfg.l * cfg.t_m * cfg.t_m)) - 1.0),
              2.0 * cfg.x / (cfg.l * cfg.t_m * cfg.t_m) + 0.02);
  }
}

TEST(DispersiveConstant, BranchAmbiguity) {
  MateConfig cfg;
  cfg.x = 0.5 * cfg.l;  // kl - 2kx = 0 for every k
  try {
    mate_dispersive_constant(cfg, kK0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BranchAmbiguity);
  }
}

TEST(ZeroDispersive, StationaryResonance) {
  const auto cfg = zero_dispersive_geometry(0.1);
  ASSERT_NEAR(resonance_residual(cfg, kK0), 0.0, 1e-9);
  const double k_c = track_resonance(cfg, cfg.x, kK0);
  const double scale = k_c / (cfg.x + 0.5 * cfg.l * cfg.t_m * cfg.t_m);
  const double at = mate_dk_dx_numeric(cfg, k_c);
  EXPECT_LT(std::abs(at), 1e-3 * scale);
  const double dx = 0.2 * cfg.t_m / (2.0 * kK0);
  MateConfig left = cfg, right = cfg;
  left.x -= dx;
  right.x += dx;
  const double d_left = mate_dk_dx_numeric(left, track_resonance(cfg, left.x, k_c));
  const double d_right = mate_dk_dx_numeric(right, track_resonance(cfg, right.x, k_c));
  EXPECT_LT(d_left * d_right, 0.0);
  EXPECT_GT(std::abs(d_left), 10.0 * std::abs(at));
}

TEST(ZeroDispersive, ClosedForms) {
  MateConfig cfg;
  EXPECT_FALSE(mate_zero_dispersive(cfg).thin_membrane_gap);  // 1 um is not << l t_m^2/4
  cfg.x = 1e-9;
  const auto z = mate_zero_dispersive(cfg);
  EXPECT_DOUBLE_EQ(z.phi_star, 0.05);
  EXPECT_LT(std::abs(z.phi_star_exact / z.phi_star - 1.0), 1e-2);
  EXPECT_NEAR(z.phi_star * z.phi_star, 0.25 * cfg.t_m * cfg.t_m, 1e-18);
  EXPECT_NEAR(z.ratio_to_mos / 2000.0, 1.0, 1e-10);
  EXPECT_NEAR(z.g_gamma0, cfg.omega_c() / cfg.l * cfg.t * cfg.t / cfg.t_m, 1e-6);
  EXPECT_NEAR(z.gamma_mate, kSpeedOfLight * cfg.t * cfg.t / (2.0 * cfg.l), 1e-6);
  EXPECT_TRUE(z.thin_membrane_gap);
  EXPECT_TRUE(z.t_much_less_tm);
}

TEST(ZeroDispersive, DispersiveDominatesAtPhi0) {
  MateConfig cfg;
  cfg.x = 1e-9;
  // MOS-form dissipative constant at Phi0 against the "-" dispersive constant there.
  const double g_gamma = 2.0 * cfg.omega_c() / cfg.l * cfg.t * cfg.t / std::pow(cfg.t_m, 4);
  const double ratio = g_gamma / dispersive_constant_at_phi0(cfg);
  EXPECT_LT(std::abs(ratio / (cfg.t * cfg.t / (cfg.t_m * cfg.t_m)) - 1.0), 2.0 * cfg.x / (cfg.l * cfg.t_m * cfg.t_m) + 1e-12);
  EXPECT_LT(ratio, 0.1);
}

TEST(ExactDecay, ThinGapLimitIsSyntheticMirror) {
  MateConfig cfg;
  cfg.x = 1e-12;
  const double k = kK0;
  cfg.phi_r = kPi - 2.0 * k * cfg.x;  // cos(2kx + phi_r) = -1
  const auto d = mate_exact_decay(cfg, k);
  const double r = std::sqrt(1.0 - cfg.t * cfg.t), rm = cfg.r_m();
  const double T = cfg.t * cfg.t * cfg.t_m * cfg.t_m / std::pow(1.0 - r * rm, 2);
  EXPECT_LT(std::abs(d.gamma_mate / (kSpeedOfLight * T / (2.0 * cfg.l)) - 1.0), 4.0 * cfg.t * cfg.t / (cfg.t_m * cfg.t_m));
}

TEST(ExactDecay, AtZeroDispersivePoint) {
  MateConfig cfg;
  const double k = kK0;
  cfg.phi_r = kPi + std::acos(cfg.r_m()) - 2.0 * k * cfg.x;
  const auto d = mate_exact_decay(cfg, k);
  EXPECT_NEAR(d.gamma_mate / (kSpeedOfLight * cfg.t * cfg.t / (2.0 * cfg.l)), 1.0, 1e-12);
}

TEST(ExactDecay, DerivativeByFiniteDifference) {
  MateConfig cfg;
  cfg.x = 3e-8;
  const double k = kK0;
  for (double u : {1.0, 1.7, 3.0, -2.0}) {
    cfg.phi_r = kPi + 2.0 * u * 0.0025 - 2.0 * k * cfg.x;
    auto g = [&](double x) {
      MateConfig c = cfg;
      c.x = x;
      return mate_exact_decay(c, k).gamma_mate;
    };
    const double fd = numerics::central_difference5(g, cfg.x, 1e-12);
    EXPECT_LT(numerics::relative_error(mate_exact_decay(cfg, k).dgamma_dx, fd), 1e-6) << u;
  }
}

TEST(ExactDecay, ReducedFormBound) {
  const double k = kK0;
  for (double x : {1e-9, 5e-9, 2e-8}) {
    for (double u : {1.0, 1.5, 2.0, 4.0, -1.0, -3.0}) {
      MateConfig cfg;
      cfg.x = x;
      cfg.phi_r = kPi + 2.0 * u * 0.0025 - 2.0 * k * x;
      const auto d = mate_exact_decay(cfg, k);
      const double bound = 4.0 * x / (cfg.l * cfg.t_m * cfg.t_m) + 2.0 * kPi / (k * cfg.l) * 4.0;
      EXPECT_LT(std::abs(d.dgamma_dx_reduced / d.dgamma_dx - 1.0), bound) << x << " " << u;
    }
  }
}

TEST(ExactDecay, MatchesMosSyntheticMirror) {
  const double k = kK0;
  MateConfig cfg;
  cfg.x = 2e-9;
  const auto mirror = ElementSpec::mirror(cfg.t);
  const auto membrane = ElementSpec::membrane(cfg.t_m, 0.0);
  for (double u : {1.0, 2.0, 3.0, -1.5}) {
    const double psi = kPi + 2.0 * u * 0.0025;
    cfg.phi_r = psi - 2.0 * k * cfg.x;
    const auto d = mate_exact_decay(cfg, k);
    const auto s = synthetic_response(psi, mirror, membrane);
    const double gamma_mos = kSpeedOfLight * s.T / (2.0 * cfg.l);
    const double dgamma_mos = kSpeedOfLight / (2.0 * cfg.l) * 2.0 * k * s.dT_dpsi;
    const double tol = 4.0 * cfg.x / (cfg.l * cfg.t_m * cfg.t_m) + 4.0 * cfg.t * cfg.t / (cfg.t_m * cfg.t_m);
    EXPECT_LT(std::abs(d.gamma_mate / gamma_mos - 1.0), tol) << u;
    EXPECT_LT(std::abs(d.dgamma_dx_reduced / dgamma_mos - 1.0), tol) << u;
  }
}

TEST(ExactDecay, FigureOfMeritPeaksAtPhi0) {
  const double k = kK0;
  MateConfig cfg;
  cfg.x = 1e-9;
  double best = -1.0, arg = 0.0;
  for (int i = 1; i <= 4000; ++i) {
    const double phi = 5.0 * 0.0025 * i / 4000.0;
    cfg.phi_r = kPi + 2.0 * phi - 2.0 * k * cfg.x;
    const auto d = mate_exact_decay(cfg, k);
    const double merit = 0.5 * std::abs(d.dgamma_dx) / d.gamma_mate;
    if (merit > best) {
      best = merit;
      arg = phi;
    }
  }
  EXPECT_LT(std::abs(arg / 0.0025 - 1.0), 0.05);
}
