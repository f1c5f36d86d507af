#pragma once

// Membrane-at-the-edge: one-sided cavity of length l with a membrane inside at
// distance x from the input mirror. Resonances satisfy
//
//   cos(kl + phi_r) = -r_m cos(2kx - kl).

#include <algorithm>
#include <cmath>
#include <vector>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/mos.hpp"
#include "optomech/numerics.hpp"

namespace optomech::mate {

enum class Branch { plus, minus };

// Which subcavity a mode curve is inherited from: the short x-long part (the
// mode frequency falls as x grows) or the (l - x)-long remainder.
enum class ModeFamily { x_subcavity, outer };

struct MateConfig {
  double l = 1e-4;          // m
  double x = 1e-6;          // membrane-input-mirror distance, m
  double t = 0.014;         // input mirror amplitude transmission
  double t_m = 0.1;         // membrane amplitude transmission
  double phi_r = kPi;       // membrane reflection phase
  double lambda = 0.85e-6;  // reference wavelength, m (sets omega_c = c k)
  Branch branch = Branch::minus;
  int N = 0;

  double r_m() const { return std::sqrt(1.0 - t_m * t_m); }
  double k() const { return kTwoPi / lambda; }
  double omega_c() const { return kSpeedOfLight * k(); }
};

inline void validate(const MateConfig& cfg) {
  const bool ok = cfg.l > 0.0 && cfg.x > 0.0 && cfg.x < cfg.l && cfg.t >= 0.0 && cfg.t <= 1.0 &&
                  cfg.t_m >= 0.0 && cfg.t_m <= 1.0 && cfg.lambda > 0.0;
  if (!ok) throw Error(ErrorCode::InvalidArgument, "MATE config needs 0 < x < l and valid magnitudes");
}

inline double resonance_residual(const MateConfig& cfg, double k) {
  return std::cos(k * cfg.l + cfg.phi_r) + cfg.r_m() * std::cos(2.0 * k * cfg.x - k * cfg.l);
}

struct Resonance {
  double k = 0.0;
  double residual = 0.0;
  int explicit_sign = +1;  // sign in k(2x - l) = +-acos(-cos(kl + phi_r)/r_m) + 2 pi N
  long N = 0;
  double explicit_phase_error = 0.0;  // |k(2x - l) -/+ acos(..) - 2 pi N|, rad
  int derivative_sign = +1;  // sign in front of the square root of (dk/dx)^-1
  ModeFamily family = ModeFamily::outer;
};

// Sign of the square-root term in
//   (dk/dx)^-1 = (l/2k) [1 - 2x/l +- r_m^-1 sqrt(1 + t_m^2 cos^2(kl - 2kx) / (1 - cos^2(kl - 2kx)))].
// Implicit differentiation of the resonance condition gives
// -sin(kl + phi_r) / (r_m sin(2kx - kl)) for the bracket term, hence
// sign = -sign(sin(kl + phi_r) sin(2kx - kl)).
inline int derivative_sign(const MateConfig& cfg, double k) {
  const double p = std::sin(k * cfg.l + cfg.phi_r) * std::sin(2.0 * k * cfg.x - k * cfg.l);
  return p > 0.0 ? -1 : +1;
}

namespace detail {

inline double explicit_acos(const MateConfig& cfg, double k) {
  const double arg = -std::cos(k * cfg.l + cfg.phi_r) / cfg.r_m();
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

inline void classify(const MateConfig& cfg, Resonance& res) {
  const double lhs = res.k * (2.0 * cfg.x - cfg.l);
  const double a = explicit_acos(cfg, res.k);
  double best = INFINITY;
  for (int s : {+1, -1}) {
    const double n = std::round((lhs - s * a) / kTwoPi);
    const double err = std::abs(lhs - s * a - kTwoPi * n);
    if (err < best) {
      best = err;
      res.explicit_sign = s;
      res.N = static_cast<long>(n);
    }
  }
  res.explicit_phase_error = best;
  res.derivative_sign = derivative_sign(cfg, res.k);
  res.family = res.derivative_sign < 0 ? ModeFamily::x_subcavity : ModeFamily::outer;
}

}  // namespace detail

struct KWindow {
  double lo = 0.0;
  double hi = 0.0;
};

// All resonances in the window: residual scanned on a uniform grid with step
// <= (pi/l)/50, sign changes bisected down to double precision.
inline std::vector<Resonance> mate_resonances(const MateConfig& cfg, KWindow window,
                                              double steps_per_fsr = 50.0) {
  validate(cfg);
  if (!(window.hi > window.lo) || !(window.lo > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "k window must satisfy 0 < lo < hi");
  }
  const double fsr = kPi / cfg.l;
  const double step = fsr / steps_per_fsr;
  const auto intervals = static_cast<std::size_t>(std::ceil((window.hi - window.lo) / step));
  auto f = [&](double k) { return resonance_residual(cfg, k); };

  std::vector<Resonance> out;
  for (const auto& b : numerics::sign_change_brackets(f, window.lo, window.hi, intervals)) {
    Resonance res;
    res.k = numerics::bisect(f, b.lo, b.hi);
    res.residual = f(res.k);
    if (!out.empty() && res.k == out.back().k) continue;
    detail::classify(cfg, res);
    out.push_back(res);
  }
  if (out.empty()) throw Error(ErrorCode::NoRootInWindow, "no MATE resonance in the k window");
  return out;
}

// Root of the explicit branch equation k(2x - l) - s acos(-cos(kl + phi_r)/r_m) - 2 pi N = 0
// nearest k_near; an independent route to the same resonance.
inline double explicit_branch_root(const MateConfig& cfg, int sign, long N, double k_near,
                                   double half_width) {
  auto g = [&](double k) {
    return k * (2.0 * cfg.x - cfg.l) - sign * detail::explicit_acos(cfg, k) - kTwoPi * static_cast<double>(N);
  };
  return numerics::bisect(g, k_near - half_width, k_near + half_width);
}

inline double explicit_branch_root(const MateConfig& cfg, double k_near, double half_width) {
  return explicit_branch_root(cfg, cfg.branch == Branch::plus ? +1 : -1, cfg.N, k_near, half_width);
}

// Root nearest k_guess for the membrane at a different position.
inline double track_resonance(MateConfig cfg, double x, double k_guess, double half_width = 0.0) {
  cfg.x = x;
  if (half_width <= 0.0) half_width = 0.1 * kPi / cfg.l;
  const auto roots = mate_resonances(cfg, {k_guess - half_width, k_guess + half_width});
  const auto best = std::min_element(roots.begin(), roots.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.k - k_guess) < std::abs(b.k - k_guess);
  });
  return best->k;
}

struct DispersiveConstant {
  double g_omega0 = 0.0;  // -c dk/dx, rad/s per m
  double dk_dx = 0.0;
  int derivative_sign = +1;
  ModeFamily family = ModeFamily::outer;
};

// Closed-form dk/dx at a resonance k_c. The reported constant is
// g_omega0 = -d(omega_c)/dx = -c dk/dx, positive for x-subcavity modes.
inline DispersiveConstant mate_dispersive_constant(const MateConfig& cfg, double k_c) {
  validate(cfg);
  const double c = std::cos(k_c * cfg.l - 2.0 * k_c * cfg.x);
  const double one_minus_c2 = 1.0 - c * c;
  if (one_minus_c2 == 0.0) {
    throw Error(ErrorCode::BranchAmbiguity, "cos^2(kl - 2kx) = 1: branches touch (zero-dispersive point)");
  }
  DispersiveConstant out;
  out.derivative_sign = derivative_sign(cfg, k_c);
  out.family = out.derivative_sign < 0 ? ModeFamily::x_subcavity : ModeFamily::outer;
  const double root = std::sqrt(1.0 + cfg.t_m * cfg.t_m * c * c / one_minus_c2) / cfg.r_m();
  const double inv = cfg.l / (2.0 * k_c) * (1.0 - 2.0 * cfg.x / cfg.l + out.derivative_sign * root);
  out.dk_dx = 1.0 / inv;
  out.g_omega0 = -kSpeedOfLight * out.dk_dx;
  return out;
}

// dk_c/dx by re-solving the resonance at x +- h, x +- 2h (Richardson).
inline double mate_dk_dx_numeric(const MateConfig& cfg, double k_c, double h = 1e-12) {
  auto k_of_x = [&](double x) { return track_resonance(cfg, x, k_c); };
  return numerics::richardson_derivative(k_of_x, cfg.x, h);
}

// Extremal dispersive constants: omega_c / (x + l t_m^2/4) on the "-" branch at
// cos(kl - 2kx) = 0, and omega_c / (x + l t_m^2/2) at Phi = Phi0.
inline double max_dispersive_constant(const MateConfig& cfg) {
  return cfg.omega_c() / (cfg.x + 0.25 * cfg.l * cfg.t_m * cfg.t_m);
}

inline double dispersive_constant_at_phi0(const MateConfig& cfg) {
  return cfg.omega_c() / (cfg.x + 0.5 * cfg.l * cfg.t_m * cfg.t_m);
}

struct MateZeroDispersive {
  double phi_star = 0.0;        // +t_m/2 (the locus is +-phi_star), Phi^2 = Phi0
  double phi_star_exact = 0.0;  // acos(r_m)/2, from cos(2kx + phi_r) = -r_m
  double g_gamma0 = 0.0;        // (omega_c/l) t^2 / t_m
  double gamma_mate = 0.0;      // c t^2 / 2l
  double ratio_to_mos = 0.0;    // |g_gamma0^MOS(Phi0)| / |g_gamma0^MATE(Phi*)| = 2 / t_m^3
  bool thin_membrane_gap = false;  // x < much_less * l t_m^2 / 4
  bool t_much_less_tm = false;
};

inline MateZeroDispersive mate_zero_dispersive(const MateConfig& cfg,
                                               const mos::RegimeMargins& margins = {}) {
  validate(cfg);
  MateZeroDispersive z;
  const double wl = cfg.omega_c() / cfg.l;
  z.phi_star = 0.5 * cfg.t_m;
  z.phi_star_exact = 0.5 * std::acos(cfg.r_m());
  z.g_gamma0 = wl * cfg.t * cfg.t / cfg.t_m;
  z.gamma_mate = kSpeedOfLight * cfg.t * cfg.t / (2.0 * cfg.l);
  const double g_mos = 2.0 * wl * cfg.t * cfg.t / std::pow(cfg.t_m, 4);
  z.ratio_to_mos = g_mos / z.g_gamma0;
  z.thin_membrane_gap = cfg.x < margins.much_less * 0.25 * cfg.l * cfg.t_m * cfg.t_m;
  z.t_much_less_tm = cfg.t < margins.much_less * cfg.t_m;
  return z;
}

struct MateDecay {
  double gamma_mate = 0.0;
  double dgamma_dx = 0.0;
  double dgamma_dx_reduced = 0.0;  // (ck/l) 2 t^2 t_m^2 sin psi / [1 + r_m^2 + 2 r_m cos psi]^2
  bool in_stated_regime = false;   // t << t_m, outside of which the forms are unverified
};

// Decay rate of the one-sided cavity (t << t_m):
//   gamma = (c t^2 t_m^2 / 2) / (x t_m^2 + (l - x)[1 + r_m^2 + 2 r_m cos psi]),  psi = 2kx + phi_r
// and its exact x-derivative.
inline MateDecay mate_exact_decay(const MateConfig& cfg, double k,
                                  const mos::RegimeMargins& margins = {}) {
  validate(cfg);
  const double rm = cfg.r_m();
  const double tm2 = cfg.t_m * cfg.t_m, t2 = cfg.t * cfg.t;
  const double psi = 2.0 * k * cfg.x + cfg.phi_r;
  const double cp = std::cos(psi), sp = std::sin(psi);
  const double E = 1.0 + rm * rm + 2.0 * rm * cp;
  const double l = cfg.l, x = cfg.x;

  MateDecay d;
  d.gamma_mate = 0.5 * kSpeedOfLight * t2 * tm2 / (x * tm2 + (l - x) * E);
  const double num = rm * rm + rm * cp + 2.0 * rm * k * (l - x) * sp;
  const double den = l * E - 2.0 * x * (rm * rm + rm * cp);
  d.dgamma_dx = kSpeedOfLight * t2 * tm2 * num / (den * den);
  d.dgamma_dx_reduced = kSpeedOfLight * k / l * 2.0 * t2 * tm2 * sp / (E * E);
  d.in_stated_regime = cfg.t < margins.much_less * cfg.t_m;
  return d;
}

}  // namespace optomech::mate
