#pragma once

// Membrane-outside system: a two-sided cavity of length l whose non-feeding
// mirror is backed by a membrane at distance x. The mirror + membrane tandem
// acts as a synthetic mirror with position-dependent T and mu.

#include <cmath>
#include <optional>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/numerics.hpp"
#include "optomech/scattering.hpp"

namespace optomech::mos {

struct RegimeMargins {
  double thin_tandem = 0.01;  // x < thin_tandem * l t_m^4 / (4 t^2)
  double much_less = 0.2;     // a << b read as a < much_less * b
};

struct MosConfig {
  double l = 1e-4;          // cavity length, m
  double lambda = 0.85e-6;  // vacuum wavelength, m
  double t = 0.014;         // mirror amplitude transmission
  double t_m = 0.1;         // membrane amplitude transmission
  double phi_r = 0.0;       // membrane reflection phase, rad
  double x = 0.0;           // membrane-mirror distance, m
  std::optional<int> N;     // branch of x_tilde; smallest x_tilde >= 0 when unset

  double k() const { return kTwoPi / lambda; }
  double omega_c() const { return kSpeedOfLight * k(); }
  double r() const { return std::sqrt(1.0 - t * t); }
  double r_m() const { return std::sqrt(1.0 - t_m * t_m); }
  double phi0() const { return 0.25 * t_m * t_m; }

  int branch() const {
    if (N) return *N;
    return static_cast<int>(std::ceil(phi_r / kTwoPi - 0.5));
  }

  // Position of maximal synthetic-mirror transparency, 2k x_tilde + phi_r = pi + 2 pi N.
  double x_tilde() const {
    return 0.5 * lambda * (0.5 + static_cast<double>(branch()) - phi_r / kTwoPi);
  }

  ElementSpec mirror() const { return ElementSpec::mirror(t); }
  ElementSpec membrane() const { return ElementSpec::membrane(t_m, phi_r); }
};

inline void validate(const MosConfig& cfg) {
  const bool ok = cfg.l > 0.0 && cfg.lambda > 0.0 && cfg.t_m > 0.0 && cfg.t_m <= 1.0 &&
                  cfg.t >= 0.0 && cfg.t <= 1.0 && cfg.x >= 0.0 && std::isfinite(cfg.l) &&
                  std::isfinite(cfg.lambda) && std::isfinite(cfg.x) && std::isfinite(cfg.phi_r);
  if (!ok) {
    throw Error(ErrorCode::InvalidArgument,
                "MOS config needs l > 0, lambda > 0, 0 < t_m <= 1, 0 <= t <= 1, x >= 0");
  }
}

// Each piece of t_m^2 < t << t_m << 1 separately, plus the thin-tandem bound.
struct RegimeFlags {
  bool tm_sq_below_t = false;
  bool t_much_less_tm = false;
  bool tm_much_less_one = false;
  bool thin_tandem = false;

  bool all() const { return tm_sq_below_t && t_much_less_tm && tm_much_less_one && thin_tandem; }
};

inline double thin_tandem_bound(double l, double t, double t_m) {
  return l * std::pow(t_m, 4) / (4.0 * t * t);
}

inline RegimeFlags regime_flags(const MosConfig& cfg, const RegimeMargins& margins = {}) {
  RegimeFlags f;
  f.tm_sq_below_t = cfg.t_m * cfg.t_m < cfg.t;
  f.t_much_less_tm = cfg.t < margins.much_less * cfg.t_m;
  f.tm_much_less_one = cfg.t_m < margins.much_less;
  f.thin_tandem = cfg.x < margins.thin_tandem * thin_tandem_bound(cfg.l, cfg.t, cfg.t_m);
  return f;
}

// Lorentzian profiles in u = Phi/Phi0, normalized to gamma0 and g00.
struct NormalizedProfile {
  double gamma_over_gamma0 = 0.0;
  double g_omega_over_g00 = 0.0;
  double g_gamma_over_g00 = 0.0;
};

inline NormalizedProfile normalized_profile(double u) {
  const double q = 1.0 + u * u;
  return {1.0 / q, (1.0 - u * u) / (q * q), 2.0 * u / (q * q)};
}

struct OperatingPoint {
  double phi = 0.0;       // k (x - x_tilde)
  double phi0 = 0.0;      // t_m^2 / 4
  double T = 0.0;         // exact synthetic-mirror transmission at this x
  double gamma = 0.0;     // rad/s, Lorentzian form
  double gamma0 = 0.0;    // (2c/l) t^2/t_m^2
  double g_omega0 = 0.0;  // rad/s per m
  double g_gamma0 = 0.0;  // rad/s per m
  double g_00 = 0.0;      // 4 omega_c t^2 / (l t_m^4)
  bool valid_thin_tandem = false;
  RegimeFlags regime;
};

inline double gamma0(const MosConfig& cfg) {
  return 2.0 * kSpeedOfLight / cfg.l * (cfg.t * cfg.t) / (cfg.t_m * cfg.t_m);
}

inline double g00(const MosConfig& cfg) {
  return 4.0 * cfg.omega_c() / cfg.l * (cfg.t * cfg.t) / std::pow(cfg.t_m, 4);
}

// Asymptotic (t << t_m << 1) decay rate and coupling constants at the phase
// offset phi, with omega_c = c k. The exact T is reported alongside.
inline OperatingPoint operating_point_at_phi(const MosConfig& cfg, double phi,
                                             const RegimeMargins& margins = {}) {
  validate(cfg);
  OperatingPoint op;
  op.phi = phi;
  op.phi0 = cfg.phi0();
  op.gamma0 = gamma0(cfg);
  op.g_00 = g00(cfg);
  const auto prof = normalized_profile(phi / op.phi0);
  op.gamma = op.gamma0 * prof.gamma_over_gamma0;
  op.g_omega0 = op.g_00 * prof.g_omega_over_g00;
  op.g_gamma0 = op.g_00 * prof.g_gamma_over_g00;
  op.T = synthetic_response(kPi + 2.0 * phi, cfg.mirror(), cfg.membrane()).T;
  op.regime = regime_flags(cfg, margins);
  op.valid_thin_tandem = op.regime.thin_tandem;
  return op;
}

inline double phi_of(const MosConfig& cfg) { return cfg.k() * (cfg.x - cfg.x_tilde()); }

inline OperatingPoint operating_point(const MosConfig& cfg, const RegimeMargins& margins = {}) {
  validate(cfg);
  return operating_point_at_phi(cfg, phi_of(cfg), margins);
}

// Config with the membrane moved to x = x_tilde + phi/k.
inline MosConfig at_phi(MosConfig cfg, double phi) {
  cfg.x = cfg.x_tilde() + phi / cfg.k();
  return cfg;
}

struct ZeroDispersiveLocus {
  double psi_lo = 0.0;  // in (0, pi]
  double psi_hi = 0.0;  // 2 pi - psi_lo
  double T_star = 0.0;  // t^2 (1 + r_m^2) / (1 - r^2 r_m^2)
  double cos_psi = 0.0;

  // (psi* - pi)/2 for the two solutions; compare with -/+ Phi0.
  double half_offset_lo() const { return 0.5 * (psi_lo - kPi); }
  double half_offset_hi() const { return 0.5 * (psi_hi - kPi); }
};

// cos psi* = -r_m (1 + r^2) / (r (1 + r_m^2)); needs r_m <= r.
inline ZeroDispersiveLocus zero_dispersive_locus(double t, double t_m, const Tolerances& tol = {}) {
  const auto mirror = ElementSpec::mirror(t);
  const auto membrane = ElementSpec::membrane(t_m);
  validate(mirror, tol);
  validate(membrane, tol);
  const double r = mirror.r, rm = membrane.r;
  if (rm > r) {
    throw Error(ErrorCode::NoZeroDispersivePoint, "membrane must be less reflective than the mirror (r_m < r)");
  }
  ZeroDispersiveLocus z;
  z.cos_psi = std::max(-1.0, -rm * (1.0 + r * r) / (r * (1.0 + rm * rm)));
  z.psi_lo = std::acos(z.cos_psi);
  z.psi_hi = kTwoPi - z.psi_lo;
  z.T_star = t * t * (1.0 + rm * rm) / (1.0 - r * r * rm * rm);
  return z;
}

// |dgamma/dx| at the zero-dispersive point:
//   (ck/l)(t^2/t_m^2) 2 r_m (1 + r_m^2)/(1 - r_m^2 r^2) sqrt((r^2 - r_m^2)/(1 - r_m^2 r^2))
inline double dissipative_constant_exact(double t, double t_m, double k, double l) {
  const double r2 = 1.0 - t * t;
  const double rm2 = 1.0 - t_m * t_m;
  if (rm2 > r2) {
    throw Error(ErrorCode::NoZeroDispersivePoint, "membrane must be less reflective than the mirror (r_m < r)");
  }
  const double rm = std::sqrt(rm2);
  const double q = 1.0 - rm2 * r2;
  return kSpeedOfLight * k / l * (t * t) / (t_m * t_m) * 2.0 * rm * (1.0 + rm2) / q *
         std::sqrt((r2 - rm2) / q);
}

// t << t_m limit of the above: (ck/l)(t^2/t_m^4) 2 r_m (1 + r_m^2).
inline double dissipative_constant_asymptotic(double t, double t_m, double k, double l) {
  const double rm2 = 1.0 - t_m * t_m;
  return kSpeedOfLight * k / l * (t * t) / std::pow(t_m, 4) * 2.0 * std::sqrt(rm2) * (1.0 + rm2);
}

// Finite-thickness forms next to the thin-tandem counterparts they reduce to
// as x -> 0. Sign convention of the dispersive constant follows the
// Lorentzian g_omega0 (positive at Phi = 0), i.e. both dispersive entries
// equal d(omega_c)/dx of the resonance condition 2lk = pi + 2 pi N - mu(kx).
struct ExactCorrections {
  double g_omega_exact = 0.0;        // -(omega_c mu'/2l) / (1 + x mu'/2l), mu' = dmu/d(kx)
  double g_omega_synthetic = 0.0;    // -(c/2l) dmu/dx
  double gamma_exact = 0.0;          // (cT/2l) / (1 + (x/l)(T/t_m^2))
  double gamma_synthetic = 0.0;      // cT/2l
  double dgamma_dx_exact = 0.0;      // c t_m^2 (l t_m^2 T'/T^2 - 1) / (2 (l t_m^2/T + x)^2)
  double dgamma_dx_synthetic = 0.0;  // (c/2l) dT/dx
};

inline ExactCorrections exact_corrections(const MosConfig& cfg) {
  validate(cfg);
  const double k = cfg.k();
  const double l = cfg.l, x = cfg.x;
  const double tm2 = cfg.t_m * cfg.t_m;
  const auto resp = synthetic_response(tandem_phase(x, k, cfg.phi_r), cfg.mirror(), cfg.membrane());
  const double mu_prime = 2.0 * resp.dmu_dpsi;  // dmu/d(kx)
  const double dT_dx = 2.0 * k * resp.dT_dpsi;
  const double omega_c = cfg.omega_c();

  ExactCorrections e;
  e.g_omega_synthetic = -omega_c * mu_prime / (2.0 * l);
  e.g_omega_exact = e.g_omega_synthetic / (1.0 + x * mu_prime / (2.0 * l));
  e.gamma_synthetic = kSpeedOfLight * resp.T / (2.0 * l);
  e.gamma_exact = e.gamma_synthetic / (1.0 + (x / l) * (resp.T / tm2));
  const double lead = l * tm2 / resp.T + x;
  e.dgamma_dx_exact =
      kSpeedOfLight * tm2 * (l * tm2 / (resp.T * resp.T) * dT_dx - 1.0) / (2.0 * lead * lead);
  e.dgamma_dx_synthetic = kSpeedOfLight / (2.0 * l) * dT_dx;
  return e;
}

// Brute-force resonance: solve 2 l k = pi + 2 pi N - mu(2kx + phi_r) for the
// mode closest to k_guess by bracketing and bisection.
inline double resonance_wavevector(const MosConfig& cfg, double k_guess) {
  validate(cfg);
  const auto mirror = cfg.mirror();
  const auto membrane = cfg.membrane();
  auto mu_at = [&](double k) {
    return synthetic_response(tandem_phase(cfg.x, k, cfg.phi_r), mirror, membrane).mu;
  };
  const double n_real = (2.0 * cfg.l * k_guess + mu_at(k_guess) - kPi) / kTwoPi;
  const double n = std::round(n_real);
  auto residual = [&](double k) { return 2.0 * cfg.l * k - kPi - kTwoPi * n + mu_at(k); };
  // |dmu/dk| = x |mu'| << 2l in the thin-tandem regime, so the residual is
  // monotone and a window of +-1/4 free spectral range brackets the root.
  const double half = 0.25 * kPi / cfg.l;
  double lo = k_guess - half, hi = k_guess + half;
  for (int widen = 0; widen < 8 && std::signbit(residual(lo)) == std::signbit(residual(hi)); ++widen) {
    lo -= half;
    hi += half;
  }
  if (std::signbit(residual(lo)) == std::signbit(residual(hi))) {
    throw Error(ErrorCode::NoRootInWindow, "MOS resonance not bracketed near k_guess");
  }
  return numerics::bisect(residual, lo, hi);
}

struct TwoPortSetpoint {
  double delta_x = 0.0;  // lambda t_m^2 / (8 pi): moves Phi from 0 to Phi0
  double T_sym = 0.0;    // 2 t^2 / t_m^2, synthetic-mirror T at Phi = Phi0
  double finesse = 0.0;  // pi / T_sym
};

inline TwoPortSetpoint two_port_setpoint(const MosConfig& cfg) {
  validate(cfg);
  TwoPortSetpoint sp;
  sp.delta_x = cfg.lambda * cfg.t_m * cfg.t_m / (8.0 * kPi);
  sp.T_sym = 2.0 * cfg.t * cfg.t / (cfg.t_m * cfg.t_m);
  sp.finesse = kPi / sp.T_sym;
  return sp;
}

}  // namespace optomech::mos
