#pragma once

// Michelson-Sagnac interferometer reduced to a one-sided cavity whose input
// mirror has membrane-position-dependent reflection rho and transmission tau.
// The reduction itself is taken as given:
//
//   rho = -2 R_b T_b t_ms - (R_b^2 - T_b^2) r_ms cos 2kx + i r_ms sin 2kx
//   tau = t_ms (T_b^2 - R_b^2) + 2 R_b T_b r_ms cos 2kx

#include <cmath>
#include <complex>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech::msi {

using cplx = std::complex<double>;

struct MsiConfig {
  double R_b = std::sqrt(0.5);  // beam-splitter amplitude reflection
  double T_b = std::sqrt(0.5);  // beam-splitter amplitude transmission
  double r_ms = 0.9;            // membrane amplitude reflection
  double t_ms = std::sqrt(1.0 - 0.81);
  double l = 1e-4;              // effective optical length, m
  double k = kTwoPi / 0.85e-6;  // 1/m
  double x = 0.0;               // membrane displacement from the symmetric position, m

  // Beam splitter from its power transmission, membrane from its amplitude reflection.
  static MsiConfig balanced_from(double T_b_sq, double r_ms, double l, double k, double x = 0.0) {
    return {std::sqrt(1.0 - T_b_sq), std::sqrt(T_b_sq), r_ms, std::sqrt(1.0 - r_ms * r_ms), l, k, x};
  }

  double omega_c() const { return kSpeedOfLight * k; }
};

inline void validate(const MsiConfig& cfg, double tol = 1e-12) {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  const bool ok = unit(cfg.R_b) && unit(cfg.T_b) && unit(cfg.r_ms) && unit(cfg.t_ms) &&
                  std::abs(cfg.R_b * cfg.R_b + cfg.T_b * cfg.T_b - 1.0) <= tol &&
                  std::abs(cfg.r_ms * cfg.r_ms + cfg.t_ms * cfg.t_ms - 1.0) <= tol;
  if (!ok) throw Error(ErrorCode::InvalidElement, "MSI coefficients must be in [0,1] and lossless");
  if (!(cfg.l > 0.0) || !(cfg.k > 0.0)) throw Error(ErrorCode::InvalidArgument, "MSI needs l > 0, k > 0");
}

struct EffectiveMirror {
  cplx rho;
  double tau = 0.0;
  double mu = 0.0;  // arg rho

  double T_ms() const { return tau * tau; }
};

inline EffectiveMirror msi_effective_mirror(const MsiConfig& cfg) {
  validate(cfg);
  const double c2 = std::cos(2.0 * cfg.k * cfg.x), s2 = std::sin(2.0 * cfg.k * cfg.x);
  const double Rb = cfg.R_b, Tb = cfg.T_b;
  EffectiveMirror m;
  m.rho = {-2.0 * Rb * Tb * cfg.t_ms - (Rb * Rb - Tb * Tb) * cfg.r_ms * c2, cfg.r_ms * s2};
  m.tau = cfg.t_ms * (Tb * Tb - Rb * Rb) + 2.0 * Rb * Tb * cfg.r_ms * c2;
  m.mu = std::arg(m.rho);
  return m;
}

struct MsiCouplings {
  double gamma_ms = 0.0;        // c tau^2 / 2l
  double g_omega0 = 0.0;        // (dmu/dx)(c/2l)
  double g_gamma0 = 0.0;        // -tau (dtau/dx)(c/2l)
  double dtau_dx = 0.0;         // -4 k r_ms R_b T_b sin 2kx
  double dmu_dx = 0.0;          // d arg(rho)/dx
  double dmu_dx_printed = 0.0;  // -2k r_ms [2 t_ms R_b T_b cos 2kx - r_ms (T_b^2 - R_b^2)]
};

inline MsiCouplings msi_couplings(const MsiConfig& cfg) {
  const auto m = msi_effective_mirror(cfg);
  const double c2 = std::cos(2.0 * cfg.k * cfg.x), s2 = std::sin(2.0 * cfg.k * cfg.x);
  const double Rb = cfg.R_b, Tb = cfg.T_b, k = cfg.k;
  const double scale = kSpeedOfLight / (2.0 * cfg.l);

  MsiCouplings out;
  out.gamma_ms = scale * m.T_ms();
  out.dtau_dx = -4.0 * k * cfg.r_ms * Rb * Tb * s2;
  // Im(conj(rho) drho/dx); dividing by |rho|^2 turns it into d(arg rho)/dx.
  out.dmu_dx_printed = -2.0 * k * cfg.r_ms * (2.0 * cfg.t_ms * Rb * Tb * c2 - cfg.r_ms * (Tb * Tb - Rb * Rb));
  out.dmu_dx = out.dmu_dx_printed / std::norm(m.rho);
  out.g_omega0 = out.dmu_dx * scale;
  out.g_gamma0 = -m.tau * out.dtau_dx * scale;
  return out;
}

// Branch n of cos 2kx* = c: 2kx* = acos(c) + n pi for even n, (n + 1) pi - acos(c)
// for odd n. n = 0 is the branch nearest 2kx = pi/2.
inline double branch_phase(double acos_c, int n) {
  return (n % 2 == 0) ? acos_c + n * kPi : (n + 1) * kPi - acos_c;
}

struct MsiZeroDispersive {
  double x_star = 0.0;
  double cos_2kx = 0.0;
  double tau = 0.0;
  double T_ms = 0.0;
  double gamma_ms = 0.0;
  double g_gamma0 = 0.0;             // exact -tau tau' c/2l at x*
  double g_gamma0_closed_form = 0.0; // r_ms (omega_c/l) sqrt(T_ms)
  double r_ms = 0.0;                 // carried for the cooperativity
};

// cos 2kx* = r_ms (T_b^2 - R_b^2) / (2 t_ms R_b T_b)
inline MsiZeroDispersive msi_zero_dispersive(const MsiConfig& cfg, int branch = 0) {
  validate(cfg);
  const double Rb = cfg.R_b, Tb = cfg.T_b;
  const double num = cfg.r_ms * (Tb * Tb - Rb * Rb);
  const double den = 2.0 * cfg.t_ms * Rb * Tb;
  if (!(std::abs(num) <= std::abs(den)) || den == 0.0) {
    throw Error(ErrorCode::NoZeroDispersivePoint, "|r_ms (T_b^2 - R_b^2) / (2 t_ms R_b T_b)| > 1");
  }
  MsiZeroDispersive z;
  z.cos_2kx = num / den;
  z.x_star = branch_phase(std::acos(z.cos_2kx), branch) / (2.0 * cfg.k);
  MsiConfig at = cfg;
  at.x = z.x_star;
  const auto m = msi_effective_mirror(at);
  const auto g = msi_couplings(at);
  z.tau = m.tau;
  z.T_ms = m.T_ms();
  z.gamma_ms = g.gamma_ms;
  z.g_gamma0 = g.g_gamma0;
  z.g_gamma0_closed_form = cfg.r_ms * cfg.omega_c() / cfg.l * std::sqrt(z.T_ms);
  z.r_ms = cfg.r_ms;
  return z;
}

}  // namespace optomech::msi
