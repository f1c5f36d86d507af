#pragma once

// Linearized three-port cavity in the frame rotating at the drive frequency.
// Port 1 is pumped and detected, port 2 is the port whose transmission is
// modulated by the mechanics (dissipative coupling), port 3 models the
// intracavity losses. In the Fourier domain
//
//   [G/2 - i w] X + D Y = sqrt(g1)/2 X1 + sqrt(g2)/2 X2 + sqrt(g3)/2 X3 + a0 g_gamma0 x
//   [G/2 - i w] Y - D X = sqrt(g1)/2 Y1 + sqrt(g2)/2 Y2 + sqrt(g3)/2 Y3 + a0 g_omega0 x
//   X_out1 = 2 sqrt(g1) X - X1,   Y_out1 = 2 sqrt(g1) Y - Y1
//   F      = -a0 hbar g_gamma0 / sqrt(g2) Y2 + 2 a0 hbar g_omega0 X
//
// with G = g1 + g2 + g3 and vacuum inputs obeying
// <X X> = <Y Y> = i<Y X> = -i<X Y> = delta(w + w').

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <variant>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech::noise {

using cplx = std::complex<double>;

struct PortRates {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma3 = 0.0;

  double total() const { return gamma1 + gamma2 + gamma3; }
};

struct DriveConfig {
  double delta = 0.0;  // omega_L - omega_c, rad/s
  double omega = 0.0;  // Fourier frequency, rad/s
  double a0 = 1.0;     // sqrt(intracavity photon number)
};

struct Couplings {
  double g_omega0 = 0.0;
  double g_gamma0 = 0.0;
};

// hbar = 1 gives products directly in units of hbar^2.
struct Units {
  double hbar = kHbar;

  static Units dimensionless() { return {1.0}; }
};

// Source of the port-3 term in the Y equation. The symmetric Y_in3 form is
// the physical one; the literal variant (X_in3) exists only to document that
// it breaks the closed-form product away from xi = 0.
enum class Port3YSource { y_in3, x_in3_literal };

// Input order for every noise vector: X1, Y1, X2, Y2, X3, Y3.
inline constexpr std::size_t kInputs = 6;
using NoiseVector = std::array<cplx, kInputs>;

struct QuadratureResponse {
  NoiseVector noise{};
  cplx signal{};  // coefficient of the mechanical displacement

  // Symmetrized PSD: the X-Y cross correlators are antisymmetric and cancel,
  // leaving the plain sum of |coefficient|^2.
  double noise_psd() const {
    double s = 0.0;
    for (const auto& c : noise) s += std::norm(c);
    return s;
  }
};

struct FluctuationSolution {
  QuadratureResponse x_out;        // X_out1
  QuadratureResponse y_out;        // Y_out1
  QuadratureResponse x_intra;      // X
  QuadratureResponse y_intra;      // Y
};

inline void validate(const PortRates& rates) {
  if (!(rates.gamma1 >= 0.0) || !(rates.gamma2 >= 0.0) || !(rates.gamma3 >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "port decay rates must be >= 0");
  }
}

inline FluctuationSolution solve_fluctuations(const PortRates& rates, const DriveConfig& drive,
                                              const Couplings& g, double x_signal = 1.0,
                                              Port3YSource port3 = Port3YSource::y_in3) {
  validate(rates);
  if (!(drive.a0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "a0 must be >= 0");
  const cplx a{0.5 * rates.total(), -drive.omega};
  const double d = drive.delta;
  const cplx det = a * a + d * d;
  if (!(std::abs(det) >= 1e-300)) {
    throw Error(ErrorCode::SingularSystem, "quadrature system is singular");
  }

  const double s1 = std::sqrt(rates.gamma1), s2 = std::sqrt(rates.gamma2), s3 = std::sqrt(rates.gamma3);
  // Right-hand sides as vectors over the inputs.
  NoiseVector rhs_x{0.5 * s1, 0.0, 0.5 * s2, 0.0, 0.5 * s3, 0.0};
  NoiseVector rhs_y{0.0, 0.5 * s1, 0.0, 0.5 * s2, 0.0, 0.5 * s3};
  if (port3 == Port3YSource::x_in3_literal) {
    rhs_y[4] = 0.5 * s3;
    rhs_y[5] = 0.0;
  }
  const cplx sig_x = drive.a0 * g.g_gamma0 * x_signal;
  const cplx sig_y = drive.a0 * g.g_omega0 * x_signal;

  // [a  d] [X]   [rx]
  // [-d a] [Y] = [ry]
  FluctuationSolution sol;
  for (std::size_t j = 0; j < kInputs; ++j) {
    sol.x_intra.noise[j] = (a * rhs_x[j] - d * rhs_y[j]) / det;
    sol.y_intra.noise[j] = (a * rhs_y[j] + d * rhs_x[j]) / det;
  }
  sol.x_intra.signal = (a * sig_x - d * sig_y) / det;
  sol.y_intra.signal = (a * sig_y + d * sig_x) / det;

  sol.x_out = sol.x_intra;
  sol.y_out = sol.y_intra;
  for (auto* q : {&sol.x_out, &sol.y_out}) {
    for (auto& c : q->noise) c *= 2.0 * s1;
    q->signal *= 2.0 * s1;
  }
  sol.x_out.noise[0] -= 1.0;
  sol.y_out.noise[1] -= 1.0;
  return sol;
}

// Backaction force noise (signal part excluded: it is the deterministic
// optical spring, not noise).
inline NoiseVector force_noise(const FluctuationSolution& sol, const PortRates& rates,
                               const DriveConfig& drive, const Couplings& g, const Units& units = {}) {
  NoiseVector f{};
  for (std::size_t j = 0; j < kInputs; ++j) {
    f[j] = 2.0 * drive.a0 * units.hbar * g.g_omega0 * sol.x_intra.noise[j];
  }
  if (rates.gamma2 > 0.0) f[3] -= drive.a0 * units.hbar * g.g_gamma0 / std::sqrt(rates.gamma2);
  return f;
}

// Homodyne detection of Z = X_out cos(theta) + Y_out sin(theta).
inline QuadratureResponse homodyne(const FluctuationSolution& sol, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  QuadratureResponse z;
  for (std::size_t j = 0; j < kInputs; ++j) z.noise[j] = c * sol.x_out.noise[j] + s * sol.y_out.noise[j];
  z.signal = c * sol.x_out.signal + s * sol.y_out.signal;
  return z;
}

// Displacement-equivalent imprecision of the homodyne angle theta.
inline double imprecision_at_angle(const FluctuationSolution& sol, double theta) {
  const auto z = homodyne(sol, theta);
  return z.noise_psd() / std::norm(z.signal);
}

struct NoiseReport {
  double theta_opt = 0.0;         // rad
  double s_xx_imp = 0.0;          // m^2 s
  double s_ff = 0.0;              // N^2 s
  double product = 0.0;           // (J s)^2
  double product_over_sql = 0.0;  // product / (hbar^2/4)
  double xi = 0.0;                // g_omega0 / g_gamma0
  double A = 0.0;                 // 1 + gamma3 / (2 gamma1)
  std::optional<double> cooperativity;
};

// Mechanical side of the cooperativity, C = (g x_zpf a0)^2 / (gamma gamma_m).
struct MechanicalParams {
  double x_zpf = 1e-15;  // m
  double gamma_m = 0.1;  // 1/s
};

// Optimal-angle imprecision, force noise and their product from the general
// solver. The optimum maximizes v^T P v / v^T N v over v = (cos, sin) with N
// the output noise covariance and P = Re(s s^dagger) the signal form; it is
// the top eigenvector of N^{-1} P.
inline NoiseReport homodyne_spectra(const PortRates& rates, const DriveConfig& drive,
                                    const Couplings& g, const Units& units = {},
                                    std::optional<MechanicalParams> mech = std::nullopt,
                                    Port3YSource port3 = Port3YSource::y_in3) {
  if (g.g_omega0 == 0.0 && g.g_gamma0 == 0.0) {
    throw Error(ErrorCode::ZeroCoupling, "both optomechanical constants are zero");
  }
  const auto sol = solve_fluctuations(rates, drive, g, 1.0, port3);

  double nxx = 0.0, nyy = 0.0, nxy = 0.0;
  for (std::size_t j = 0; j < kInputs; ++j) {
    nxx += std::norm(sol.x_out.noise[j]);
    nyy += std::norm(sol.y_out.noise[j]);
    nxy += std::real(sol.x_out.noise[j] * std::conj(sol.y_out.noise[j]));
  }
  const cplx sx = sol.x_out.signal, sy = sol.y_out.signal;
  const double pxx = std::norm(sx), pyy = std::norm(sy), pxy = std::real(sx * std::conj(sy));

  // M = N^{-1} P (2x2), largest eigenvalue and its eigenvector.
  const double ndet = nxx * nyy - nxy * nxy;
  const double m11 = (nyy * pxx - nxy * pxy) / ndet;
  const double m12 = (nyy * pxy - nxy * pyy) / ndet;
  const double m21 = (nxx * pxy - nxy * pxx) / ndet;
  const double m22 = (nxx * pyy - nxy * pxy) / ndet;
  const double tr = m11 + m22;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (m11 - m22) * (m11 - m22) + m12 * m21));
  const double lam = 0.5 * tr + disc;
  // Either row of (M - lam I) v = 0 gives v; take the better conditioned one.
  double vx = m12, vy = lam - m11;
  const double ux = lam - m22, uy = m21;
  if (std::hypot(ux, uy) > std::hypot(vx, vy)) {
    vx = ux;
    vy = uy;
  }
  if (vx == 0.0 && vy == 0.0) vx = 1.0;  // M proportional to I: every angle is optimal
  double theta = std::atan2(vy, vx);
  // Report the angle in (-pi/2, pi/2]; theta and theta + pi are the same quadrature.
  if (theta > 0.5 * kPi) theta -= kPi;
  if (theta <= -0.5 * kPi) theta += kPi;

  NoiseReport rep;
  rep.theta_opt = theta;
  rep.s_xx_imp = imprecision_at_angle(sol, theta);
  double sff = 0.0;
  for (const auto& c : force_noise(sol, rates, drive, g, units)) sff += std::norm(c);
  rep.s_ff = sff;
  rep.product = rep.s_xx_imp * rep.s_ff;
  rep.product_over_sql = rep.product / (0.25 * units.hbar * units.hbar);
  rep.xi = g.g_gamma0 != 0.0 ? g.g_omega0 / g.g_gamma0 : std::copysign(INFINITY, g.g_omega0);
  rep.A = 1.0 + rates.gamma3 / (2.0 * rates.gamma1);
  if (mech) {
    const double gx = g.g_gamma0 * mech->x_zpf * drive.a0;
    rep.cooperativity = gx * gx / (rates.gamma1 * mech->gamma_m);
  }
  return rep;
}

// Closed forms for Delta = 0, gamma1 = gamma2 = gamma, omega -> 0.
inline double closed_form_imprecision(double gamma, double gamma3, double a0, const Couplings& g) {
  const double h = gamma + 0.5 * gamma3;
  return h * h / (4.0 * a0 * a0 * gamma * (g.g_gamma0 * g.g_gamma0 + g.g_omega0 * g.g_omega0));
}

inline double closed_form_force(double gamma, double gamma3, double a0, const Couplings& g,
                                const Units& units = {}) {
  const double h = gamma + 0.5 * gamma3;
  const double A = 1.0 + gamma3 / (2.0 * gamma);
  return units.hbar * units.hbar * a0 * a0 * gamma / (h * h) *
         (A * A * g.g_gamma0 * g.g_gamma0 + 2.0 * A * g.g_omega0 * g.g_omega0);
}

// S_xx^imp S_FF / (hbar^2/4) = (A^2 + 2 A xi^2) / (1 + xi^2)
inline double closed_form_product_over_sql(double xi, double A) {
  if (std::isinf(xi)) return 2.0 * A;
  return (A * A + 2.0 * A * xi * xi) / (1.0 + xi * xi);
}

inline double closed_form_signal_gain(double gamma, double gamma3, double a0, double g_const) {
  return 2.0 * a0 * g_const * std::sqrt(gamma) / (gamma + 0.5 * gamma3);
}

// ---------------------------------------------------------------------------
// Cooperativity of the three systems.

// Shared factor M = c (k a0 x_zpf)^2 / (l gamma_m).
struct CavityDrive {
  double k = kTwoPi / 0.85e-6;  // 1/m
  double l = 1e-4;              // m
  double a0 = 1.0;
  MechanicalParams mech;

  double M() const {
    const double q = k * a0 * mech.x_zpf;
    return kSpeedOfLight * q * q / (l * mech.gamma_m);
  }
};

struct MosCooperativity {
  double t = 0.014;
  double t_m = 0.1;
};

// Bad-cavity forms carry the (2 omega / gamma)^2 sideband factor.
struct MsiCooperativity {
  double r_ms = 0.9;
  double T_ms = 0.01;   // effective-mirror power transmission, gamma_ms = c T_ms / 2l
  double omega = 0.0;   // sideband frequency, rad/s
};

struct MateCooperativity {
  double t = 0.014;
  double t_m = 0.1;
  double omega = 0.0;   // gamma_mate = c t^2 / 2l
};

using CooperativityParams = std::variant<MosCooperativity, MsiCooperativity, MateCooperativity>;

// C = M 4 t^2 / t_m^6, no sideband-resolution factor.
inline double cooperativity(const CavityDrive& drive, const MosCooperativity& p) {
  return drive.M() * 4.0 * p.t * p.t / std::pow(p.t_m, 6);
}

// C = 2 M r_ms^2 (2 omega / gamma_ms)^2.
inline double cooperativity(const CavityDrive& drive, const MsiCooperativity& p) {
  const double gamma_ms = kSpeedOfLight * p.T_ms / (2.0 * drive.l);
  const double side = 2.0 * p.omega / gamma_ms;
  return 2.0 * drive.M() * p.r_ms * p.r_ms * side * side;
}

// C = M (t^2 / t_m^2) (2 omega / gamma_mate)^2.
inline double cooperativity(const CavityDrive& drive, const MateCooperativity& p) {
  const double gamma_mate = kSpeedOfLight * p.t * p.t / (2.0 * drive.l);
  const double side = 2.0 * p.omega / gamma_mate;
  return drive.M() * p.t * p.t / (p.t_m * p.t_m) * side * side;
}

inline double cooperativity(const CavityDrive& drive, const CooperativityParams& p) {
  return std::visit([&](const auto& sys) { return cooperativity(drive, sys); }, p);
}

}  // namespace optomech::noise
