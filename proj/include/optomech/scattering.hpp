#pragma once

// Scattering algebra for a lossless mirror, a lossless membrane, and the
// mirror + membrane tandem ("synthetic mirror").
//
// Port convention for every 2x2 matrix here:
//
//     (out right-moving beyond the element, out left-moving)  =  S  (in right-moving, in left-moving)
//
// For the tandem the cavity sits on the mirror side (left) and the membrane
// faces the outside world (right), so with U2 the wave arriving from the
// cavity, G3 the wave arriving from outside, U3 the transmitted wave and G2
// the wave returned into the cavity:
//
//     (U3, G2) = M (U2, G3),   m11 = U3/U2, m21 = G2/U2 (cavity-side reflection),
//                              m12 = U3/G3 (outside reflection), m22 = G2/G3.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

using cplx = std::complex<double>;

struct Tolerances {
  double constraint = 1e-12;  // t^2 + r^2 = 1 and the membrane phase relation
  double unitarity = 1e-10;   // per entry of S^dagger S - I
};

enum class ElementKind { mirror, membrane };

struct ElementSpec {
  ElementKind kind = ElementKind::mirror;
  double t = 0.0;  // amplitude transmission magnitude
  double r = 1.0;  // amplitude reflection magnitude
  double phi_t = 0.0;
  double phi_r = 0.0;

  static ElementSpec mirror(double t) {
    return {ElementKind::mirror, t, std::sqrt(std::max(0.0, 1.0 - t * t)), 0.0, 0.0};
  }

  // phi_t is tied to phi_r by exp(2i(phi_r - phi_t)) = -1; this picks
  // phi_t = phi_r - pi/2.
  static ElementSpec membrane(double t_m, double phi_r = 0.0) {
    return {ElementKind::membrane, t_m, std::sqrt(std::max(0.0, 1.0 - t_m * t_m)),
            phi_r - 0.5 * kPi, phi_r};
  }
};

struct ScatteringMatrix {
  cplx m11{}, m12{}, m21{}, m22{};

  // max over entries of |S^dagger S - I|
  double unitarity_error() const {
    const cplx a11 = std::conj(m11) * m11 + std::conj(m21) * m21;
    const cplx a12 = std::conj(m11) * m12 + std::conj(m21) * m22;
    const cplx a21 = std::conj(m12) * m11 + std::conj(m22) * m21;
    const cplx a22 = std::conj(m12) * m12 + std::conj(m22) * m22;
    return std::max({std::abs(a11 - 1.0), std::abs(a12), std::abs(a21), std::abs(a22 - 1.0)});
  }

  bool is_unitary(double tol) const { return unitarity_error() <= tol; }
};

struct SyntheticMirrorResponse {
  double psi = 0.0;
  double T = 0.0;  // power transmission
  double mu = 0.0;  // arg(-m21), continuous in psi
  double dT_dpsi = 0.0;
  double dmu_dpsi = 0.0;
};

inline void validate(const ElementSpec& spec, const Tolerances& tol = {}) {
  const bool in_range = spec.t >= 0.0 && spec.t <= 1.0 && spec.r >= 0.0 && spec.r <= 1.0;
  if (!in_range || !(std::abs(spec.t * spec.t + spec.r * spec.r - 1.0) <= tol.constraint)) {
    throw Error(ErrorCode::InvalidElement, "element is not lossless: t^2 + r^2 != 1");
  }
  if (spec.kind == ElementKind::membrane) {
    const cplx phase = std::polar(1.0, 2.0 * (spec.phi_r - spec.phi_t));
    if (!(std::abs(phase + 1.0) <= tol.constraint)) {
      throw Error(ErrorCode::InvalidElement, "membrane phases violate exp(2i(phi_r - phi_t)) = -1");
    }
  }
}

inline ScatteringMatrix element_scattering(const ElementSpec& spec, const Tolerances& tol = {}) {
  validate(spec, tol);
  if (spec.kind == ElementKind::mirror) {
    const cplx it{0.0, spec.t};
    return {it, -spec.r, -spec.r, it};
  }
  const cplx tr = std::polar(spec.t, spec.phi_t);
  const cplx rf = std::polar(spec.r, spec.phi_r);
  return {tr, rf, rf, tr};
}

namespace detail {

inline void require_pair(const ElementSpec& mirror, const ElementSpec& membrane, const Tolerances& tol) {
  if (mirror.kind != ElementKind::mirror || membrane.kind != ElementKind::membrane) {
    throw Error(ErrorCode::InvalidElement, "tandem needs a mirror and a membrane");
  }
  validate(mirror, tol);
  validate(membrane, tol);
}

inline void require_geometry(double x, double k) {
  if (!(x >= 0.0) || !(k > 0.0) || !std::isfinite(x) || !std::isfinite(k)) {
    throw Error(ErrorCode::InvalidArgument, "tandem needs x >= 0 and k > 0");
  }
}

}  // namespace detail

inline double tandem_phase(double x, double k, double phi_r) { return 2.0 * k * x + phi_r; }

// Closed form of the tandem matrix:
//   M = 1/(1 + r r_m e^{i psi}) [[ i t t_m e^{i phi_t},  e^{2i phi_r}(r + r_m e^{-i psi}) ],
//                                [ -r - r_m e^{i psi},    i t t_m e^{i phi_t}            ]]
inline ScatteringMatrix compose_synthetic(const ElementSpec& mirror, const ElementSpec& membrane,
                                          double x, double k, const Tolerances& tol = {}) {
  detail::require_pair(mirror, membrane, tol);
  detail::require_geometry(x, k);
  const double psi = tandem_phase(x, k, membrane.phi_r);
  const double r = mirror.r;
  const double rm = membrane.r;
  const cplx e_psi = std::polar(1.0, psi);
  const cplx inv_den = 1.0 / (1.0 + r * rm * e_psi);
  const cplx diag = cplx{0.0, mirror.t * membrane.t} * std::polar(1.0, membrane.phi_t) * inv_den;
  const cplx outside = std::polar(1.0, 2.0 * membrane.phi_r) * (r + rm * std::conj(e_psi)) * inv_den;
  const cplx cavity = (-r - rm * e_psi) * inv_den;
  return {diag, outside, cavity, diag};
}

// Second route to the same matrix: solve the four field relations for the
// internal amplitudes (G1 right-moving, U1 left-moving between the elements,
// both referred to the mirror plane) for each unit input and read off the
// outputs.
//
//   G1 = i t U2 - r U1
//   G2 = -r U2 + i t U1
//   U3 = t_m e^{i phi_t} G1 + r_m e^{i phi_r - 2ikx} G3
//   U1 = r_m e^{i psi} G1 + t_m e^{i phi_t} G3
inline ScatteringMatrix compose_synthetic_by_elimination(const ElementSpec& mirror,
                                                         const ElementSpec& membrane, double x,
                                                         double k, const Tolerances& tol = {}) {
  detail::require_pair(mirror, membrane, tol);
  detail::require_geometry(x, k);
  const double psi = tandem_phase(x, k, membrane.phi_r);
  const cplx it{0.0, mirror.t};
  const double r = mirror.r;
  const cplx a = std::polar(membrane.r, psi);
  const cplx b = std::polar(membrane.t, membrane.phi_t);
  const cplx c = std::polar(membrane.r, membrane.phi_r - 2.0 * k * x);

  // [ 1   r ] [G1]   [ i t U2 ]
  // [ -a  1 ] [U1] = [ b G3   ]
  const cplx det = 1.0 + r * a;
  auto solve = [&](cplx u2, cplx g3) {
    const cplx rhs1 = it * u2;
    const cplx rhs2 = b * g3;
    const cplx g1 = (rhs1 - r * rhs2) / det;
    const cplx u1 = (rhs2 + a * rhs1) / det;
    const cplx u3 = b * g1 + c * g3;
    const cplx g2 = -r * u2 + it * u1;
    return std::array<cplx, 2>{u3, g2};
  };
  const auto col1 = solve(1.0, 0.0);
  const auto col2 = solve(0.0, 1.0);
  return {col1[0], col2[0], col1[1], col2[1]};
}

// T(psi), mu(psi) and their psi-derivatives in closed form:
//   T          = t^2 t_m^2 / (1 + r^2 r_m^2 + 2 r r_m cos psi)
//   tan mu     = r_m t^2 sin psi / (r_m (1 + r^2) cos psi + r (1 + r_m^2))
//   dT/dpsi    = 2 r r_m t^2 t_m^2 sin psi / (1 + r^2 r_m^2 + 2 r r_m cos psi)^2
//   dmu/dpsi   = cos^2(mu) d(tan mu)/dpsi
//              = r_m t^2 (r_m (1 + r^2) + r (1 + r_m^2) cos psi) / (num^2 + den^2)
inline SyntheticMirrorResponse synthetic_response(double psi, const ElementSpec& mirror,
                                                  const ElementSpec& membrane,
                                                  const Tolerances& tol = {}) {
  detail::require_pair(mirror, membrane, tol);
  const double t = mirror.t, r = mirror.r;
  const double tm = membrane.t, rm = membrane.r;
  const double c = std::cos(psi), s = std::sin(psi);

  const double den_T = 1.0 + r * r * rm * rm + 2.0 * r * rm * c;
  if (!(den_T >= 1e-300)) {
    throw Error(ErrorCode::DegenerateDenominator, "1 + r^2 r_m^2 + 2 r r_m cos psi vanishes");
  }
  const double num_mu = rm * t * t * s;
  const double den_mu = rm * (1.0 + r * r) * c + r * (1.0 + rm * rm);
  const double mod2 = num_mu * num_mu + den_mu * den_mu;
  if (!(mod2 >= 1e-300)) {
    throw Error(ErrorCode::DegenerateDenominator, "cavity-side reflection vanishes (r = r_m, psi = pi)");
  }

  SyntheticMirrorResponse out;
  out.psi = psi;
  out.T = t * t * tm * tm / den_T;
  out.dT_dpsi = 2.0 * r * rm * t * t * tm * tm * s / (den_T * den_T);
  out.dmu_dpsi = rm * t * t * (rm * (1.0 + r * r) + r * (1.0 + rm * rm) * c) / mod2;

  if (rm <= r) {
    // den_mu >= (r - r_m)(1 - r r_m) >= 0, so the principal value is already continuous.
    out.mu = std::atan2(num_mu, den_mu);
  } else {
    // r + r_m e^{i psi} winds once around the origin per period:
    // mu = psi + arg(r_m + r e^{-i psi}) - arg(1 + r r_m e^{i psi}).
    out.mu = psi + std::atan2(-r * s, rm + r * c) - std::atan2(r * rm * s, 1.0 + r * rm * c);
  }
  return out;
}

}  // namespace optomech
