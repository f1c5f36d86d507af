#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "optomech/errors.hpp"

namespace optomech::numerics {

struct Bracket {
  double lo;
  double hi;
};

// Uniform scan of f over [a, b] with `intervals` sub-intervals; returns every
// sub-interval on whose ends f changes sign (an exact zero on a grid node is
// reported as a degenerate bracket [x, x]).
template <class F>
std::vector<Bracket> sign_change_brackets(F&& f, double a, double b, std::size_t intervals) {
  std::vector<Bracket> out;
  if (intervals == 0 || !(b > a)) return out;
  const double step = (b - a) / static_cast<double>(intervals);
  double x_prev = a;
  double f_prev = f(a);
  if (f_prev == 0.0) out.push_back({a, a});
  for (std::size_t i = 1; i <= intervals; ++i) {
    const double x = (i == intervals) ? b : a + step * static_cast<double>(i);
    const double fx = f(x);
    if (fx == 0.0) {
      out.push_back({x, x});
    } else if (f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev)) {
      out.push_back({x_prev, x});
    }
    x_prev = x;
    f_prev = fx;
  }
  return out;
}

// Bisection on a sign-changing bracket, run until the bracket cannot shrink in
// double precision or its width drops below x_tol.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol = 0.0) {
  if (lo == hi) return lo;
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw Error(ErrorCode::InvalidArgument, "bisect: bracket does not change sign");
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi || (hi - lo) <= x_tol) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

// Five-point central difference, O(h^4).
template <class F>
double central_difference5(F&& f, double x, double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

// Central difference with one Richardson step (h and 2h), O(h^4).
template <class F>
double richardson_derivative(F&& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + 2.0 * h) - f(x - 2.0 * h)) / (4.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

inline double relative_error(double value, double reference) {
  if (reference == 0.0) return std::abs(value);
  return std::abs(value - reference) / std::abs(reference);
}

}  // namespace optomech::numerics
