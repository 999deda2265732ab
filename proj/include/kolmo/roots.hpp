#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "kolmo/types.hpp"

namespace kolmo {

struct RootOptions {
  double bisection_width = 1e-8;  // relative to 1 + |bracket|
  double f_tol = 1e-14;
  int max_newton = 50;
  int max_bisection = 400;
};

/// Root of f in [lo, hi] given a sign change: bisection down to a narrow
/// bracket, then Newton steps using df that are rejected (in favour of
/// bisection) whenever they leave the current bracket.
///
/// An endpoint that is an exact zero is returned as is.
template <typename F, typename DF>
double bracketed_root(F&& f, DF&& df, double lo, double hi, const RootOptions& opt = {}) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0))
    throw NoRoot("no sign change on [" + format_double(lo) + ", " + format_double(hi) +
                 "]: f = " + format_double(flo) + ", " + format_double(fhi));

  const double width_tol = opt.bisection_width * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  for (int i = 0; i < opt.max_bisection && hi - lo > width_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }

  double x = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double fx = x == lo ? flo : fhi;
  for (int i = 0; i < opt.max_newton; ++i) {
    if (std::abs(fx) <= opt.f_tol) break;
    const double d = df(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : NAN;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double fn = f(next);
    if (fn == 0.0) return next;
    if ((fn > 0) == (flo > 0)) {
      lo = next;
      flo = fn;
    } else {
      hi = next;
      fhi = fn;
    }
    const bool stalled = std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() *
                                                   std::max(1.0, std::abs(x));
    if (std::abs(fn) < std::abs(fx) || std::abs(fn) <= opt.f_tol) {
      x = next;
      fx = fn;
    }
    if (stalled || hi - lo <= 2 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
      break;
  }
  return x;
}

/// Bracketed root using a central difference for the Newton polish.
template <typename F>
double bracketed_root(F&& f, double lo, double hi, const RootOptions& opt = {}) {
  auto df = [&f, lo, hi](double x) {
    const double s = 1e-7 * (1.0 + std::abs(x));
    const double a = std::max(lo, x - s), b = std::min(hi, x + s);
    return (f(b) - f(a)) / (b - a);
  };
  return bracketed_root(f, df, lo, hi, opt);
}

}  // namespace kolmo
