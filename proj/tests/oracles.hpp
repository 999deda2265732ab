#pragma once

// Independent reference computations used by the tests.

#include <cmath>
#include <random>
#include <vector>

#include "kolmo/catalog.hpp"
#include "kolmo/system.hpp"

namespace oracle {

using kolmo::Point;

/// Classical fourth-order Runge-Kutta at a fixed step, straight from the
/// vector field formula (no domain checks, no error control).
inline Point rk4(const kolmo::SystemDefinition& sys, Point p, double t_end, double step) {
  auto f = [&](Point q) {
    return Point{sys.g(q.x) * sys.G(q.x, q.y), sys.h(q.y) * sys.H(q.x, q.y)};
  };
  const long n = static_cast<long>(std::ceil(std::abs(t_end) / step));
  const double h = t_end / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const Point k1 = f(p);
    const Point k2 = f(p + (0.5 * h) * k1);
    const Point k3 = f(p + (0.5 * h) * k2);
    const Point k4 = f(p + h * k3);
    p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

/// Largest x along a fixed-step RK4 run, each local maximum refined by the
/// parabola through the three surrounding samples.
inline double rk4_max_x(const kolmo::SystemDefinition& sys, Point p, double t_end, double step) {
  auto f = [&](Point q) {
    return Point{sys.g(q.x) * sys.G(q.x, q.y), sys.h(q.y) * sys.H(q.x, q.y)};
  };
  const long n = static_cast<long>(std::ceil(t_end / step));
  const double h = t_end / static_cast<double>(n);
  double best = p.x, x2 = -INFINITY, x1 = p.x;
  for (long i = 0; i < n; ++i) {
    const Point k1 = f(p);
    const Point k2 = f(p + (0.5 * h) * k1);
    const Point k3 = f(p + (0.5 * h) * k2);
    const Point k4 = f(p + h * k3);
    p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    best = std::max(best, p.x);
    const double curv = x2 - 2 * x1 + p.x;
    if (x1 > x2 && x1 >= p.x && curv < 0) best = std::max(best, x1 - (p.x - x2) * (p.x - x2) / (8 * curv));
    x2 = x1;
    x1 = p.x;
  }
  return best;
}

/// Plain bisection on a sign change, to width tol.
template <typename F>
double bisect(F f, double lo, double hi, double tol = 1e-15) {
  double flo = f(lo);
  while (hi - lo > tol * (1.0 + std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (mid == lo && mid == hi) break;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<Point> random_points(const kolmo::Rect& r, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(r.x_lo, r.x_hi), uy(r.y_lo, r.y_hi);
  std::vector<Point> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x = ux(rng);
    out.push_back({x, uy(rng)});
  }
  return out;
}

inline const std::vector<std::string>& model_ids() {
  static const std::vector<std::string> ids{"classical", "relativistic", "pp1", "pp2", "pp3"};
  return ids;
}

inline const std::vector<std::string>& bound_model_ids() {
  static const std::vector<std::string> ids{"classical", "relativistic", "pp1", "pp2"};
  return ids;
}

}  // namespace oracle
