#pragma once

// Isoclines, the ray/isocline intersection v, hypothesis checks and the
// bound X on the first coordinate of the heteroclinic orbit, defined by the
// level equation L(X, z) = L(w, cv), i.e. Hc(X) = Gc(cv).

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/lyapunov.hpp"
#include "kolmo/roots.hpp"
#include "kolmo/system.hpp"

namespace kolmo {

struct Witness {
  Point at;
  double value = 0.0;
};

struct HypothesisCheck {
  std::string name;
  std::string group;       // monotonicity, stationary, unstable_tangent, ...
  bool evaluated = true;
  bool passed = true;
  bool informational = false;  // reported, not part of the verdict
  std::optional<Witness> witness;
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) {
      return c.informational || (c.evaluated && c.passed);
    });
  }
  const HypothesisCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.informational && !(c.evaluated && c.passed)) return &c;
    return nullptr;
  }
  const HypothesisCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct BoundResult {
  double c = 0.0;
  double v = 0.0;
  double cv = 0.0;
  double X = 0.0;
  double level_value = 0.0;  // Gc(cv)
  double delta = 0.0;        // right end of the monotone branch of Hc
  std::optional<double> closed_form_X;
};

struct HypothesisViolated : Error {
  HypothesisViolated(const std::string& what, HypothesisReport report)
      : Error(what), report(std::move(report)) {}
  HypothesisReport report;
};

struct NoRootInInterval : Error {
  using Error::Error;
};

namespace detail {
// Right end of a search on [0, w], nudged past w so that an equilibrium
// known only to round-off still brackets.
inline double past(const SystemDefinition& sys, double w) {
  return std::min(sys.domain().x_hi, w + 1e-9 * (1.0 + std::abs(w)));
}
}  // namespace detail

/// x with G(x, y) = 0 in [0, w].
inline double isocline_x_plus(const SystemDefinition& sys, double y, double w) {
  return bracketed_root([&](double x) { return sys.G(x, y); },
                        [&](double x) { return sys.G_x(x, y); }, 0.0, detail::past(sys, w),
                        {.f_tol = 1e-15});
}

/// x with H(x, y) = 0 in [lo, hi].
inline double isocline_x_minus(const SystemDefinition& sys, double y, double lo, double hi) {
  return bracketed_root([&](double x) { return sys.H(x, y); },
                        [&](double x) { return sys.H_x(x, y); }, lo, hi, {.f_tol = 1e-15});
}

/// Default bracket for x_minus: [v, w] widened by half its width plus 1e-3
/// of the domain width, clipped to the domain.
inline std::pair<double, double> x_minus_bracket(const SystemDefinition& sys, double v, double w) {
  const Rect& d = sys.domain();
  const double margin = 0.5 * std::abs(w - v) + 1e-3 * d.width();
  return {std::max(d.x_lo, std::min(v, w) - margin), std::min(d.x_hi, std::max(v, w) + margin)};
}

/// v > 0 with H(v, c v) = 0, searched on (0, w].
inline double solve_v(const SystemDefinition& sys, double c, double w) {
  if (!(c > 0.0)) throw InvalidParameters("solve_v: c must be positive, got " + format_double(c));
  auto f = [&](double x) { return sys.H(x, c * x); };
  auto df = [&](double x) { return sys.H_x(x, c * x) + c * sys.H_y(x, c * x); };
  return bracketed_root(f, df, 0.0, detail::past(sys, w), {.f_tol = 1e-15});
}

/// Right end of the interval (w, delta) on which Hc is strictly increasing:
/// the first sign change of Hc' scanned at 1e-4 of the table width and
/// refined by bisection, or the table edge.
inline double detect_delta(const LyapunovFunction& L) {
  const double w = L.anchors().x, hi = L.H_table().hi();
  const double step = (hi - L.H_table().lo()) / 1e4;
  double prev = w;
  for (double x = w + step; x < hi; x += step) {
    if (!(L.H_prime(x) > 0.0))
      return bracketed_root([&](double t) { return L.H_prime(t); }, prev, x);
    prev = x;
  }
  return hi;
}

struct HypothesisGrid {
  int nx = 200;
  int ny = 200;
  int ray_samples = 500;
  double strict_tol = 1e-12;
};

namespace detail {

inline void sweep_domain(const Rect& d, const HypothesisGrid& grid,
                         const std::function<void(Point)>& fn) {
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      fn({d.x_lo + d.width() * i / (grid.nx - 1), d.y_lo + d.height() * j / (grid.ny - 1)});
}

// Tracks the worst sample for a predicate `value < 0 is a violation`-style test.
struct SignTracker {
  bool passed = true;
  std::optional<Witness> worst;
  double worst_excess = 0.0;

  void consider(Point p, double value, double excess) {
    if (excess > 0.0) {
      passed = false;
      if (!worst || excess > worst_excess) {
        worst = Witness{p, value};
        worst_excess = excess;
      }
    }
  }
  HypothesisCheck finish(std::string name, std::string group, bool informational = false,
                         std::string note = {}) const {
    return {std::move(name), std::move(group), true, passed, informational, worst, std::move(note)};
  }
};

}  // namespace detail

/// Samples every hypothesis behind the bound.
///
/// Monotonicity is reported under two readings. The verdict uses
/// G_x < 0, H_x < 0, G_y > 0, H_y <= 0, the sign pattern of the worked
/// examples and of the linearization at (w, z); the literal G_y < 0 and
/// H_y >= 0 are listed as informational. When c or v is unavailable the
/// checks depending on them are marked not evaluated.
inline HypothesisReport check_hypotheses(const SystemDefinition& sys, const LyapunovFunction& L,
                                         std::optional<double> c, std::optional<double> v,
                                         const HypothesisGrid& grid = {}) {
  HypothesisReport rep;
  const double tol = grid.strict_tol;
  const Rect& d = sys.domain();
  const Point wz = L.anchors();
  const double w = wz.x, z = wz.y;

  // Monotonicity.
  detail::SignTracker gx_neg, hx_neg, gy_pos, gy_neg, hy_nonpos, hy_nonneg;
  detail::sweep_domain(d, grid, [&](Point p) {
    const double gx = sys.G_x(p.x, p.y), hx = sys.H_x(p.x, p.y);
    const double gy = sys.G_y(p.x, p.y), hy = sys.H_y(p.x, p.y);
    gx_neg.consider(p, gx, gx + tol);
    hx_neg.consider(p, hx, hx + tol);
    gy_pos.consider(p, gy, tol - gy);
    gy_neg.consider(p, gy, gy + tol);
    hy_nonpos.consider(p, hy, hy - tol);
    hy_nonneg.consider(p, hy, -hy - tol);
  });
  rep.checks.push_back(gx_neg.finish("G_x<0", "monotonicity"));
  rep.checks.push_back(hx_neg.finish("H_x<0", "monotonicity"));
  rep.checks.push_back(gy_pos.finish("G_y>0", "monotonicity", false,
                                     "sign used by the worked examples and the linearization"));
  rep.checks.push_back(hy_nonpos.finish("H_y<=0", "monotonicity", false,
                                        "sign used by the worked examples and the linearization"));
  rep.checks.push_back(gy_neg.finish("G_y<0 (literal)", "monotonicity", true,
                                     "literal wording of the monotonicity hypothesis"));
  rep.checks.push_back(hy_nonneg.finish("H_y>=0 (literal)", "monotonicity", true,
                                        "literal wording of the monotonicity hypothesis"));

  // Stationary points.
  auto zero_check = [&](std::string name, Point p, double value) {
    detail::SignTracker t;
    t.consider(p, value, std::abs(value) - tol);
    rep.checks.push_back(t.finish(std::move(name), "stationary"));
  };
  zero_check("h(0)=0", {0.0, 0.0}, sys.h(0.0));
  zero_check("H(w,z)=0", wz, sys.H(w, z));
  zero_check("G(0,0)=0", {0.0, 0.0}, sys.G(0.0, 0.0));
  zero_check("G(w,z)=0", wz, sys.G(w, z));
  {
    detail::SignTracker gpos, hpos;
    for (int i = 1; i < grid.nx; ++i) {
      const double x = d.x_lo + d.width() * i / (grid.nx - 1);
      gpos.consider({x, 0.0}, sys.g(x), -sys.g(x) + tol);
    }
    for (int j = 1; j < grid.ny; ++j) {
      const double y = d.y_lo + d.height() * j / (grid.ny - 1);
      hpos.consider({0.0, y}, sys.h(y), -sys.h(y) + tol);
    }
    rep.checks.push_back(gpos.finish("g>0 off the origin", "stationary"));
    rep.checks.push_back(hpos.finish("h>0 off the origin", "stationary"));
  }

  auto not_evaluated = [&](std::string name, std::string group, std::string why) {
    HypothesisCheck ch{std::move(name), std::move(group), false, false, false, std::nullopt,
                       std::move(why)};
    rep.checks.push_back(std::move(ch));
  };

  // Unstable tangent: h H <= c g G on the ray y = c x, 0 < x <= v.
  if (c && v) {
    detail::SignTracker t;
    for (int k = 1; k <= grid.ray_samples; ++k) {
      const double x = *v * k / grid.ray_samples, y = *c * x;
      const double lhs = sys.h(y) * sys.H(x, y), rhs = *c * sys.g(x) * sys.G(x, y);
      t.consider({x, y}, lhs - rhs, lhs - rhs - tol * (1.0 + std::abs(rhs)));
    }
    rep.checks.push_back(t.finish("hH<=cgG on y=cx", "unstable_tangent"));
  } else {
    not_evaluated("hH<=cgG on y=cx", "unstable_tangent", "slope c or point v unavailable");
  }

  // Derivative sign: -H(x,z)/g(x) > 0 on (w, min(cv, delta)).
  if (c && v) {
    const double delta = detect_delta(L);
    const double right = std::min(*c * *v, delta);
    detail::SignTracker t;
    for (int k = 1; k < grid.ray_samples; ++k) {
      const double x = w + (right - w) * k / grid.ray_samples;
      const double val = -sys.H(x, z) / sys.g(x);
      t.consider({x, z}, val, tol - val);
    }
    rep.checks.push_back(t.finish("-H(x,z)/g(x)>0 on (w,cv)", "derivative_sign", false,
                                  "checked on (w, min(cv, delta)), delta = " +
                                      format_double(delta)));
  } else {
    not_evaluated("-H(x,z)/g(x)>0 on (w,cv)", "derivative_sign", "slope c or point v unavailable");
  }

  // Isoclines.
  {
    detail::SignTracker t;
    double prev = -INFINITY;
    try {
      for (int k = 0; k <= grid.ny; ++k) {
        const double y = z * k / grid.ny;
        const double x = isocline_x_plus(sys, y, w);
        const double range_excess = std::max(-x, x - w) - tol;
        const double mono_excess = k > 0 ? prev - x : -1.0;  // strictly increasing
        t.consider({x, y}, x, std::max(range_excess, mono_excess));
        prev = x;
      }
      rep.checks.push_back(t.finish("x_plus increasing [0,z]->[0,w]", "isoclines"));
    } catch (const NoRoot& e) {
      not_evaluated("x_plus increasing [0,z]->[0,w]", "isoclines", e.what());
    }
  }
  if (c && v) {
    detail::SignTracker t;
    const double cv = *c * *v;
    const auto [lo, hi] = x_minus_bracket(sys, *v, w);
    double prev = INFINITY;
    try {
      for (int k = 0; k <= grid.ny; ++k) {
        const double y = z + (cv - z) * k / grid.ny;
        const double x = isocline_x_minus(sys, y, lo, hi);
        const double range_excess = std::max(*v - x, x - w) - 1e-10;
        const double mono_excess = x - prev - tol;  // nonincreasing
        t.consider({x, y}, x, std::max(range_excess, mono_excess));
        prev = x;
      }
      rep.checks.push_back(t.finish("x_minus nonincreasing [z,cv]->[v,w]", "isoclines"));
    } catch (const NoRoot& e) {
      not_evaluated("x_minus nonincreasing [z,cv]->[v,w]", "isoclines", e.what());
    }
  } else {
    not_evaluated("x_minus nonincreasing [z,cv]->[v,w]", "isoclines",
                  "slope c or point v unavailable");
  }
  return rep;
}

/// X in (w, delta) with Hc(X) = Gc(cv), bracketed bisection then Newton
/// with the exact Hc'.
inline BoundResult heteroclinic_bound(const SystemDefinition& sys, const LyapunovFunction& L,
                                      double c, double v, const HypothesisReport& report,
                                      std::optional<double> closed_form_X = std::nullopt) {
  if (!report.all_pass()) {
    const HypothesisCheck* f = report.first_failure();
    throw HypothesisViolated("hypothesis '" + f->name + "' failed" +
                                 (f->witness ? " at " + format_point(f->witness->at) : "") +
                                 (f->evaluated ? "" : " (not evaluated: " + f->note + ")"),
                             report);
  }
  (void)sys;
  BoundResult r;
  r.c = c;
  r.v = v;
  r.cv = c * v;
  r.level_value = L.G_comp(r.cv);
  r.delta = detect_delta(L);
  r.closed_form_X = closed_form_X;
  const double w = L.anchors().x;
  auto f = [&](double x) { return L.H_comp(x) - r.level_value; };
  auto df = [&](double x) { return L.H_prime(x); };
  if (!(f(r.delta) >= 0.0))
    throw NoRootInInterval("level Gc(cv) = " + format_double(r.level_value) +
                           " exceeds Hc on (w, delta), Hc(delta) = " +
                           format_double(L.H_comp(r.delta)));
  r.X = bracketed_root(f, df, w, r.delta, {.f_tol = 1e-15});
  return r;
}

/// Largest excess of L over the level L(w, cv) on the x_minus arc y in [z, cv].
inline Witness level_excess_on_x_minus(const SystemDefinition& sys, const LyapunovFunction& L,
                                       double c, double v, int samples = 1000) {
  const Point wz = L.anchors();
  const double level = L({wz.x, c * v});
  const auto [lo, hi] = x_minus_bracket(sys, v, wz.x);
  Witness worst{{wz.x, wz.y}, -INFINITY};
  for (int k = 0; k <= samples; ++k) {
    const double y = wz.y + (c * v - wz.y) * k / samples;
    const double x = isocline_x_minus(sys, y, lo, hi);
    const double excess = L({x, y}) - level;
    if (excess > worst.value) worst = {{x, y}, excess};
  }
  return worst;
}

}  // namespace kolmo
