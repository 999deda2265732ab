#pragma once

#include <cmath>
#include <string_view>

#include "kolmo/linearize.hpp"
#include "kolmo/system.hpp"

namespace kolmo {

enum class EquilibriumKind { origin_saddle, interior_attractor, other };

inline std::string_view to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::origin_saddle: return "origin-saddle";
    case EquilibriumKind::interior_attractor: return "interior-attractor";
    case EquilibriumKind::other: return "other";
  }
  return "other";
}

struct Equilibrium {
  Point location;
  Matrix2 jacobian;
  EquilibriumKind kind = EquilibriumKind::other;
  StabilityReport stability;
  double residual = 0.0;  // |(gG, hH)| at location
};

struct NewtonOptions {
  int max_iterations = 100;
  int max_halvings = 30;
  double residual_tol = 1e-12;
};

namespace detail {

inline double gh_residual(const SystemDefinition& sys, Point p) {
  return std::hypot(sys.G(p.x, p.y), sys.H(p.x, p.y));
}

inline Equilibrium make_equilibrium(const SystemDefinition& sys, Point p) {
  Equilibrium e;
  e.location = p;
  e.jacobian = jacobian_at(sys, p);
  e.stability = classify(e.jacobian);
  e.residual = norm(sys.velocity(p));
  const bool at_origin = p.x == 0.0 && p.y == 0.0;
  if (at_origin && e.stability.classification == Stability::saddle)
    e.kind = EquilibriumKind::origin_saddle;
  else if (p.x > 0.0 && p.y > 0.0 && is_stable(e.stability.classification))
    e.kind = EquilibriumKind::interior_attractor;
  return e;
}

}  // namespace detail

/// Interior equilibrium by damped Newton iteration on (G, H) = 0.
///
/// Each step is halved (at most `max_halvings` times) until the residual
/// norm decreases; a step that leaves the domain is halved the same way.
/// Once the tolerance is met, Newton continues while the residual keeps
/// strictly decreasing, so a converged point is a fixed point of the map.
inline Equilibrium find_equilibrium(const SystemDefinition& sys, Point guess,
                                    const NewtonOptions& opt = {}) {
  sys.require_in_domain(guess);
  Point p = guess;
  double res = detail::gh_residual(sys, p);
  bool converged = res <= opt.residual_tol;

  for (int it = 0; it < opt.max_iterations; ++it) {
    const double G = sys.G(p.x, p.y), H = sys.H(p.x, p.y);
    const double a = sys.G_x(p.x, p.y), b = sys.G_y(p.x, p.y);
    const double c = sys.H_x(p.x, p.y), d = sys.H_y(p.x, p.y);
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) {
      if (converged) break;
      throw SingularJacobian("find_equilibrium: singular (G,H) Jacobian at " + format_point(p));
    }
    const Point step{-(d * G - b * H) / det, -(-c * G + a * H) / det};

    double lambda = 1.0;
    Point trial = p + step;
    double trial_res = sys.domain().contains(trial) ? detail::gh_residual(sys, trial) : INFINITY;
    int halvings = 0;
    while (!(trial_res < res) && halvings < opt.max_halvings) {
      lambda *= 0.5;
      trial = p + lambda * step;
      trial_res = sys.domain().contains(trial) ? detail::gh_residual(sys, trial) : INFINITY;
      ++halvings;
    }
    if (!(trial_res < res)) break;  // no further decrease available
    p = trial;
    res = trial_res;
    if (res <= opt.residual_tol) converged = true;
  }
  if (!converged)
    throw NoConvergence("find_equilibrium: residual " + format_double(res) + " after " +
                        std::to_string(opt.max_iterations) + " iterations from " +
                        format_point(guess));
  return detail::make_equilibrium(sys, p);
}

/// The origin as an equilibrium. Requires the vector field to vanish there,
/// which for these systems means h(0) = 0 and g(0) G(0,0) = 0.
inline Equilibrium origin_equilibrium(const SystemDefinition& sys) {
  const Point o{0.0, 0.0};
  const double r = norm(eval_rhs(sys, o));
  if (r > 1e-10)
    throw NoConvergence("origin is not stationary, |f(0,0)| = " + format_double(r));
  return detail::make_equilibrium(sys, o);
}

}  // namespace kolmo
