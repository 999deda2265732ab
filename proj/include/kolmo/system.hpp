#pragma once

// Generalized Kolmogorov system
//
//   x' = g(x) G(x, y)
//   y' = h(y) H(x, y)
//
// on a rectangle of the closed first quadrant.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>

#include "kolmo/types.hpp"

namespace kolmo {

using Scalar1 = std::function<double(double)>;
using Scalar2 = std::function<double(double, double)>;
using Parameters = std::map<std::string, double>;

/// The six scalar functions and their first derivatives. Any derivative left
/// empty is replaced by a central finite difference.
struct SystemFunctions {
  Scalar1 g, dg;
  Scalar1 h, dh;
  Scalar2 G, G_x, G_y;
  Scalar2 H, H_x, H_y;
};

namespace detail {

inline double fd_step(double at) { return 1e-6 * (1.0 + std::abs(at)); }

inline Scalar1 central_difference(Scalar1 f) {
  return [f = std::move(f)](double x) {
    const double s = fd_step(x);
    return (f(x + s) - f(x - s)) / (2.0 * s);
  };
}

inline Scalar2 central_difference_x(Scalar2 f) {
  return [f = std::move(f)](double x, double y) {
    const double s = fd_step(x);
    return (f(x + s, y) - f(x - s, y)) / (2.0 * s);
  };
}

inline Scalar2 central_difference_y(Scalar2 f) {
  return [f = std::move(f)](double x, double y) {
    const double s = fd_step(y);
    return (f(x, y + s) - f(x, y - s)) / (2.0 * s);
  };
}

}  // namespace detail

/// Immutable description of a planar Kolmogorov system. Safe to share
/// between threads once constructed.
class SystemDefinition {
 public:
  SystemDefinition(std::string name, SystemFunctions fns, Rect domain,
                   Parameters parameters = {})
      : name_(std::move(name)),
        fns_(std::move(fns)),
        domain_(domain),
        parameters_(std::move(parameters)) {
    if (!fns_.g || !fns_.h || !fns_.G || !fns_.H)
      throw InvalidParameters("system '" + name_ + "': g, h, G and H are required");
    if (!(domain_.x_hi > domain_.x_lo) || !(domain_.y_hi > domain_.y_lo))
      throw InvalidParameters("system '" + name_ + "': empty domain");
    if (!fns_.dg) {
      fns_.dg = detail::central_difference(fns_.g);
      analytic_ = false;
    }
    if (!fns_.dh) {
      fns_.dh = detail::central_difference(fns_.h);
      analytic_ = false;
    }
    if (!fns_.G_x) {
      fns_.G_x = detail::central_difference_x(fns_.G);
      analytic_ = false;
    }
    if (!fns_.G_y) {
      fns_.G_y = detail::central_difference_y(fns_.G);
      analytic_ = false;
    }
    if (!fns_.H_x) {
      fns_.H_x = detail::central_difference_x(fns_.H);
      analytic_ = false;
    }
    if (!fns_.H_y) {
      fns_.H_y = detail::central_difference_y(fns_.H);
      analytic_ = false;
    }
  }

  const std::string& name() const { return name_; }
  const Rect& domain() const { return domain_; }
  const Parameters& parameters() const { return parameters_; }
  /// False when at least one partial falls back to finite differences.
  bool analytic_partials() const { return analytic_; }

  double g(double x) const { return fns_.g(x); }
  double dg(double x) const { return fns_.dg(x); }
  double h(double y) const { return fns_.h(y); }
  double dh(double y) const { return fns_.dh(y); }
  double G(double x, double y) const { return fns_.G(x, y); }
  double G_x(double x, double y) const { return fns_.G_x(x, y); }
  double G_y(double x, double y) const { return fns_.G_y(x, y); }
  double H(double x, double y) const { return fns_.H(x, y); }
  double H_x(double x, double y) const { return fns_.H_x(x, y); }
  double H_y(double x, double y) const { return fns_.H_y(x, y); }

  /// Vector field without the domain check. Used for integrator stages,
  /// which may probe slightly outside the rectangle.
  Point velocity(Point p) const {
    return {g(p.x) * G(p.x, p.y), h(p.y) * H(p.x, p.y)};
  }

  void require_in_domain(Point p) const {
    if (domain_.contains(p)) return;
    std::string which;
    auto bound = [&](bool bad, const char* text, double limit) {
      if (!bad) return;
      if (!which.empty()) which += ", ";
      which += std::string(text) + " " + format_double(limit);
    };
    bound(!(p.x >= domain_.x_lo), "x below x_lo =", domain_.x_lo);
    bound(!(p.x <= domain_.x_hi), "x above x_hi =", domain_.x_hi);
    bound(!(p.y >= domain_.y_lo), "y below y_lo =", domain_.y_lo);
    bound(!(p.y <= domain_.y_hi), "y above y_hi =", domain_.y_hi);
    throw DomainViolation("point " + format_point(p) + " outside domain of system '" + name_ +
                          "': " + which);
  }

 private:
  std::string name_;
  SystemFunctions fns_;
  Rect domain_;
  Parameters parameters_;
  bool analytic_ = true;
};

/// (g(x) G(x,y), h(y) H(x,y)).
inline Point eval_rhs(const SystemDefinition& sys, Point p) {
  sys.require_in_domain(p);
  return sys.velocity(p);
}

/// Full Jacobian [[g'G + gG_x, gG_y], [hH_x, h'H + hH_y]] from the supplied partials.
inline Matrix2 jacobian_at(const SystemDefinition& sys, Point p) {
  sys.require_in_domain(p);
  const double g = sys.g(p.x), h = sys.h(p.y);
  return {sys.dg(p.x) * sys.G(p.x, p.y) + g * sys.G_x(p.x, p.y), g * sys.G_y(p.x, p.y),
          h * sys.H_x(p.x, p.y), sys.dh(p.y) * sys.H(p.x, p.y) + h * sys.H_y(p.x, p.y)};
}

/// Jacobian of the vector field by central differences of eval_rhs with
/// step 1e-6 (1 + |coordinate|). Ignores the domain so it can be used at edges.
inline Matrix2 jacobian_fd(const SystemDefinition& sys, Point p) {
  const double sx = detail::fd_step(p.x), sy = detail::fd_step(p.y);
  const Point fxp = sys.velocity({p.x + sx, p.y}), fxm = sys.velocity({p.x - sx, p.y});
  const Point fyp = sys.velocity({p.x, p.y + sy}), fym = sys.velocity({p.x, p.y - sy});
  return {(fxp.x - fxm.x) / (2 * sx), (fyp.x - fym.x) / (2 * sy),
          (fxp.y - fxm.y) / (2 * sx), (fyp.y - fym.y) / (2 * sy)};
}

/// Result of comparing supplied partials against central differences.
struct PartialsCheck {
  bool ok = true;
  std::string worst_name;
  Point worst_point;
  double worst_relative_error = 0.0;
};

/// Compares every supplied derivative against finite differences on an
/// n x n grid over `region`. Relative error is |a - fd| / max(1, |a|).
inline PartialsCheck check_partials(const SystemDefinition& sys, const Rect& region,
                                    int n = 21, double rel_tol = 1e-6) {
  PartialsCheck out;
  auto consider = [&](const char* name, Point p, double analytic, double fd) {
    if (!std::isfinite(analytic) || !std::isfinite(fd)) {
      out.ok = false;
      out.worst_name = name;
      out.worst_point = p;
      out.worst_relative_error = INFINITY;
      return;
    }
    const double err = std::abs(analytic - fd) / std::max(1.0, std::abs(analytic));
    if (err > out.worst_relative_error) {
      out.worst_relative_error = err;
      out.worst_name = name;
      out.worst_point = p;
    }
  };
  // Fourth-order stencil so that truncation stays below rel_tol near poles.
  auto d1 = [](const auto& f, double at, double s) {
    return (f(at - 2 * s) - 8 * f(at - s) + 8 * f(at + s) - f(at + 2 * s)) / (12 * s);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = region.x_lo + region.width() * i / (n - 1);
      const double y = region.y_lo + region.height() * j / (n - 1);
      const Point p{x, y};
      const double sx = detail::fd_step(x), sy = detail::fd_step(y);
      consider("g'", p, sys.dg(x), d1([&](double t) { return sys.g(t); }, x, sx));
      consider("h'", p, sys.dh(y), d1([&](double t) { return sys.h(t); }, y, sy));
      consider("G_x", p, sys.G_x(x, y), d1([&](double t) { return sys.G(t, y); }, x, sx));
      consider("G_y", p, sys.G_y(x, y), d1([&](double t) { return sys.G(x, t); }, y, sy));
      consider("H_x", p, sys.H_x(x, y), d1([&](double t) { return sys.H(t, y); }, x, sx));
      consider("H_y", p, sys.H_y(x, y), d1([&](double t) { return sys.H(x, t); }, y, sy));
    }
  }
  if (out.worst_relative_error > rel_tol) out.ok = false;
  return out;
}

}  // namespace kolmo
