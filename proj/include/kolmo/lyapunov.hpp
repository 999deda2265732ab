#pragma once

// Lyapunov function L(x, y) = Hc(x) + Gc(y) for a Kolmogorov system with
// interior equilibrium (w, z). Two sign conventions exist:
//
//   thm1:  Hc' =  H(x, z) / g(x),   Gc' = -G(w, y) / h(y)
//   thm2:  Hc' = -H(x, z) / g(x),   Gc' =  G(w, y) / h(y)
//
// Each component is the antiderivative anchored at zero (Hc(w) = Gc(z) = 0),
// tabulated by adaptive Gauss-Kronrod quadrature and interpolated with cubic
// Hermite segments that use the exact derivative at the nodes.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kolmo/equilibrium.hpp"
#include "kolmo/quadrature.hpp"
#include "kolmo/system.hpp"

namespace kolmo {

enum class Variant { thm1, thm2 };

inline std::string_view to_string(Variant v) { return v == Variant::thm1 ? "thm1" : "thm2"; }

/// Antiderivative of a scalar function on [lo, hi], zero at the anchor.
class ComponentTable {
 public:
  struct Options {
    double interp_tol = 1e-11;   // Hermite midpoint defect accepted per segment
    double quad_tol = 1e-12;     // |K15 - G7| accepted per segment
    double relative_tol = 1e-10; // per-segment slack relative to the segment integral
    double min_width = 1e-11;    // relative segment width accepted unconditionally
    int initial_segments = 32;
    std::size_t max_nodes = 2'000'000;
  };

  ComponentTable() = default;

  template <typename F>
  static ComponentTable build(F&& f, double anchor, double lo, double hi, const Options& opt) {
    if (!(lo <= anchor && anchor <= hi))
      throw InvalidParameters("anchor " + format_double(anchor) + " outside table interval [" +
                              format_double(lo) + ", " + format_double(hi) + "]");
    ComponentTable t;
    t.anchor_ = anchor;
    const double f_anchor = f(anchor);
    auto left = sweep(f, anchor, f_anchor, lo, opt);
    auto right = sweep(f, anchor, f_anchor, hi, opt);
    std::reverse(left.begin(), left.end());
    left.pop_back();  // the anchor node is the first node of `right`
    left.insert(left.end(), right.begin(), right.end());
    t.x_.reserve(left.size());
    for (const auto& n : left) {
      t.x_.push_back(n.x);
      t.v_.push_back(n.v);
      t.d_.push_back(n.d);
    }
    return t;
  }

  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  double anchor() const { return anchor_; }
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return v_; }
  const std::vector<double>& derivatives() const { return d_; }

  bool covers(double t) const {
    const double slack = 1e-12 * (1.0 + std::abs(hi() - lo()));
    return t >= lo() - slack && t <= hi() + slack;
  }

  double operator()(double t) const {
    if (!covers(t))
      throw OutOfTable("value " + format_double(t) + " outside table [" + format_double(lo()) +
                       ", " + format_double(hi()) + "]");
    if (x_.size() == 1) return v_.front();
    t = std::clamp(t, lo(), hi());
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = it == x_.end() ? x_.size() - 2 : std::size_t(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v_[i] + (s3 - 2 * s2 + s) * h * d_[i] +
           (-2 * s3 + 3 * s2) * v_[i + 1] + (s3 - s2) * h * d_[i + 1];
  }

 private:
  struct Node {
    double x, v, d;
  };

  // Nodes from `from` toward `to`, in walking order, accumulating the
  // integral segment by segment.
  template <typename F>
  static std::vector<Node> sweep(F& f, double from, double f_from, double to, const Options& opt) {
    std::vector<Node> out{{from, 0.0, f_from}};
    if (from == to) return out;
    std::vector<std::pair<double, double>> stack;  // (start, end), processed LIFO
    const int n0 = std::max(1, opt.initial_segments);
    for (int k = n0; k >= 1; --k) {
      const double e = k == n0 ? to : from + (to - from) * k / n0;
      const double s = from + (to - from) * (k - 1) / n0;
      stack.emplace_back(s, e);
    }
    while (!stack.empty()) {
      auto [s, e] = stack.back();
      stack.pop_back();
      const Node& prev = out.back();
      const double m = 0.5 * (s + e);
      const quad::Estimate whole = quad::gk15(f, s, e);
      const quad::Estimate half = quad::gk15(f, s, m);
      const double f_end = f(e);
      const double hermite_mid = prev.v + 0.5 * whole.value + (e - s) * (prev.d - f_end) / 8.0;
      const double exact_mid = prev.v + half.value;
      if (!std::isfinite(whole.value) || !std::isfinite(half.value) || !std::isfinite(f_end))
        throw QuadratureFailure("non-finite derivative near " + format_double(e));
      // The relative slack covers integrands whose own evaluation loses
      // digits next to a singular edge (e.g. 1 - 8 pi x near 1/(8 pi)).
      const double slack = opt.relative_tol * std::abs(whole.value);
      const bool ok = std::abs(hermite_mid - exact_mid) <= opt.interp_tol + slack &&
                      whole.error <= opt.quad_tol + slack;
      // Below this width the defect is dominated by round-off in f itself.
      const bool at_noise_floor = std::abs(e - s) <= opt.min_width * (1.0 + std::abs(s));
      if (ok || at_noise_floor) {
        out.push_back({e, prev.v + whole.value, f_end});
        if (out.size() > opt.max_nodes)
          throw QuadratureFailure("table exceeds " + std::to_string(opt.max_nodes) + " nodes");
        continue;
      }
      stack.emplace_back(m, e);
      stack.emplace_back(s, m);
    }
    return out;
  }

  double anchor_ = 0.0;
  std::vector<double> x_, v_, d_;
};

/// Table intervals for the two components.
struct LyapunovIntervals {
  double x_lo, x_hi, y_lo, y_hi;
};

/// Default intervals: the system domain, with the lower edge moved to 1e-6
/// wherever g or h vanishes there (logarithmic singularity of the component).
inline LyapunovIntervals default_intervals(const SystemDefinition& sys) {
  constexpr double cut = 1e-6;
  const Rect& d = sys.domain();
  LyapunovIntervals iv{d.x_lo, d.x_hi, d.y_lo, d.y_hi};
  if (!(sys.g(iv.x_lo) > 0.0)) iv.x_lo += cut;
  if (!(sys.h(iv.y_lo) > 0.0)) iv.y_lo += cut;
  return iv;
}

class LyapunovFunction {
 public:
  Variant variant() const { return variant_; }
  Point anchors() const { return anchors_; }
  const ComponentTable& H_table() const { return H_; }
  const ComponentTable& G_table() const { return G_; }

  /// Hc(x) from the table.
  double H_comp(double x) const { return H_(x); }
  /// Gc(y) from the table.
  double G_comp(double y) const { return G_(y); }
  /// Exact derivatives from the defining formulas.
  double H_prime(double x) const { return sign() * sys_.H(x, anchors_.y) / sys_.g(x); }
  double G_prime(double y) const { return -sign() * sys_.G(anchors_.x, y) / sys_.h(y); }

  bool covers(Point p) const { return H_.covers(p.x) && G_.covers(p.y); }

  double operator()(Point p) const { return H_(p.x) + G_(p.y); }

  const SystemDefinition& system() const { return sys_; }

 private:
  friend LyapunovFunction build_lyapunov(const SystemDefinition&, Point, Variant,
                                         const LyapunovIntervals&, const ComponentTable::Options&);
  LyapunovFunction(SystemDefinition sys, Variant v, Point anchors)
      : sys_(std::move(sys)), variant_(v), anchors_(anchors) {}

  double sign() const { return variant_ == Variant::thm1 ? 1.0 : -1.0; }

  SystemDefinition sys_;
  Variant variant_;
  Point anchors_;
  ComponentTable H_, G_;
};

/// Picks the sign convention whose hypotheses hold on an n x n interior grid:
///   thm1:  G_x(x,y) H_x(x,z) <= 0  and  H_y(x,y) G_y(w,y) >= 0
///   thm2:  G_x(x,y) H_x(x,z) >= 0  and  H_y(x,y) G_y(w,y) <= 0
/// When both hold everywhere (all products zero) thm2 is returned.
inline Variant select_variant(const SystemDefinition& sys, const Equilibrium& eq, int n = 41) {
  const Point wz = eq.location;
  const Rect& d = sys.domain();
  bool thm1 = true, thm2 = true;
  Point witness1, witness2;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = d.x_lo + d.width() * (i + 0.5) / n;
      const double y = d.y_lo + d.height() * (j + 0.5) / n;
      const double px = sys.G_x(x, y) * sys.H_x(x, wz.y);
      const double py = sys.H_y(x, y) * sys.G_y(wz.x, y);
      if (thm1 && (px > 0.0 || py < 0.0)) {
        thm1 = false;
        witness1 = {x, y};
      }
      if (thm2 && (px < 0.0 || py > 0.0)) {
        thm2 = false;
        witness2 = {x, y};
      }
    }
  }
  if (thm2) return Variant::thm2;
  if (thm1) return Variant::thm1;
  throw NeitherVariant("neither sign pattern holds; thm1 fails at " + format_point(witness1) +
                           ", thm2 fails at " + format_point(witness2),
                       witness1);
}

inline LyapunovFunction build_lyapunov(const SystemDefinition& sys, Point anchors, Variant variant,
                                       const LyapunovIntervals& iv,
                                       const ComponentTable::Options& opt = {}) {
  LyapunovFunction L(sys, variant, anchors);
  const double s = variant == Variant::thm1 ? 1.0 : -1.0;
  const SystemDefinition& S = L.sys_;
  auto dH = [&S, s, z = anchors.y](double x) {
    const double g = S.g(x);
    if (!(g > 0.0))
      throw NonpositiveDenominator("g(" + format_double(x) + ") = " + format_double(g));
    return s * S.H(x, z) / g;
  };
  auto dG = [&S, s, w = anchors.x](double y) {
    const double h = S.h(y);
    if (!(h > 0.0))
      throw NonpositiveDenominator("h(" + format_double(y) + ") = " + format_double(h));
    return -s * S.G(w, y) / h;
  };
  L.H_ = ComponentTable::build(dH, anchors.x, iv.x_lo, iv.x_hi, opt);
  L.G_ = ComponentTable::build(dG, anchors.y, iv.y_lo, iv.y_hi, opt);
  return L;
}

inline LyapunovFunction build_lyapunov(const SystemDefinition& sys, const Equilibrium& eq,
                                       Variant variant) {
  return build_lyapunov(sys, eq.location, variant, default_intervals(sys));
}

/// x' L_x + y' L_y by the chain rule, with the comparison form
///   thm1:   G_x H_x^z (x-w)^2 - H_y G_y^w (y-z)^2
///   thm2:  -G_x H_x^z (x-w)^2 + H_y G_y^w (y-z)^2
/// evaluated at p itself. The comparison form is exact only at intermediate
/// points, so it is reported alongside rather than required to match.
struct OrbitalDerivative {
  double chain_rule = 0.0;
  double comparison = 0.0;
};

inline OrbitalDerivative orbital_derivative(const SystemDefinition& sys, const LyapunovFunction& L,
                                            Point p) {
  if (!L.covers(p))
    throw OutOfTable("point " + format_point(p) + " outside the Lyapunov tables");
  const Point v = sys.velocity(p);
  const Point wz = L.anchors();
  OrbitalDerivative out;
  out.chain_rule = v.x * L.H_prime(p.x) + v.y * L.G_prime(p.y);
  const double s = L.variant() == Variant::thm1 ? 1.0 : -1.0;
  const double dx = p.x - wz.x, dy = p.y - wz.y;
  out.comparison = s * (sys.G_x(p.x, p.y) * sys.H_x(p.x, wz.y) * dx * dx -
                        sys.H_y(p.x, p.y) * sys.G_y(wz.x, p.y) * dy * dy);
  return out;
}

/// True when both components are nonnegative on their nodes and vanish
/// only at the anchor (to `zero_tol`).
inline bool components_positive(const LyapunovFunction& L, double zero_tol = 1e-14) {
  auto check = [zero_tol](const ComponentTable& t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double x = t.nodes()[i], v = t.values()[i];
      if (x == t.anchor()) {
        if (v != 0.0) return false;
      } else if (!(v > 0.0) && !(std::abs(x - t.anchor()) < 1e-6 && v >= -zero_tol)) {
        return false;
      }
    }
    return true;
  };
  return check(L.H_table()) && check(L.G_table());
}

/// CSV with header `coordinate,value,derivative`, one row per table node.
inline void write_table_csv(std::ostream& os, const ComponentTable& t) {
  os << "coordinate,value,derivative\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << format_double(t.nodes()[i]) << ',' << format_double(t.values()[i]) << ','
       << format_double(t.derivatives()[i]) << '\n';
}

}  // namespace kolmo
