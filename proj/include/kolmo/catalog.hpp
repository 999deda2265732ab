#pragma once

// The five worked systems:
//
//   classical     x' = y - x,  y' = y (2 - x)
//   relativistic  x' = y - x,  y' = y (2 - 24 pi x - 8 pi y) / (1 - 8 pi x)
//   pp1           x' = y - x,  y' = y (alpha / (1 + kappa x) - beta x y)
//   pp2           x' = y - x,  y' = y (2 / (1 + 2x) - 2y / 3)
//   pp3           x' = x (delta y - gamma),  y' = alpha y (1 - y/m - x)
//
// The first four are instances of H(x,y) = a(x) - b(x) y, h(y) = y,
// G(x,y) = y - x, g(x) = 1.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kolmo/specfun.hpp"
#include "kolmo/system.hpp"

namespace kolmo {

/// Reference closed forms for a model. Present only for the default
/// parameters. A component flagged inconsistent does not satisfy the
/// derivative formula it is supposed to integrate and is kept for reference.
struct ClosedForms {
  std::optional<Point> equilibrium;
  std::optional<double> c;
  std::optional<double> v;
  std::optional<double> X;
  std::string X_note;
  std::optional<double> X_upper;  // known strict upper bound on X, if any
  Scalar1 H;
  Scalar1 G;
  bool H_consistent = true;
  bool G_consistent = true;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  SystemDefinition system;
  Point equilibrium_guess;
  Rect sample_region;  // interior box for randomized sweeps and trajectory starts
  Rect check_region;   // where closed forms are compared against quadrature
  ClosedForms closed;
};

struct ModelInfo {
  std::string id;
  std::string description;
};

inline std::vector<ModelInfo> list_models() {
  return {
      {"classical", "Newtonian (Smoluchowski-Poisson) limit, a(x)=2-x, b=0; astrophysics, classical case"},
      {"relativistic", "TOV in Milne variables, (1-8pi x)a=2-24pi x, (1-8pi x)b=8pi; astrophysics, relativistic case"},
      {"pp1", "predator-prey I, H=alpha/(1+kappa x)-beta x y; biology, model I"},
      {"pp2", "predator-prey II, H=2/(1+2x)-2y/3; biology, model II"},
      {"pp3", "predator-prey III, x'=x(delta y-gamma), y'=alpha y(1-y/m-x); biology, model III"},
  };
}

namespace detail {

inline Parameters merge_parameters(const std::string& id, Parameters defaults,
                                   const Parameters& overrides) {
  for (const auto& [k, v] : overrides) {
    if (!defaults.count(k))
      throw InvalidParameters("model '" + id + "' has no parameter '" + k + "'");
    if (!std::isfinite(v) || !(v > 0.0))
      throw InvalidParameters("parameter '" + k + "' must be positive, got " + format_double(v));
    defaults[k] = v;
  }
  return defaults;
}

inline SystemFunctions a_minus_b_y(Scalar1 a, Scalar1 da, Scalar1 b, Scalar1 db) {
  SystemFunctions f;
  f.g = [](double) { return 1.0; };
  f.dg = [](double) { return 0.0; };
  f.h = [](double y) { return y; };
  f.dh = [](double) { return 1.0; };
  f.G = [](double x, double y) { return y - x; };
  f.G_x = [](double, double) { return -1.0; };
  f.G_y = [](double, double) { return 1.0; };
  f.H = [a, b](double x, double y) { return a(x) - b(x) * y; };
  f.H_x = [da, db](double x, double y) { return da(x) - db(x) * y; };
  f.H_y = [b](double x, double) { return -b(x); };
  return f;
}

inline CatalogEntry classical(const Parameters& overrides) {
  const Parameters p = merge_parameters("classical", {}, overrides);
  auto fns = a_minus_b_y([](double x) { return 2.0 - x; }, [](double) { return -1.0; },
                         [](double) { return 0.0; }, [](double) { return 0.0; });
  CatalogEntry e{"classical", list_models()[0].description,
                 SystemDefinition("classical", std::move(fns), {0.0, 8.0, 0.0, 20.0}, p),
                 {1.5, 1.5},
                 {0.05, 3.9, 0.05, 6.0},
                 {0.1, 3.9, 0.1, 10.0},
                 {}};
  e.closed.equilibrium = Point{2.0, 2.0};
  e.closed.c = 3.0;
  e.closed.v = 2.0;
  e.closed.X = 2.0 + 2.0 * std::sqrt(2.0 - std::log(3.0));
  e.closed.X_note = "X = 2 + 2 sqrt(2 - log 3)";
  e.closed.X_upper = 4.0;
  e.closed.H = [](double x) { return 0.5 * (x - 2.0) * (x - 2.0); };
  e.closed.G = [](double y) { return y - 2.0 - 2.0 * std::log(y / 2.0); };
  return e;
}

/// Both Lambert-branch candidates for the relativistic bound in the scaled
/// variable 16 pi X = 2 + W(-2^{1/3} e^{-4/3}).
struct RelativisticBoundCandidates {
  double scaled_principal;
  double scaled_lower;
};

inline RelativisticBoundCandidates relativistic_bound_candidates() {
  const double arg = -std::cbrt(2.0) * std::exp(-4.0 / 3.0);
  return {2.0 + lambert_w(WBranch::principal, arg), 2.0 + lambert_w(WBranch::lower, arg)};
}

inline CatalogEntry relativistic(const Parameters& overrides) {
  using std::numbers::pi;
  const Parameters p = merge_parameters("relativistic", {}, overrides);
  const double x_sing = 1.0 / (8.0 * pi);
  auto a = [](double x) { return (2.0 - 24.0 * pi * x) / (1.0 - 8.0 * pi * x); };
  auto da = [](double x) {
    const double d = 1.0 - 8.0 * pi * x;
    return -8.0 * pi / (d * d);
  };
  auto b = [](double x) { return 8.0 * pi / (1.0 - 8.0 * pi * x); };
  auto db = [](double x) {
    const double d = 1.0 - 8.0 * pi * x;
    return 64.0 * pi * pi / (d * d);
  };
  CatalogEntry e{"relativistic", list_models()[1].description,
                 SystemDefinition("relativistic", a_minus_b_y(a, da, b, db),
                                  {0.0, x_sing - 1e-9, 0.0, 1.0}, p),
                 {0.02, 0.02},
                 {0.0005, 0.039, 0.0005, 0.5},
                 {0.001, 0.0397, 0.001, 1.0},
                 {}};
  const double w = 1.0 / (16.0 * pi);
  e.closed.equilibrium = Point{w, w};
  e.closed.c = 3.0;
  e.closed.v = 1.0 / (24.0 * pi);
  // The bound lies in (w, 1/(8 pi)), i.e. 16 pi X in (1, 2); keep the branch
  // whose value lands there.
  const auto cand = relativistic_bound_candidates();
  const bool principal_ok = cand.scaled_principal > 1.0 && cand.scaled_principal < 2.0;
  const double scaled = principal_ok ? cand.scaled_principal : cand.scaled_lower;
  e.closed.X = scaled / (16.0 * pi);
  e.closed.X_note = std::string("16 pi X = 2 + W(-2^{1/3} e^{-4/3}), ") +
                    (principal_ok ? "principal" : "lower") + " branch";
  e.closed.H = [](double x) {
    return (-48.0 * pi * x - 3.0 * std::log(1.0 - 8.0 * pi * x) + 3.0 - 3.0 * std::log(2.0)) /
           (16.0 * pi);
  };
  e.closed.G = [](double y) { return y - (1.0 + std::log(16.0 * pi * y)) / (16.0 * pi); };
  return e;
}

inline CatalogEntry pp1(const Parameters& overrides) {
  const Parameters p =
      merge_parameters("pp1", {{"alpha", 6.0}, {"kappa", 2.0}, {"beta", 2.0}}, overrides);
  const double alpha = p.at("alpha"), kappa = p.at("kappa"), beta = p.at("beta");
  auto a = [=](double x) { return alpha / (1.0 + kappa * x); };
  auto da = [=](double x) { return -alpha * kappa / ((1.0 + kappa * x) * (1.0 + kappa * x)); };
  // H = a(x) - (beta x) y
  auto b = [=](double x) { return beta * x; };
  auto db = [=](double) { return beta; };
  CatalogEntry e{"pp1", list_models()[2].description,
                 SystemDefinition("pp1", a_minus_b_y(a, da, b, db), {0.0, 8.0, 0.0, 20.0}, p),
                 {0.8, 0.8},
                 {0.05, 3.0, 0.05, 4.0},
                 {0.1, 3.0, 0.1, 5.0},
                 {}};
  if (overrides.empty()) {
    e.closed.equilibrium = Point{1.0, 1.0};
    e.closed.c = 7.0;
    e.closed.H = [](double x) {
      return x * x - 1.0 + 3.0 * std::log(3.0) - 3.0 * std::log(2.0 * x + 1.0);
    };
    e.closed.G = [](double y) { return y - std::log(y) - 1.0; };
  }
  return e;
}

inline CatalogEntry pp2(const Parameters& overrides) {
  const Parameters p = merge_parameters("pp2", {}, overrides);
  auto a = [](double x) { return 2.0 / (1.0 + 2.0 * x); };
  auto da = [](double x) { return -4.0 / ((1.0 + 2.0 * x) * (1.0 + 2.0 * x)); };
  auto b = [](double) { return 2.0 / 3.0; };
  auto db = [](double) { return 0.0; };
  CatalogEntry e{"pp2", list_models()[3].description,
                 SystemDefinition("pp2", a_minus_b_y(a, da, b, db), {0.0, 6.0, 0.0, 10.0}, p),
                 {0.8, 0.8},
                 {0.05, 3.0, 0.05, 4.0},
                 {0.1, 3.0, 0.1, 4.0},
                 {}};
  e.closed.equilibrium = Point{1.0, 1.0};
  e.closed.c = 3.0;
  e.closed.v = 0.5;
  // 2X = -3 W_{-1}(-exp(-1 - Gc(3/2))) - 1 with Gc(3/2) = 1/2 - log(3/2).
  const double level = 0.5 - std::log(1.5);
  e.closed.X = 0.5 * (-3.0 * lambert_w(WBranch::lower, -std::exp(-1.0 - level)) - 1.0);
  e.closed.X_note = "X = -(3/2) W_{-1}(-(3/2) e^{-3/2}) - 1/2";
  e.closed.H = [](double x) {
    return (2.0 * x - 2.0 + 3.0 * std::log(3.0) - 3.0 * std::log(2.0 * x + 1.0)) / 3.0;
  };
  e.closed.G = [](double y) { return y - std::log(y) - 1.0; };
  return e;
}

inline CatalogEntry pp3(const Parameters& overrides) {
  Parameters p = merge_parameters(
      "pp3", {{"alpha", 1.0}, {"gamma", 1.0}, {"delta", 2.0}, {"m", 1.0}}, overrides);
  const double alpha = p.at("alpha"), gamma = p.at("gamma"), delta = p.at("delta");
  if (!overrides.count("m")) {
    if (!(delta > gamma))
      throw InvalidParameters("pp3: m = 1/(delta/gamma - 1) needs delta > gamma");
    p["m"] = 1.0 / (delta / gamma - 1.0);
  }
  const double m = p.at("m");
  const double w = 1.0 - gamma / (m * delta), z = gamma / delta;
  if (!(w > 0.0))
    throw InvalidParameters("pp3: interior equilibrium needs 1 - gamma/(m delta) > 0, got " +
                            format_double(w));

  // Factored as g = x, h = delta y so that G(w, y) / h(y) integrates to the
  // reference Gc and the Lyapunov function matches the reference L.
  SystemFunctions f;
  f.g = [](double x) { return x; };
  f.dg = [](double) { return 1.0; };
  f.h = [=](double y) { return delta * y; };
  f.dh = [=](double) { return delta; };
  f.G = [=](double, double y) { return delta * y - gamma; };
  f.G_x = [](double, double) { return 0.0; };
  f.G_y = [=](double, double) { return delta; };
  f.H = [=](double x, double y) { return alpha / delta * (1.0 - y / m - x); };
  f.H_x = [=](double, double) { return -alpha / delta; };
  f.H_y = [=](double, double) { return -alpha / (delta * m); };

  CatalogEntry e{"pp3", list_models()[4].description,
                 SystemDefinition("pp3", std::move(f), {0.0, 6.0, 0.0, 6.0}, p),
                 {0.8 * w + 0.1, 0.8 * z + 0.1},
                 {0.05, 2.0, 0.05, 2.0},
                 {0.1, 3.0, 0.1, 3.0},
                 {}};
  e.closed.equilibrium = Point{w, z};
  // The reference Hc has derivative (alpha/gamma)(1 - 1/x), which differs from
  // -H(x,z)/g(x) = (alpha/delta)(1 - w/x) for every admissible parameter set.
  e.closed.G = [=](double y) { return y - z * std::log(delta * y / gamma) - z; };
  e.closed.H = [=](double x) {
    return alpha * x / gamma + (alpha / (m * delta) - alpha / gamma * std::log(x));
  };
  e.closed.H_consistent = false;
  return e;
}

}  // namespace detail

inline CatalogEntry load_model(const std::string& id, const Parameters& overrides = {}) {
  if (id == "classical") return detail::classical(overrides);
  if (id == "relativistic") return detail::relativistic(overrides);
  if (id == "pp1") return detail::pp1(overrides);
  if (id == "pp2") return detail::pp2(overrides);
  if (id == "pp3") return detail::pp3(overrides);
  throw UnknownModel("unknown model '" + id + "'");
}

}  // namespace kolmo
