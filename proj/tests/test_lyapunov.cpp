#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "kolmo/catalog.hpp"
#include "kolmo/equilibrium.hpp"
#include "kolmo/flow.hpp"
#include "kolmo/lyapunov.hpp"
#include "oracles.hpp"

using namespace kolmo;

namespace {

struct Built {
  CatalogEntry entry;
  Equilibrium eq;
  LyapunovFunction L;
};

Built build(const std::string& id, const Parameters& over = {}) {
  CatalogEntry e = load_model(id, over);
  Equilibrium eq = find_equilibrium(e.system, e.equilibrium_guess);
  LyapunovFunction L = build_lyapunov(e.system, eq, select_variant(e.system, eq));
  return {std::move(e), eq, std::move(L)};
}

}  // namespace

TEST(Variant, CatalogModelsUseThm2) {
  for (const auto& id : oracle::model_ids()) {
    const auto e = load_model(id);
    const Equilibrium eq = find_equilibrium(e.system, e.equilibrium_guess);
    EXPECT_EQ(select_variant(e.system, eq), Variant::thm2) << id;
  }
}

TEST(Variant, Thm1AndNeither) {
  SystemFunctions f;
  f.g = [](double) { return 1.0; };
  f.dg = [](double) { return 0.0; };
  f.h = [](double) { return 1.0; };
  f.dh = [](double) { return 0.0; };
  // G_x < 0, H_x > 0, H_y > 0, G_y > 0
  f.G = [](double x, double y) { return y - x; };
  f.G_x = [](double, double) { return -1.0; };
  f.G_y = [](double, double) { return 1.0; };
  f.H = [](double x, double y) { return x + y - 2.0; };
  f.H_x = [](double, double) { return 1.0; };
  f.H_y = [](double, double) { return 1.0; };
  SystemDefinition s("thm1", f, {0, 2, 0, 2}, {});
  Equilibrium eq;
  eq.location = {1, 1};
  EXPECT_EQ(select_variant(s, eq), Variant::thm1);

  // H_x changes sign across the domain: neither pattern holds everywhere.
  f.H = [](double x, double y) { return (x - 1) * (x - 1) + y - 1.0; };
  f.H_x = [](double x, double) { return 2 * (x - 1); };
  SystemDefinition t("neither", f, {0, 2, 0, 2}, {});
  try {
    select_variant(t, eq);
    FAIL() << "expected NeitherVariant";
  } catch (const NeitherVariant& err) {
    EXPECT_TRUE(t.domain().contains(err.witness));
  }
}

TEST(Lyapunov, AnchorsAndPositivity) {
  for (const auto& id : oracle::model_ids()) {
    const auto b = build(id);
    const Point wz = b.L.anchors();
    EXPECT_EQ(b.L.H_comp(wz.x), 0.0) << id;
    EXPECT_EQ(b.L.G_comp(wz.y), 0.0) << id;
    EXPECT_EQ(b.L(wz), 0.0) << id;
    EXPECT_TRUE(components_positive(b.L)) << id;
    for (const Point p : oracle::random_points(b.entry.sample_region, 500, 3))
      if (distance(p, wz) > 1e-6) {
        EXPECT_GT(b.L(p), 0.0) << id << " at " << format_point(p);
      }
  }
}

TEST(Lyapunov, ClosedFormAgreement) {
  for (const auto& id : oracle::bound_model_ids()) {
    const auto b = build(id);
    const ClosedForms& cf = b.entry.closed;
    ASSERT_TRUE(cf.H && cf.G && cf.H_consistent && cf.G_consistent) << id;
    const Rect& r = b.entry.check_region;
    double wh = 0, wg = 0;
    for (int k = 0; k <= 2000; ++k) {
      const double x = r.x_lo + r.width() * k / 2000, y = r.y_lo + r.height() * k / 2000;
      wh = std::max(wh, std::abs(b.L.H_comp(x) - cf.H(x)));
      wg = std::max(wg, std::abs(b.L.G_comp(y) - cf.G(y)));
    }
    EXPECT_LE(wh, 1e-8) << id;
    EXPECT_LE(wg, 1e-8) << id;
  }
}

TEST(Lyapunov, Pp3AgainstHandDerivedComponents) {
  // For x' = x(delta y - gamma), y' = alpha y (1 - y/m - x) the construction
  // gives Hc = (alpha/delta)(x - w - w log(x/w)), Gc = y - z - z log(y/z).
  for (const auto& over : std::vector<Parameters>{{}, {{"alpha", 20.0}}, {{"gamma", 1.0}, {"delta", 3.0}}}) {
    const auto b = build("pp3", over);
    const auto& p = b.entry.system.parameters();
    const double a = p.at("alpha"), d = p.at("delta");
    const Point wz = b.L.anchors();
    double wh = 0, wg = 0;
    for (int k = 0; k <= 1000; ++k) {
      const double x = 0.1 + 2.9 * k / 1000, y = 0.1 + 2.9 * k / 1000;
      wh = std::max(wh, std::abs(b.L.H_comp(x) - a / d * (x - wz.x - wz.x * std::log(x / wz.x))));
      wg = std::max(wg, std::abs(b.L.G_comp(y) - (y - wz.y - wz.y * std::log(y / wz.y))));
    }
    EXPECT_LE(wh, 1e-8);
    EXPECT_LE(wg, 1e-8);
    // The reference G agrees; the reference H is flagged.
    if (over.empty()) {
      EXPECT_TRUE(b.entry.closed.G_consistent);
      EXPECT_FALSE(b.entry.closed.H_consistent);
      EXPECT_NEAR(b.entry.closed.G(1.7), b.L.G_comp(1.7), 1e-8);
    }
  }
}

TEST(Lyapunov, EvalExamples) {
  const auto c = build("classical");
  EXPECT_NEAR(c.L({4, 2}), 2.0, 1e-10);
  const auto p = build("pp2");
  EXPECT_NEAR(p.L({1, 1.5}), 0.5 - std::log(1.5), 1e-10);
  EXPECT_THROW(p.L({-1, 1}), OutOfTable);
  EXPECT_THROW(p.L({1, 1e-9}), OutOfTable);
}

TEST(Lyapunov, DegenerateInterval) {
  const auto e = load_model("classical");
  const LyapunovFunction L = build_lyapunov(e.system, {2, 2}, Variant::thm2, {2, 2, 2, 2});
  EXPECT_EQ(L.H_table().size(), 1u);
  EXPECT_EQ(L.H_comp(2.0), 0.0);
  EXPECT_THROW(L.H_comp(2.5), OutOfTable);
}

TEST(Lyapunov, BuildErrors) {
  const auto e = load_model("pp2");
  // Anchor outside the interval.
  EXPECT_THROW(build_lyapunov(e.system, {1, 1}, Variant::thm2, {2, 3, 0.1, 2}), InvalidParameters);
  // h(0) = 0 inside the interval.
  EXPECT_THROW(build_lyapunov(e.system, {1, 1}, Variant::thm2, {0.1, 3, 0.0, 2}), NonpositiveDenominator);
  // An integrand that turns NaN inside the interval.
  SystemFunctions f;
  f.g = [](double) { return 1.0; };
  f.h = [](double y) { return y; };
  f.G = [](double x, double y) { return y - x; };
  f.H = [](double x, double) { return std::sqrt(x - 0.3) - 0.5; };
  SystemDefinition s("nan", f, {0, 1, 0, 2}, {});
  EXPECT_THROW(build_lyapunov(s, {0.55, 0.55}, Variant::thm2, {0.1, 1.0, 0.1, 2}), QuadratureFailure);
}

TEST(OrbitalDerivative, ClassicalAtThreeOne) {
  const auto c = build("classical");
  // x' = -2, y' = -1, Hc' = x - 2 = 1, Gc' = (y - 2)/y = -1.
  const OrbitalDerivative d = orbital_derivative(c.entry.system, c.L, {3, 1});
  EXPECT_NEAR(d.chain_rule, -1.0, 1e-14);
  EXPECT_NEAR(d.chain_rule, -(2.0 - 3.0) * (2.0 - 3.0), 1e-14);
  EXPECT_LT(d.comparison, 0.0);
  EXPECT_EQ(orbital_derivative(c.entry.system, c.L, {2, 2}).chain_rule, 0.0);
}

TEST(OrbitalDerivative, ClosedFormsForPp) {
  const auto p2 = build("pp2");
  const auto p1 = build("pp1");
  const auto p3 = build("pp3");
  for (const Point p : oracle::random_points({0.05, 3, 0.05, 4}, 200, 5)) {
    const double x = p.x, y = p.y;
    EXPECT_NEAR(orbital_derivative(p2.entry.system, p2.L, p).chain_rule,
                -4 * (x - 1) * (x - 1) / (3 * (1 + 2 * x)) - 2.0 / 3 * (y - 1) * (y - 1), 1e-12);
    EXPECT_NEAR(orbital_derivative(p1.entry.system, p1.L, p).chain_rule,
                -2 * (2 * x + 3) * (x - 1) * (x - 1) / (1 + 2 * x) - 2 * x * (y - 1) * (y - 1),
                1e-11 * (1 + x * x * x));
    if (y < 3) {
      EXPECT_NEAR(orbital_derivative(p3.entry.system, p3.L, p).chain_rule,
                  -(y - 0.5) * (y - 0.5), 1e-12);  // -alpha (y - z)^2 / m
    }
  }
}

TEST(OrbitalDerivative, NonpositiveOnRandomPoints) {
  for (const auto& id : oracle::model_ids()) {
    const auto b = build(id);
    for (const Point p : oracle::random_points(b.entry.sample_region, 1000, 17)) {
      const OrbitalDerivative d = orbital_derivative(b.entry.system, b.L, p);
      EXPECT_LE(d.chain_rule, 1e-12) << id << " at " << format_point(p);
    }
  }
}

TEST(OrbitalDerivative, OutOfTable) {
  const auto b = build("pp2");
  EXPECT_THROW(orbital_derivative(b.entry.system, b.L, {1, 1e-8}), OutOfTable);
}

TEST(Lyapunov, NonincreasingAlongTrajectories) {
  for (const auto& id : oracle::model_ids()) {
    const auto b = build(id);
    const auto starts = oracle::random_points(b.entry.sample_region, 100, 23);
    for (const Point p0 : starts) {
      IntegrateOptions io;
      io.lyapunov = &b.L;
      const Trajectory t = integrate(b.entry.system, p0, 30.0, 1e-10, 1e-13, io);
      for (std::size_t k = 1; k < t.samples.size(); ++k) {
        if (!t.samples[k].lyapunov || !t.samples[k - 1].lyapunov) continue;
        const double prev = *t.samples[k - 1].lyapunov, cur = *t.samples[k].lyapunov;
        ASSERT_LE(cur, prev + 1e-9 * (1 + std::abs(prev))) << id << " from " << format_point(p0);
      }
    }
  }
}

TEST(Lyapunov, TableCsv) {
  const auto b = build("pp2");
  std::ostringstream os;
  write_table_csv(os, b.L.G_table());
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "coordinate,value,derivative");
  const auto lines = std::count(s.begin(), s.end(), '\n');
  EXPECT_EQ(static_cast<std::size_t>(lines), b.L.G_table().size() + 1);
}
