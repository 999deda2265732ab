#include <gtest/gtest.h>

#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "kolmo/specfun.hpp"

using kolmo::lambert_w;
using kolmo::WBranch;

namespace {
constexpr double inv_e = 0.36787944117144232159552377016146087;
}

TEST(LambertW, SpecialValues) {
  EXPECT_EQ(lambert_w(WBranch::principal, 0.0), 0.0);
  EXPECT_NEAR(lambert_w(WBranch::principal, std::numbers::e), 1.0, 1e-15);
  EXPECT_EQ(lambert_w(WBranch::lower, -inv_e), -1.0);
  EXPECT_EQ(lambert_w(WBranch::principal, -inv_e), -1.0);
  EXPECT_NEAR(lambert_w(WBranch::lower, -1.5 * std::exp(-1.5)), -1.5, 1e-12);
}

TEST(LambertW, NearBranchPoint) {
  for (double q : {1e-16, 1e-12, 1e-9, 1e-7, 1e-6, 1e-4}) {
    const double x = -inv_e + q * inv_e;
    const double w0 = lambert_w(WBranch::principal, x), wm = lambert_w(WBranch::lower, x);
    EXPECT_GE(w0, -1.0);
    EXPECT_LE(wm, -1.0);
    EXPECT_NEAR(w0, -1.0, 1e-7 + 2 * std::sqrt(2 * q));
    EXPECT_NEAR(wm, -1.0, 1e-7 + 2 * std::sqrt(2 * q));
  }
}

TEST(LambertW, DomainErrors) {
  EXPECT_THROW(lambert_w(WBranch::principal, -0.5), kolmo::DomainViolation);
  EXPECT_THROW(lambert_w(WBranch::lower, -0.5), kolmo::DomainViolation);
  EXPECT_THROW(lambert_w(WBranch::lower, 0.0), kolmo::DomainViolation);
  EXPECT_THROW(lambert_w(WBranch::lower, 1.0), kolmo::DomainViolation);
  EXPECT_THROW(lambert_w(WBranch::principal, NAN), kolmo::DomainViolation);
  // Within 1e-15 below -1/e counts as the branch point.
  EXPECT_EQ(lambert_w(WBranch::lower, -inv_e - 5e-16), -1.0);
}

TEST(LambertW, RoundTripLower) {
  for (int k = 0; k < 1000; ++k) {
    const double y = -20.0 + 19.0 * (k + 0.5) / 1000.0;
    const double w = lambert_w(WBranch::lower, y * std::exp(y));
    EXPECT_NEAR(w, y, 1e-12 * std::abs(y)) << "y = " << y;
  }
}

TEST(LambertW, RoundTripPrincipal) {
  for (int k = 0; k < 1000; ++k) {
    const double y = -1.0 + 21.0 * (k + 0.5) / 1000.0;
    const double w = lambert_w(WBranch::principal, y * std::exp(y));
    EXPECT_NEAR(w, y, 1e-12 * std::max(1.0, std::abs(y))) << "y = " << y;
  }
}

TEST(LambertW, ResidualRelative) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u0(-inv_e, 50.0), um(-inv_e, -1e-300);
  for (int k = 0; k < 2000; ++k) {
    const double x0 = u0(rng), xm = um(rng);
    const double w0 = lambert_w(WBranch::principal, x0), wm = lambert_w(WBranch::lower, xm);
    EXPECT_LE(std::abs(w0 * std::exp(w0) - x0), 1e-13 * (1 + std::abs(x0)));
    EXPECT_LE(std::abs(wm * std::exp(wm) - xm), 1e-13 * (1 + std::abs(xm)));
  }
}

TEST(LambertW, AgreesWithBoost) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst0 = 0, worstm = 0;
  for (int k = 0; k < 2000; ++k) {
    // Log-spaced toward the branch point and toward 0 and infinity.
    const double q = std::pow(10.0, -12.0 * u(rng));
    const double near_bp = -inv_e + q * inv_e;
    const double big = std::pow(10.0, 8.0 * u(rng) - 4.0);
    const double small_neg = -inv_e * std::pow(10.0, -100.0 * u(rng));
    for (double x : {near_bp, big, small_neg}) {
      const double b0 = boost::math::lambert_w0(x);
      worst0 = std::max(worst0, std::abs(lambert_w(WBranch::principal, x) - b0) / std::max(1.0, std::abs(b0)));
      if (x < 0) {
        const double bm = boost::math::lambert_wm1(x);
        worstm = std::max(worstm, std::abs(lambert_w(WBranch::lower, x) - bm) / std::abs(bm));
      }
    }
  }
  EXPECT_LE(worst0, 1e-12);
  EXPECT_LE(worstm, 1e-12);
}

TEST(LambertW, Monotone) {
  double prev0 = -2.0, prevm = 0.0;
  bool first = true;
  for (int k = 0; k <= 4000; ++k) {
    const double x = -inv_e + (inv_e - 1e-6) * k / 4000.0;  // up to just below 0
    const double w0 = lambert_w(WBranch::principal, x), wm = lambert_w(WBranch::lower, x);
    if (!first) {
      EXPECT_GT(w0, prev0) << x;
      EXPECT_LT(wm, prevm) << x;
    }
    prev0 = w0;
    prevm = wm;
    first = false;
  }
  for (int k = 1; k <= 1000; ++k) {
    const double x = 0.05 * k;
    const double w0 = lambert_w(WBranch::principal, x);
    EXPECT_GT(w0, prev0) << x;
    prev0 = w0;
  }
}

TEST(LambertW, RelativisticArgument) {
  const double arg = -std::cbrt(2.0) * std::exp(-4.0 / 3.0);
  EXPECT_NEAR(lambert_w(WBranch::principal, arg), boost::math::lambert_w0(arg), 1e-15);
  EXPECT_NEAR(lambert_w(WBranch::lower, arg), boost::math::lambert_wm1(arg), 1e-14);
}
