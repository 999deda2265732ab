#pragma once

// Real branches of the Lambert W function, the inverse of w -> w e^w.

#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>

#include "kolmo/types.hpp"

namespace kolmo {

enum class WBranch {
  principal,  // W0 on [-1/e, inf), values >= -1
  lower,      // W-1 on [-1/e, 0), values <= -1
};

inline std::string_view to_string(WBranch b) {
  return b == WBranch::principal ? "principal" : "lower";
}

namespace detail {

inline constexpr double inv_e = 0.36787944117144232159552377016146087;

// Expansion about the branch point in p = +-sqrt(2 (e x + 1)); the sign of
// p selects the branch.
inline double lambert_branch_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 +
                 p * (-43.0 / 540.0 + p * (769.0 / 17280.0 + p * (-221.0 / 8505.0))))));
}

inline double lambert_seed(WBranch branch, double x) {
  const double p_abs = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
  if (branch == WBranch::principal) {
    if (x < -0.25) return lambert_branch_series(p_abs);
    if (std::abs(x) < 0.3) return x * (1.0 + x * (-1.0 + x * (1.5 - x * 8.0 / 3.0)));
    if (x < 3.0) return std::log1p(x) * 0.8;
    const double l1 = std::log(x), l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
  }
  if (x < -0.25) return lambert_branch_series(-p_abs);
  const double l1 = std::log(-x), l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace detail

/// W(x) on the requested real branch: branch-aware seed followed by Halley
/// iteration on t(w) = w - x e^{-w} (the residual w e^w - x scaled by e^{-w}).
///
/// Inputs within 1e-15 below -1/e are treated as the branch point.
inline double lambert_w(WBranch branch, double x) {
  constexpr double edge_tol = 1e-15;
  if (std::isnan(x)) throw DomainViolation("lambert_w: NaN argument");
  if (x < -detail::inv_e - edge_tol)
    throw DomainViolation("lambert_w: argument " + format_double(x) + " below -1/e");
  if (branch == WBranch::lower && x >= 0.0)
    throw DomainViolation("lambert_w: lower branch needs x < 0, got " + format_double(x));
  if (x <= -detail::inv_e) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  const double q = std::numbers::e * x + 1.0;
  if (q < 1e-7) {
    // Truncation error of the series is O(p^7) < 1e-22 here, well below
    // what Halley can resolve against the flat residual at the branch point.
    const double p = std::sqrt(2.0 * q);
    return detail::lambert_branch_series(branch == WBranch::principal ? p : -p);
  }

  double w = detail::lambert_seed(branch, x);
  for (int i = 0; i < 64; ++i) {
    const double t = w - x * std::exp(-w);
    const double wp1 = w + 1.0;
    const double step = t / (wp1 - (w + 2.0) * t / (2.0 * wp1));
    double next = w - step;
    // Keep the iterate on its branch.
    if (branch == WBranch::principal && next < -1.0) next = 0.5 * (w - 1.0);
    if (branch == WBranch::lower && next > -1.0) next = 0.5 * (w - 1.0);
    const bool done = std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                 (1.0 + std::abs(next));
    w = next;
    if (done) break;
  }
  return w;
}

}  // namespace kolmo
