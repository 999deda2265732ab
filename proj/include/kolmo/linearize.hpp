#pragma once

#include <cmath>
#include <complex>
#include <string_view>

#include "kolmo/system.hpp"
#include "kolmo/types.hpp"

namespace kolmo {

enum class Stability {
  saddle,
  stable_node,
  stable_spiral,
  unstable_node,
  unstable_spiral,
  center_degenerate,
};

inline std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::saddle: return "saddle";
    case Stability::stable_node: return "stable-node";
    case Stability::stable_spiral: return "stable-spiral";
    case Stability::unstable_node: return "unstable-node";
    case Stability::unstable_spiral: return "unstable-spiral";
    case Stability::center_degenerate: return "center-degenerate";
  }
  return "center-degenerate";
}

inline bool is_stable(Stability s) {
  return s == Stability::stable_node || s == Stability::stable_spiral;
}

struct StabilityReport {
  double trace = 0.0;
  double determinant = 0.0;
  double discriminant = 0.0;  // trace^2 - 4 det
  std::complex<double> eigenvalues[2];
  Stability classification = Stability::center_degenerate;
};

/// Trace/determinant classification of a 2x2 linearization.
///
/// Eigenvalues are the roots of l^2 - tr l + det = 0. Real roots use the
/// cancellation-free pairing l1 = (tr + sign(tr) sqrt(D)) / 2, l2 = det / l1.
/// A discriminant with |D| < 1e-12 (1 + tr^2) is a repeated root and counts
/// as a node; det or tr within round-off of zero (with det >= 0) is
/// center-degenerate.
inline StabilityReport classify(const Matrix2& J) {
  StabilityReport r;
  r.trace = J.trace();
  r.determinant = J.determinant();
  r.discriminant = r.trace * r.trace - 4.0 * r.determinant;

  const double tr = r.trace, det = r.determinant, disc = r.discriminant;
  const double scale = 1.0 + J.max_abs() * J.max_abs();
  const double zero_tol = 1e-14 * scale;
  const double disc_tol = 1e-12 * (1.0 + tr * tr);

  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double l1 = 0.5 * (tr + std::copysign(sq, tr == 0.0 ? 1.0 : tr));
    const double l2 = l1 != 0.0 ? det / l1 : 0.5 * (tr - sq);
    r.eigenvalues[0] = {l1, 0.0};
    r.eigenvalues[1] = {l2, 0.0};
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    r.eigenvalues[0] = {0.5 * tr, im};
    r.eigenvalues[1] = {0.5 * tr, -im};
  }

  if (det < -zero_tol) {
    r.classification = Stability::saddle;
  } else if (det <= zero_tol || std::abs(tr) <= zero_tol) {
    r.classification = Stability::center_degenerate;
  } else if (tr < 0.0) {
    r.classification = disc < -disc_tol ? Stability::stable_spiral : Stability::stable_node;
  } else {
    r.classification = disc < -disc_tol ? Stability::unstable_spiral : Stability::unstable_node;
  }
  return r;
}

/// Slope of the unstable tangent at the origin,
///   c = (H(0,0) h'(0) / g(0) - G_x(0,0)) / G_y(0,0).
inline double unstable_slope_c(const SystemDefinition& sys) {
  const double g0 = sys.g(0.0);
  const double gy = sys.G_y(0.0, 0.0);
  if (g0 == 0.0) throw DivisionByZero("unstable slope: g(0) = 0");
  if (gy == 0.0) throw DivisionByZero("unstable slope: G_y(0,0) = 0");
  return (sys.H(0.0, 0.0) * sys.dh(0.0) / g0 - sys.G_x(0.0, 0.0)) / gy;
}

}  // namespace kolmo
