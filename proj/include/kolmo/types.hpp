#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace kolmo {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Closed axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct Rect {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;

  bool contains(Point p) const {
    return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
  }
  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
};

/// Row-major 2x2 matrix.
struct Matrix2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  double trace() const { return a11 + a22; }
  double determinant() const { return a11 * a22 - a12 * a21; }
  double max_abs() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)),
                    std::max(std::abs(a21), std::abs(a22)));
  }
  std::array<double, 4> entries() const { return {a11, a12, a21, a22}; }
};

// ---------------------------------------------------------------------------
// Errors. Every failure mode named by a module has its own type so callers
// (and the CLI) can map them onto structured report entries.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainViolation : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct SingularJacobian : Error {
  using Error::Error;
};
struct DivisionByZero : Error {
  using Error::Error;
};
struct NoRoot : Error {
  using Error::Error;
};
struct UnknownModel : Error {
  using Error::Error;
};
struct InvalidParameters : Error {
  using Error::Error;
};
struct QuadratureFailure : Error {
  using Error::Error;
};
struct NonpositiveDenominator : Error {
  using Error::Error;
};
struct OutOfTable : Error {
  using Error::Error;
};
struct StepUnderflow : Error {
  using Error::Error;
};
struct NotASaddle : Error {
  using Error::Error;
};
struct DidNotApproachOrigin : Error {
  using Error::Error;
};

/// Thrown by select_variant; carries the first point where neither sign
/// pattern holds.
struct NeitherVariant : Error {
  NeitherVariant(const std::string& what, Point witness)
      : Error(what), witness(witness) {}
  Point witness;
};

/// 17 significant digits, the precision used for every exported float.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_point(Point p) {
  return "(" + format_double(p.x) + ", " + format_double(p.y) + ")";
}

}  // namespace kolmo
