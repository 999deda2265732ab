#pragma once

// Gauss-Kronrod 7-15 rule with adaptive bisection.

#include <array>
#include <cmath>
#include <vector>

#include "kolmo/types.hpp"

namespace kolmo::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

// Abscissae of the 15-point Kronrod rule on [-1, 1] (nonnegative half);
// odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// One application of G7-K15 on [a, b]. The error is |K15 - G7|.
template <typename F>
Estimate gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * detail::wgk[7];
  double g = fc * detail::wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = r * detail::xgk[j];
    const double sum = f(c - dx) + f(c + dx);
    k += detail::wgk[j] * sum;
    if (j % 2 == 1) g += detail::wg[j / 2] * sum;
  }
  return {k * r, std::abs((k - g) * r)};
}

/// Adaptive G7-K15 on [a, b] to absolute tolerance `abs_tol`. Throws
/// QuadratureFailure when the integrand is not finite or the subdivision
/// limit is exhausted.
template <typename F>
Estimate integrate(F&& f, double a, double b, double abs_tol = 1e-10, int max_intervals = 4000) {
  if (a == b) return {};
  struct Piece {
    double a, b;
    Estimate e;
  };
  std::vector<Piece> pieces;
  pieces.push_back({a, b, gk15(f, a, b)});
  for (int n = 1; n < max_intervals; ++n) {
    double total_err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      total_err += pieces[i].e.error;
      if (pieces[i].e.error > pieces[worst].e.error) worst = i;
    }
    if (!std::isfinite(total_err))
      throw QuadratureFailure("non-finite integrand on [" + format_double(a) + ", " +
                              format_double(b) + "]");
    if (total_err <= abs_tol) break;
    const Piece p = pieces[worst];
    const double m = 0.5 * (p.a + p.b);
    pieces[worst] = {p.a, m, gk15(f, p.a, m)};
    pieces.push_back({m, p.b, gk15(f, m, p.b)});
    if (n + 1 == max_intervals)
      throw QuadratureFailure("subdivision limit reached on [" + format_double(a) + ", " +
                              format_double(b) + "]");
  }
  Estimate out;
  for (const auto& p : pieces) {
    out.value += p.e.value;
    out.error += p.e.error;
  }
  return out;
}

}  // namespace kolmo::quad
