#pragma once

// Trajectories of the Kolmogorov flow: Dormand-Prince 5(4) with local error
// control, shooting along the unstable tangent of the origin and backward
// integration toward the origin.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "kolmo/equilibrium.hpp"
#include "kolmo/lyapunov.hpp"
#include "kolmo/system.hpp"

namespace kolmo {

enum class Termination { reached_attractor, max_time, left_domain, step_underflow };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::reached_attractor: return "reached-attractor";
    case Termination::max_time: return "max-time";
    case Termination::left_domain: return "left-domain";
    case Termination::step_underflow: return "step-underflow";
  }
  return "max-time";
}

struct Sample {
  double t = 0.0;
  Point state;
  double error = 0.0;  // Euclidean norm of the embedded local error estimate
  std::optional<double> lyapunov;
};

struct Trajectory {
  std::vector<Sample> samples;
  Termination termination = Termination::max_time;

  const Sample& back() const { return samples.back(); }
};

struct IntegrateOptions {
  /// Stops with `reached_attractor` when it returns true for an accepted sample.
  std::function<bool(const Sample&)> stop;
  /// Attached to every sample inside its tables.
  const LyapunovFunction* lyapunov = nullptr;
  double max_step = INFINITY;
  std::size_t max_steps = 5'000'000;
};

namespace detail {

struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // fifth-order minus embedded fourth-order weights
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline void attach_lyapunov(Sample& s, const LyapunovFunction* L) {
  if (L && L->covers(s.state)) s.lyapunov = (*L)(s.state);
}

}  // namespace detail

/// Adaptive integration from p0 over [0, t_end]; t_end < 0 integrates
/// backward. Samples are the accepted steps.
inline Trajectory integrate(const SystemDefinition& sys, Point p0, double t_end, double rel_tol,
                            double abs_tol, const IntegrateOptions& opt = {}) {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2) || !(abs_tol >= 0.0 && abs_tol <= 1e-2))
    throw InvalidParameters("integrate: tolerances must lie in [1e-14, 1e-2]");
  sys.require_in_domain(p0);
  using DP = detail::DormandPrince;

  Trajectory traj;
  Sample first{0.0, p0, 0.0, std::nullopt};
  detail::attach_lyapunov(first, opt.lyapunov);
  traj.samples.push_back(first);
  if (opt.stop && opt.stop(first)) {
    traj.termination = Termination::reached_attractor;
    return traj;
  }
  if (t_end == 0.0) return traj;

  const double dir = t_end > 0.0 ? 1.0 : -1.0;
  const double span = std::abs(t_end);
  const double h_min = 1e-14 * span;
  auto f = [&](Point p) { return sys.velocity(p); };

  Point y = p0;
  double t = 0.0;
  Point k1 = f(y);
  auto scale = [&](double a, double b) {
    return abs_tol + rel_tol * std::max(std::abs(a), std::abs(b));
  };
  double h;
  {
    const double d0 = std::hypot(y.x / scale(y.x, 0), y.y / scale(y.y, 0));
    const double d1 = std::hypot(k1.x / scale(y.x, 0), k1.y / scale(y.y, 0));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, span, opt.max_step});
  }

  for (std::size_t n = 0; n < opt.max_steps; ++n) {
    const double remaining = span - std::abs(t);
    if (remaining <= 0.0) {
      traj.termination = Termination::max_time;
      return traj;
    }
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double hs = dir * h;
    const Point k2 = f(y + hs * (DP::a21 * k1));
    const Point k3 = f(y + hs * (DP::a31 * k1 + DP::a32 * k2));
    const Point k4 = f(y + hs * (DP::a41 * k1 + DP::a42 * k2 + DP::a43 * k3));
    const Point k5 = f(y + hs * (DP::a51 * k1 + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4));
    const Point k6 =
        f(y + hs * (DP::a61 * k1 + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 + DP::a65 * k5));
    const Point y_new =
        y + hs * (DP::b1 * k1 + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
    const Point k7 = f(y_new);
    const Point err = hs * (DP::e1 * k1 + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 + DP::e6 * k6 +
                            DP::e7 * k7);

    const bool ok_stages = detail::finite(k2) && detail::finite(k3) && detail::finite(k4) &&
                           detail::finite(k5) && detail::finite(k6) && detail::finite(y_new) &&
                           detail::finite(k7);
    double err_norm = INFINITY;
    if (ok_stages) {
      const double ex = err.x / scale(y.x, y_new.x), ey = err.y / scale(y.y, y_new.y);
      err_norm = std::sqrt(0.5 * (ex * ex + ey * ey));
    }

    if (err_norm <= 1.0) {
      t = last ? dir * span : t + hs;
      y = y_new;
      k1 = k7;
      Sample s{t, y, norm(err), std::nullopt};
      if (!sys.domain().contains(y)) {
        traj.samples.push_back(s);
        traj.termination = Termination::left_domain;
        return traj;
      }
      detail::attach_lyapunov(s, opt.lyapunov);
      traj.samples.push_back(s);
      if (opt.stop && opt.stop(s)) {
        traj.termination = Termination::reached_attractor;
        return traj;
      }
      if (last) {
        traj.termination = Termination::max_time;
        return traj;
      }
      const double fac = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h = std::min(h * fac, opt.max_step);
    } else {
      const double fac =
          std::isfinite(err_norm) ? std::clamp(0.9 * std::pow(err_norm, -0.25), 0.1, 0.9) : 0.25;
      h *= fac;
    }
    if (h < h_min) {
      traj.termination = Termination::step_underflow;
      return traj;
    }
  }
  traj.termination = Termination::max_time;
  return traj;
}

/// Largest first coordinate along the trajectory, refined between samples
/// with the cubic Hermite interpolant built from the vector field.
inline double max_first_coordinate(const SystemDefinition& sys, const Trajectory& traj) {
  double best = -INFINITY;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    best = std::max(best, traj.samples[i].state.x);
    if (i + 1 == traj.samples.size()) break;
    const Sample& a = traj.samples[i];
    const Sample& b = traj.samples[i + 1];
    const double h = b.t - a.t;
    const double x0 = a.state.x, x1 = b.state.x;
    const double d0 = sys.velocity(a.state).x * h, d1 = sys.velocity(b.state).x * h;
    // p(s) = (2s^3-3s^2+1) x0 + (s^3-2s^2+s) d0 + (-2s^3+3s^2) x1 + (s^3-s^2) d1
    const double A = 3 * (2 * x0 + d0 - 2 * x1 + d1);
    const double B = 2 * (-3 * x0 - 2 * d0 + 3 * x1 - d1);
    const double C = d0;
    auto p = [&](double s) {
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * x1 +
             (s3 - s2) * d1;
    };
    auto consider = [&](double s) {
      if (s > 0.0 && s < 1.0) best = std::max(best, p(s));
    };
    if (std::abs(A) < 1e-300) {
      if (B != 0.0) consider(-C / B);
    } else {
      const double disc = B * B - 4 * A * C;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        consider((-B + sq) / (2 * A));
        consider((-B - sq) / (2 * A));
      }
    }
  }
  return best;
}

struct ShootOptions {
  double eps = 0.0;   // 0 selects 1e-5 min(w, z)
  double tol = 1e-5;  // distance to (w, z) that counts as arrival
  double t_max = 1e3;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
};

struct ShotResult {
  Trajectory trajectory;
  double eps = 0.0;
  double max_x = 0.0;
  double lyapunov_tol = 0.0;
};

/// Lyapunov level below which a state is within roughly tol / sqrt(2) of
/// (w, z), from the local quadratic behaviour L ~ (Hc''(w) dx^2 + Gc''(z) dy^2) / 2.
inline double lyapunov_stop_level(const LyapunovFunction& L, double tol) {
  const Point wz = L.anchors();
  const double sx = 1e-6 * (1.0 + wz.x), sy = 1e-6 * (1.0 + wz.y);
  const double hxx = (L.H_prime(wz.x + sx) - L.H_prime(wz.x - sx)) / (2 * sx);
  const double gyy = (L.G_prime(wz.y + sy) - L.G_prime(wz.y - sy)) / (2 * sy);
  const double m = std::min(hxx, gyy);
  return m > 0.0 ? 0.25 * m * tol * tol : 0.0;
}

/// Integrates forward from (eps, c eps) until the state is within tol of the
/// interior equilibrium. Requires the origin to be a stationary saddle with
/// h(0) = 0 and G(0,0) = 0.
inline ShotResult shoot_heteroclinic(const SystemDefinition& sys, const LyapunovFunction& L,
                                     double c, const ShootOptions& opt = {}) {
  const Point wz = L.anchors();
  if (sys.h(0.0) != 0.0 || sys.G(0.0, 0.0) != 0.0)
    throw NotASaddle("origin hypotheses fail: h(0) = " + format_double(sys.h(0.0)) +
                     ", G(0,0) = " + format_double(sys.G(0.0, 0.0)));
  const Equilibrium origin = origin_equilibrium(sys);
  if (origin.stability.classification != Stability::saddle)
    throw NotASaddle("origin is " + std::string(to_string(origin.stability.classification)));

  ShotResult out;
  out.eps = opt.eps > 0.0 ? opt.eps : 1e-5 * std::min(wz.x, wz.y);
  if (!(out.eps >= 1e-8 && out.eps <= 1e-2))
    throw InvalidParameters("shoot_heteroclinic: eps must lie in [1e-8, 1e-2], got " +
                            format_double(out.eps));
  out.lyapunov_tol = lyapunov_stop_level(L, opt.tol);

  IntegrateOptions io;
  io.lyapunov = &L;
  const double level = out.lyapunov_tol, tol = opt.tol;
  io.stop = [wz, level, tol](const Sample& s) {
    return (s.lyapunov && *s.lyapunov < level) || distance(s.state, wz) <= tol;
  };
  out.trajectory = integrate(sys, {out.eps, c * out.eps}, opt.t_max, opt.rel_tol, opt.abs_tol, io);
  if (out.trajectory.termination != Termination::reached_attractor)
    throw NoConvergence("heteroclinic shot ended with " +
                        std::string(to_string(out.trajectory.termination)) + " at " +
                        format_point(out.trajectory.back().state));
  out.max_x = max_first_coordinate(sys, out.trajectory);
  return out;
}

// Backward in time the stable direction of the origin expands, so errors
// transverse to the orbit grow; the tolerance is tighter than for forward runs.
struct BackwardSlopeOptions {
  double stop_radius = 1e-6;
  double rel_tol = 1e-13;
  double abs_tol = 1e-18;
};

/// Integrates backward from p0 until |state| <= stop_radius (or -t_back)
/// and returns y/x at the final sample.
inline double backward_slope(const SystemDefinition& sys, Point p0, double t_back,
                             const BackwardSlopeOptions& opt = {}) {
  IntegrateOptions io;
  const double r = opt.stop_radius;
  io.stop = [r](const Sample& s) { return norm(s.state) <= r; };
  const Trajectory traj = integrate(sys, p0, -std::abs(t_back), opt.rel_tol, opt.abs_tol, io);
  if (traj.termination != Termination::reached_attractor)
    throw DidNotApproachOrigin("backward integration from " + format_point(p0) + " ended with " +
                               std::string(to_string(traj.termination)) + " at " +
                               format_point(traj.back().state));
  const Point q = traj.back().state;
  return q.y / q.x;
}

/// Fixed-stride resampling with cubic Hermite interpolation between samples.
inline Trajectory resample(const SystemDefinition& sys, const Trajectory& traj, double stride) {
  if (traj.samples.empty() || !(stride > 0.0)) return traj;
  Trajectory out;
  out.termination = traj.termination;
  const double t0 = traj.samples.front().t, t1 = traj.samples.back().t;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::size_t i = 0;
  for (double t = t0; dir * (t1 - t) >= 0.0; t += dir * stride) {
    while (i + 1 < traj.samples.size() && dir * (traj.samples[i + 1].t - t) < 0.0) ++i;
    if (i + 1 >= traj.samples.size()) {
      out.samples.push_back(traj.samples.back());
      break;
    }
    const Sample& a = traj.samples[i];
    const Sample& b = traj.samples[i + 1];
    const double h = b.t - a.t, s = (t - a.t) / h;
    const Point fa = sys.velocity(a.state), fb = sys.velocity(b.state);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2,
                 h11 = s3 - s2;
    Sample q;
    q.t = t;
    q.state = h00 * a.state + (h10 * h) * fa + h01 * b.state + (h11 * h) * fb;
    q.error = std::max(a.error, b.error);
    if (a.lyapunov && b.lyapunov) q.lyapunov = (1 - s) * *a.lyapunov + s * *b.lyapunov;
    out.samples.push_back(q);
  }
  return out;
}

/// CSV with header `t,x,y,err,L`; L is empty where no Lyapunov value is attached.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,y,err,L\n";
  for (const auto& s : traj.samples) {
    os << format_double(s.t) << ',' << format_double(s.state.x) << ',' << format_double(s.state.y)
       << ',' << format_double(s.error) << ',';
    if (s.lyapunov) os << format_double(*s.lyapunov);
    os << '\n';
  }
}

}  // namespace kolmo
