#pragma once

// Marching squares on a regular grid, with crossings joined into polylines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "kolmo/types.hpp"

namespace kolmo {

using Polyline = std::vector<Point>;

/// Samples f on the (nx+1) x (ny+1) vertices of a grid over box.
/// Non-finite samples mark their cells as holes.
class ScalarGrid {
 public:
  ScalarGrid(const std::function<double(Point)>& f, const Rect& box, int nx, int ny)
      : box_(box), nx_(nx), ny_(ny), v_(static_cast<std::size_t>(nx + 1) * (ny + 1)) {
    if (nx < 1 || ny < 1) throw InvalidParameters("ScalarGrid: need at least one cell per axis");
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) v_[index(i, j)] = f(vertex(i, j));
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Rect& box() const { return box_; }
  double at(int i, int j) const { return v_[index(i, j)]; }
  Point vertex(int i, int j) const {
    return {box_.x_lo + box_.width() * i / nx_, box_.y_lo + box_.height() * j / ny_};
  }

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * (nx_ + 1) + i; }

  Rect box_;
  int nx_, ny_;
  std::vector<double> v_;
};

namespace detail {

// Edge ids: horizontal edge (i,j)-(i+1,j) is 2*(j*(nx+1)+i), vertical edge
// (i,j)-(i,j+1) is that plus one.
struct EdgeCoder {
  int nx;
  std::int64_t horizontal(int i, int j) const { return 2 * (std::int64_t(j) * (nx + 1) + i); }
  std::int64_t vertical(int i, int j) const { return horizontal(i, j) + 1; }
};

}  // namespace detail

/// Polylines of {f = level}. Closed loops repeat their first point at the end.
/// Output order depends only on the grid, so it is reproducible.
inline std::vector<Polyline> contour_lines(const ScalarGrid& g, double level) {
  const detail::EdgeCoder code{g.nx()};
  std::map<std::int64_t, Point> crossing;
  std::vector<std::pair<std::int64_t, std::int64_t>> segments;

  auto cross = [&](std::int64_t id, Point a, double fa, Point b, double fb) {
    if (!crossing.count(id)) {
      const double t = (level - fa) / (fb - fa);
      crossing[id] = a + t * (b - a);
    }
    return id;
  };

  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double f00 = g.at(i, j), f10 = g.at(i + 1, j), f11 = g.at(i + 1, j + 1),
                   f01 = g.at(i, j + 1);
      if (!std::isfinite(f00) || !std::isfinite(f10) || !std::isfinite(f11) ||
          !std::isfinite(f01))
        continue;
      const int mask = (f00 > level) | (f10 > level) << 1 | (f11 > level) << 2 |
                       (f01 > level) << 3;
      if (mask == 0 || mask == 15) continue;
      const Point p00 = g.vertex(i, j), p10 = g.vertex(i + 1, j), p11 = g.vertex(i + 1, j + 1),
                  p01 = g.vertex(i, j + 1);
      auto bottom = [&] { return cross(code.horizontal(i, j), p00, f00, p10, f10); };
      auto right = [&] { return cross(code.vertical(i + 1, j), p10, f10, p11, f11); };
      auto top = [&] { return cross(code.horizontal(i, j + 1), p01, f01, p11, f11); };
      auto left = [&] { return cross(code.vertical(i, j), p00, f00, p01, f01); };
      const bool center_above = 0.25 * (f00 + f10 + f11 + f01) > level;
      switch (mask) {
        case 1: case 14: segments.push_back({left(), bottom()}); break;
        case 2: case 13: segments.push_back({bottom(), right()}); break;
        case 3: case 12: segments.push_back({left(), right()}); break;
        case 4: case 11: segments.push_back({right(), top()}); break;
        case 6: case 9: segments.push_back({bottom(), top()}); break;
        case 7: case 8: segments.push_back({left(), top()}); break;
        case 5:
          if (center_above) {
            segments.push_back({left(), top()});
            segments.push_back({bottom(), right()});
          } else {
            segments.push_back({left(), bottom()});
            segments.push_back({right(), top()});
          }
          break;
        case 10:
          if (center_above) {
            segments.push_back({left(), bottom()});
            segments.push_back({right(), top()});
          } else {
            segments.push_back({left(), top()});
            segments.push_back({bottom(), right()});
          }
          break;
      }
    }
  }

  // Every crossing has at most two incident segments.
  std::map<std::int64_t, std::vector<std::size_t>> incident;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    incident[segments[k].first].push_back(k);
    incident[segments[k].second].push_back(k);
  }
  std::vector<bool> used(segments.size(), false);
  auto next_from = [&](std::int64_t id) -> long {
    for (std::size_t k : incident[id])
      if (!used[k]) return static_cast<long>(k);
    return -1;
  };
  auto walk = [&](std::int64_t start) {
    std::vector<std::int64_t> ids{start};
    for (long k = next_from(start); k >= 0; k = next_from(ids.back())) {
      used[k] = true;
      const auto& s = segments[k];
      ids.push_back(s.first == ids.back() ? s.second : s.first);
    }
    Polyline line;
    for (auto id : ids) line.push_back(crossing.at(id));
    return line;
  };

  std::vector<Polyline> out;
  // Open chains start at crossings with a single incident segment.
  for (const auto& [id, segs] : incident)
    if (segs.size() == 1 && !used[segs[0]]) out.push_back(walk(id));
  for (std::size_t k = 0; k < segments.size(); ++k)
    if (!used[k]) out.push_back(walk(segments[k].first));
  return out;
}

}  // namespace kolmo
