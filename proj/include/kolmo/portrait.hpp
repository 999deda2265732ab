#pragma once

// Static SVG phase portrait: vector field, isoclines G = 0 and H = 0, the
// unstable tangent ray, the Lyapunov level through (w, cv), the heteroclinic
// orbit and the equilibrium markers. Layers whose data were refused are
// left out.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kolmo/analysis.hpp"
#include "kolmo/contour.hpp"
#include "kolmo/flow.hpp"

namespace kolmo {

struct PortraitOptions {
  int arrows_x = 20;
  int arrows_y = 20;
  int contour_cells = 240;
  int width = 800;
  int height = 640;
};

namespace detail {

class SvgCanvas {
 public:
  SvgCanvas(const Rect& box, int width, int height) : box_(box), w_(width), h_(height) {}

  double px(double x) const { return margin + (x - box_.x_lo) / box_.width() * (w_ - 2 * margin); }
  double py(double y) const {
    return h_ - margin - (y - box_.y_lo) / box_.height() * (h_ - 2 * margin);
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  std::string path_data(const Polyline& line) const {
    std::string d;
    for (std::size_t i = 0; i < line.size(); ++i) {
      d += i ? " L" : "M";
      d += num(px(line[i].x)) + "," + num(py(line[i].y));
    }
    return d;
  }

  const Rect& box() const { return box_; }
  int width() const { return w_; }
  int height() const { return h_; }

  static constexpr double margin = 48.0;

 private:
  Rect box_;
  int w_, h_;
};

// Clips the segment a->b to the box by parameter, returns false if empty.
inline bool clip_to(const Rect& r, Point& a, Point& b) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x_lo, r.x_hi - a.x, a.y - r.y_lo, r.y_hi - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) t0 = std::max(t0, t);
    else t1 = std::min(t1, t);
  }
  if (t0 > t1) return false;
  const Point a0 = a;
  a = a0 + t0 * (b - a0);
  b = a0 + t1 * (b - a0);
  return true;
}

inline Rect portrait_box(const Analysis& a) {
  const Rect& d = a.entry.system.domain();
  double xm = d.x_hi, ym = d.y_hi;
  if (a.attractor) {
    const Point wz = a.attractor->location;
    xm = 2.0 * wz.x;
    ym = 2.0 * wz.y;
    if (a.report.bound) {
      xm = std::max(xm, a.report.bound->X);
      ym = std::max(ym, a.report.bound->cv);
    }
    xm *= 1.15;
    ym *= 1.15;
  }
  return {d.x_lo, std::min(xm, d.x_hi), d.y_lo, std::min(ym, d.y_hi)};
}

}  // namespace detail

inline std::string render_portrait(const Analysis& a, const PortraitOptions& opt = {}) {
  const SystemDefinition& sys = a.entry.system;
  const Rect box = detail::portrait_box(a);
  const detail::SvgCanvas cv(box, opt.width, opt.height);
  using detail::SvgCanvas;
  std::string s;
  s.reserve(1 << 16);
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
       "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " + std::to_string(opt.height) +
       "\">\n";
  s += "<title>phase portrait: " + a.report.model + "</title>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
       std::to_string(opt.height) + "\" fill=\"white\"/>\n";

  // Axes and frame.
  s += "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<rect x=\"" + SvgCanvas::num(cv.px(box.x_lo)) + "\" y=\"" + SvgCanvas::num(cv.py(box.y_hi)) +
       "\" width=\"" + SvgCanvas::num(cv.px(box.x_hi) - cv.px(box.x_lo)) + "\" height=\"" +
       SvgCanvas::num(cv.py(box.y_lo) - cv.py(box.y_hi)) + "\"/>\n";
  s += "</g>\n";
  s += "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  s += "<text x=\"" + SvgCanvas::num(cv.px(box.x_hi)) + "\" y=\"" +
       SvgCanvas::num(cv.py(box.y_lo) + 28) + "\" text-anchor=\"end\">x (max " +
       format_double(box.x_hi) + ")</text>\n";
  s += "<text x=\"" + SvgCanvas::num(cv.px(box.x_lo)) + "\" y=\"" +
       SvgCanvas::num(cv.py(box.y_hi) - 10) + "\">y (max " + format_double(box.y_hi) + ")</text>\n";
  s += "</g>\n";

  // Vector field, arrows of fixed length in direction of the flow.
  {
    s += "<g id=\"vector-field\" stroke=\"#888888\" stroke-width=\"1\" fill=\"none\">\n";
    const double len = 0.4 * std::min((opt.width - 2 * SvgCanvas::margin) / opt.arrows_x,
                                      (opt.height - 2 * SvgCanvas::margin) / opt.arrows_y);
    for (int j = 0; j < opt.arrows_y; ++j) {
      for (int i = 0; i < opt.arrows_x; ++i) {
        const Point p{box.x_lo + box.width() * (i + 0.5) / opt.arrows_x,
                      box.y_lo + box.height() * (j + 0.5) / opt.arrows_y};
        const Point f = sys.velocity(p);
        // Direction in screen space.
        const double dx = f.x / box.width(), dy = -f.y / box.height();
        const double n = std::hypot(dx, dy);
        if (!(n > 0.0) || !std::isfinite(n)) continue;
        const double ux = dx / n, uy = dy / n;
        const double x0 = cv.px(p.x) - 0.5 * len * ux, y0 = cv.py(p.y) - 0.5 * len * uy;
        const double x1 = x0 + len * ux, y1 = y0 + len * uy;
        const double hx = -0.3 * len * ux, hy = -0.3 * len * uy;
        s += "<path d=\"M" + SvgCanvas::num(x0) + "," + SvgCanvas::num(y0) + " L" +
             SvgCanvas::num(x1) + "," + SvgCanvas::num(y1) + " M" +
             SvgCanvas::num(x1 + hx - 0.5 * hy) + "," + SvgCanvas::num(y1 + hy + 0.5 * hx) + " L" +
             SvgCanvas::num(x1) + "," + SvgCanvas::num(y1) + " L" +
             SvgCanvas::num(x1 + hx + 0.5 * hy) + "," + SvgCanvas::num(y1 + hy - 0.5 * hx) +
             "\"/>\n";
      }
    }
    s += "</g>\n";
  }

  auto contour_layer = [&](const std::string& id, const std::string& cls, const std::string& color,
                           const std::function<double(Point)>& f, double level) {
    const ScalarGrid grid(f, box, opt.contour_cells, opt.contour_cells);
    std::string out = "<g id=\"" + id + "\" class=\"" + cls + "\" stroke=\"" + color +
                      "\" stroke-width=\"1.5\" fill=\"none\">\n";
    for (const auto& line : contour_lines(grid, level))
      if (line.size() >= 2) out += "<path d=\"" + cv.path_data(line) + "\"/>\n";
    return out + "</g>\n";
  };

  // Isoclines x_plus (G = 0) and x_minus (H = 0).
  s += "<g id=\"isoclines\">\n";
  s += contour_layer("isocline-x-plus", "G=0", "#1f77b4",
                     [&](Point p) { return sys.G(p.x, p.y); }, 0.0);
  s += contour_layer("isocline-x-minus", "H=0", "#ff7f0e",
                     [&](Point p) { return sys.H(p.x, p.y); }, 0.0);
  s += "</g>\n";

  const std::optional<double>& c = a.report.c;
  if (c) {
    Point o{0.0, 0.0}, far{box.x_hi, *c * box.x_hi};
    if (detail::clip_to(box, o, far)) {
      s += "<g id=\"unstable-tangent\" stroke=\"#2ca02c\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6,4\" fill=\"none\" data-slope=\"" +
           format_double(*c) + "\">\n";
      s += "<path d=\"" + cv.path_data({o, far}) + "\"/>\n</g>\n";
    }
  }

  if (a.report.bound && a.lyapunov) {
    const LyapunovFunction& L = *a.lyapunov;
    const double level = L({L.anchors().x, a.report.bound->cv});
    auto f = [&L](Point p) { return L.covers(p) ? L(p) : NAN; };
    std::string layer = contour_layer("lyapunov-level", "L=L(w,cv)", "#9467bd", f, level);
    layer.insert(layer.find('>'), " data-level=\"" + format_double(level) + "\"");
    s += layer;
  }

  if (a.shot) {
    s += "<g id=\"heteroclinic\" stroke=\"#d62728\" stroke-width=\"2\" fill=\"none\" data-max-x=\"" +
         format_double(a.shot->max_x) + "\">\n";
    Polyline line;
    for (const auto& smp : a.shot->trajectory.samples) line.push_back(smp.state);
    s += "<path d=\"" + cv.path_data(line) + "\"/>\n</g>\n";
  } else if (a.attractor) {
    // No heteroclinic to draw: show one orbit approaching the attractor.
    const Point wz = a.attractor->location;
    Point start{std::min(1.8 * wz.x, 0.95 * box.x_hi), 0.3 * wz.y};
    try {
      IntegrateOptions io;
      io.stop = [wz](const Sample& smp) { return distance(smp.state, wz) < 1e-4; };
      const Trajectory t = integrate(sys, start, 200.0, 1e-9, 1e-12, io);
      Polyline line;
      for (const auto& smp : t.samples) line.push_back(smp.state);
      s += "<g id=\"trajectory-sample\" stroke=\"#8c564b\" stroke-width=\"1.5\" fill=\"none\" "
           "data-start-x=\"" + format_double(start.x) + "\" data-start-y=\"" +
           format_double(start.y) + "\" data-classification=\"" +
           std::string(to_string(a.attractor->stability.classification)) + "\">\n";
      s += "<path d=\"" + cv.path_data(line) + "\"/>\n</g>\n";
    } catch (const Error&) {
    }
  }

  s += "<g id=\"equilibria\" stroke=\"black\" stroke-width=\"1\">\n";
  auto marker = [&](const std::string& cls, Point p, const char* fill) {
    s += "<circle class=\"" + cls + "\" cx=\"" + SvgCanvas::num(cv.px(p.x)) + "\" cy=\"" +
         SvgCanvas::num(cv.py(p.y)) + "\" r=\"4\" fill=\"" + fill + "\" data-x=\"" +
         format_double(p.x) + "\" data-y=\"" + format_double(p.y) + "\"/>\n";
  };
  for (const auto& e : a.report.equilibria)
    marker(std::string(to_string(e.kind)) + " " + std::string(to_string(e.stability.classification)),
           e.location, e.kind == EquilibriumKind::origin_saddle ? "white" : "black");
  if (a.report.bound) marker("ray-isocline-intersection", {a.report.bound->v, a.report.bound->cv}, "#2ca02c");
  s += "</g>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace kolmo
