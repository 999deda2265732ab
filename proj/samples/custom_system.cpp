// Analyzes a user-defined Kolmogorov system given only g, h, G and H.
// The partials fall back to central differences.
//
//   x' = y - x,  y' = y (3 / (1 + x) - 3y/2)

#include <cstdio>

#include "kolmo/kolmo.hpp"

int main() {
  using namespace kolmo;
  SystemFunctions f;
  f.g = [](double) { return 1.0; };
  f.h = [](double y) { return y; };
  f.G = [](double x, double y) { return y - x; };
  f.H = [](double x, double y) { return 3.0 / (1.0 + x) - 1.5 * y; };

  CatalogEntry entry{"custom", "x' = y - x, y' = y(3/(1+x) - 3y/2)",
                     SystemDefinition("custom", f, {0.0, 10.0, 0.0, 10.0}),
                     {1.0, 1.0},
                     {0.05, 4.0, 0.05, 4.0},
                     {0.1, 4.0, 0.1, 4.0},
                     {}};
  const Analysis a = analyze(std::move(entry));
  const AnalysisReport& r = a.report;
  for (const auto& e : r.equilibria)
    std::printf("%-18s %-14s at %s\n", std::string(to_string(e.kind)).c_str(),
                std::string(to_string(e.stability.classification)).c_str(), format_point(e.location).c_str());
  if (r.refusal) {
    std::printf("bound refused: %s\n", r.refusal->reason.c_str());
    return 0;
  }
  for (const auto& e : r.errors) std::printf("%s: %s\n", e.stage.c_str(), e.message.c_str());
  if (r.bound) std::printf("c = %.6f  v = %.6f  X = %.6f\n", r.bound->c, r.bound->v, r.bound->X);
  if (r.shot) std::printf("shot orbit max x = %.6f\n", r.shot->max_x);
  return 0;
}
