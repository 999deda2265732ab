// Sweeps alpha in predator-prey I and prints the slope c, the ray-isocline
// intersection v and the bound X next to the largest x on the shot orbit.

#include <cstdio>

#include "kolmo/kolmo.hpp"

int main() {
  using namespace kolmo;
  std::printf("%6s %10s %10s %10s %10s %10s\n", "alpha", "w", "c", "v", "X", "max x");
  for (double alpha : {2.0, 4.0, 6.0, 8.0, 12.0, 16.0}) {
    const Analysis a = analyze("pp1", {{"alpha", alpha}});
    const AnalysisReport& r = a.report;
    if (!r.bound) {
      std::printf("%6g  %s\n", alpha,
                  r.refusal ? r.refusal->reason.c_str() : r.errors.empty() ? "no bound" : r.errors.front().message.c_str());
      continue;
    }
    std::printf("%6g %10.6f %10.6f %10.6f %10.6f %10.6f\n", alpha, a.attractor->location.x, r.bound->c,
                r.bound->v, r.bound->X, r.shot ? r.shot->max_x : NAN);
  }
  return 0;
}
