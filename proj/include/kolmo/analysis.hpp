#pragma once

// Full pipeline for one model: equilibria, classification, variant,
// Lyapunov tables, slope c, point v, hypotheses, bound X and a shot orbit.
// Module errors become report entries instead of escaping.

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kolmo/bound.hpp"
#include "kolmo/catalog.hpp"
#include "kolmo/equilibrium.hpp"
#include "kolmo/flow.hpp"
#include "kolmo/linearize.hpp"
#include "kolmo/lyapunov.hpp"

namespace kolmo {

struct AnalysisOptions {
  HypothesisGrid grid;
  ShootOptions shoot;
  bool run_shot = true;
};

/// One failed hypothesis, as cited by a refusal.
struct FailedHypothesis {
  std::string name;
  Witness witness;
};

struct Refusal {
  std::string reason;
  std::vector<FailedHypothesis> failed;  // evaluated failures, each with a witness
  std::vector<std::string> not_evaluated;
};

struct StageError {
  std::string stage;
  std::string message;
};

struct ShotSummary {
  double eps = 0.0;
  double max_x = 0.0;
  Point end;
  double end_time = 0.0;
  std::size_t samples = 0;
  Termination termination = Termination::max_time;
  std::optional<bool> within_bound;  // max_x <= X + 1e-4
};

struct AnalysisReport {
  std::string model;
  std::string description;
  Parameters parameters;
  std::vector<Equilibrium> equilibria;
  std::optional<Variant> variant;
  std::optional<double> c;
  std::optional<double> v;
  std::optional<BoundResult> bound;
  std::optional<Refusal> refusal;
  std::optional<bool> X_below_upper;  // against the model's known strict upper bound
  std::optional<double> X_upper;
  std::optional<ShotSummary> shot;
  HypothesisReport hypotheses;
  std::vector<StageError> errors;
  std::vector<std::pair<std::string, double>> runtimes;  // seconds per stage

  bool refused() const { return refusal.has_value(); }
};

/// The report together with the objects it was computed from, for callers
/// that go on to draw or integrate.
struct Analysis {
  CatalogEntry entry;
  std::optional<Equilibrium> attractor;
  std::optional<LyapunovFunction> lyapunov;
  std::optional<ShotResult> shot;
  AnalysisReport report;
};

namespace detail {

class StageTimer {
 public:
  explicit StageTimer(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
  template <typename F>
  auto operator()(const std::string& stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Record {
      std::vector<std::pair<std::string, double>>& out;
      std::string stage;
      std::chrono::steady_clock::time_point t0;
      ~Record() {
        out.emplace_back(stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                    .count());
      }
    } rec{out_, stage, t0};
    return f();
  }

 private:
  std::vector<std::pair<std::string, double>>& out_;
};

inline Refusal make_refusal(const HypothesisReport& rep) {
  Refusal r;
  for (const auto& c : rep.checks) {
    if (c.informational) continue;
    if (!c.evaluated) {
      r.not_evaluated.push_back(c.name);
    } else if (!c.passed) {
      r.failed.push_back({c.name, c.witness.value_or(Witness{})});
    }
  }
  r.reason = "bound refused: ";
  if (r.failed.empty()) {
    r.reason += "hypotheses not evaluated";
  } else {
    for (std::size_t i = 0; i < r.failed.size(); ++i) {
      if (i) r.reason += "; ";
      r.reason += "'" + r.failed[i].name + "' failed at " + format_point(r.failed[i].witness.at) +
                  " with value " + format_double(r.failed[i].witness.value);
    }
  }
  return r;
}

}  // namespace detail

inline Analysis analyze(CatalogEntry entry, const AnalysisOptions& opt = {}) {
  Analysis a{std::move(entry), {}, {}, {}, {}};
  AnalysisReport& rep = a.report;
  const SystemDefinition& sys = a.entry.system;
  rep.model = a.entry.id;
  rep.description = a.entry.description;
  rep.parameters = sys.parameters();
  rep.X_upper = a.entry.closed.X_upper;
  detail::StageTimer timed(rep.runtimes);
  auto record = [&](const char* stage, const std::exception& e) {
    rep.errors.push_back({stage, e.what()});
  };

  try {
    rep.equilibria.push_back(timed("origin", [&] { return origin_equilibrium(sys); }));
  } catch (const std::exception& e) {
    record("origin", e);
  }
  try {
    a.attractor = timed("equilibrium", [&] { return find_equilibrium(sys, a.entry.equilibrium_guess); });
    rep.equilibria.push_back(*a.attractor);
  } catch (const std::exception& e) {
    record("equilibrium", e);
    return a;
  }
  try {
    rep.variant = timed("variant", [&] { return select_variant(sys, *a.attractor); });
    a.lyapunov = timed("lyapunov", [&] { return build_lyapunov(sys, *a.attractor, *rep.variant); });
  } catch (const std::exception& e) {
    record("lyapunov", e);
    return a;
  }
  const LyapunovFunction& L = *a.lyapunov;

  try {
    rep.c = timed("slope", [&] { return unstable_slope_c(sys); });
  } catch (const std::exception& e) {
    record("slope", e);
  }
  if (rep.c) {
    try {
      rep.v = timed("intersection", [&] { return solve_v(sys, *rep.c, L.anchors().x); });
    } catch (const std::exception& e) {
      record("intersection", e);
    }
  }
  rep.hypotheses = timed("hypotheses", [&] { return check_hypotheses(sys, L, rep.c, rep.v, opt.grid); });

  if (!rep.hypotheses.all_pass()) {
    rep.refusal = detail::make_refusal(rep.hypotheses);
    return a;
  }
  try {
    rep.bound = timed("bound", [&] {
      return heteroclinic_bound(sys, L, *rep.c, *rep.v, rep.hypotheses, a.entry.closed.X);
    });
    if (rep.X_upper) rep.X_below_upper = rep.bound->X < *rep.X_upper;
  } catch (const std::exception& e) {
    record("bound", e);
    return a;
  }

  if (opt.run_shot) {
    try {
      a.shot = timed("shot", [&] { return shoot_heteroclinic(sys, L, *rep.c, opt.shoot); });
      ShotSummary s;
      s.eps = a.shot->eps;
      s.max_x = a.shot->max_x;
      s.end = a.shot->trajectory.back().state;
      s.end_time = a.shot->trajectory.back().t;
      s.samples = a.shot->trajectory.samples.size();
      s.termination = a.shot->trajectory.termination;
      s.within_bound = s.max_x <= rep.bound->X + 1e-4;
      rep.shot = s;
    } catch (const std::exception& e) {
      record("shot", e);
    }
  }
  return a;
}

inline Analysis analyze(const std::string& model, const Parameters& overrides = {},
                        const AnalysisOptions& opt = {}) {
  return analyze(load_model(model, overrides), opt);
}

}  // namespace kolmo
