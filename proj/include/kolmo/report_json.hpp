#pragma once

// JSON form of the analysis types. Parsing goes through nlohmann::json;
// output goes through dump_json, which writes every float with 17
// significant digits (nlohmann's own dump prints the shortest round-trip
// form instead).

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "kolmo/analysis.hpp"

namespace kolmo {

using Json = nlohmann::json;

namespace detail {

inline void dump_string(std::string& out, const std::string& s) {
  // Reuse nlohmann's escaping for strings.
  out += Json(s).dump();
}

inline void dump_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  std::string s = format_double(v);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  out += s;
}

inline void dump_value(std::string& out, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  const char* colon = indent < 0 ? ":" : ": ";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_string(out, it.key());
        out += colon;
        dump_value(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_value(out, e, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      dump_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Serializes j; indent < 0 gives the compact form.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_value(out, j, indent, 0);
  return out;
}

inline Json point_json(Point p) { return Json::array({p.x, p.y}); }

inline Json to_json_value(const Matrix2& m) {
  return Json::array({Json::array({m.a11, m.a12}), Json::array({m.a21, m.a22})});
}

inline Json to_json_value(const StabilityReport& s) {
  Json ev = Json::array();
  for (const auto& e : s.eigenvalues) ev.push_back({{"re", e.real()}, {"im", e.imag()}});
  return {{"trace", s.trace},
          {"determinant", s.determinant},
          {"discriminant", s.discriminant},
          {"eigenvalues", ev},
          {"classification", std::string(to_string(s.classification))}};
}

inline Json to_json_value(const Equilibrium& e) {
  return {{"location", point_json(e.location)},
          {"kind", std::string(to_string(e.kind))},
          {"jacobian", to_json_value(e.jacobian)},
          {"stability", to_json_value(e.stability)},
          {"residual", e.residual}};
}

inline Json to_json_value(const Witness& w) {
  return {{"at", point_json(w.at)}, {"value", w.value}};
}

inline Json to_json_value(const HypothesisReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json j{{"name", c.name},
           {"group", c.group},
           {"evaluated", c.evaluated},
           {"passed", c.passed},
           {"informational", c.informational}};
    j["witness"] = c.witness ? to_json_value(*c.witness) : Json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  return {{"all_pass", r.all_pass()}, {"checks", checks}};
}

inline Json to_json_value(const BoundResult& b) {
  Json j{{"c", b.c},   {"v", b.v},         {"cv", b.cv},
         {"X", b.X},   {"level_value", b.level_value}, {"delta", b.delta}};
  j["closed_form_X"] = b.closed_form_X ? Json(*b.closed_form_X) : Json(nullptr);
  return j;
}

inline Json to_json_value(const Refusal& r) {
  Json failed = Json::array();
  for (const auto& f : r.failed)
    failed.push_back({{"name", f.name}, {"witness", to_json_value(f.witness)}});
  return {{"reason", r.reason}, {"failed", failed}, {"not_evaluated", r.not_evaluated}};
}

inline Json to_json_value(const ShotSummary& s) {
  Json j{{"eps", s.eps},
         {"max_x", s.max_x},
         {"end", point_json(s.end)},
         {"end_time", s.end_time},
         {"samples", s.samples},
         {"termination", std::string(to_string(s.termination))}};
  j["within_bound"] = s.within_bound ? Json(*s.within_bound) : Json(nullptr);
  return j;
}

inline Json to_json_value(const AnalysisReport& r) {
  auto opt = [](const auto& o) { return o ? Json(*o) : Json(nullptr); };
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  Json eqs = Json::array();
  for (const auto& e : r.equilibria) eqs.push_back(to_json_value(e));
  Json errors = Json::array();
  for (const auto& e : r.errors) errors.push_back({{"stage", e.stage}, {"message", e.message}});
  Json runtimes = Json::object();
  double total = 0.0;
  for (const auto& [stage, sec] : r.runtimes) {
    runtimes[stage] = sec;
    total += sec;
  }
  runtimes["total"] = total;

  Json j{{"schema", "kolmo.analysis/1"},
         {"model", r.model},
         {"description", r.description},
         {"parameters", params},
         {"equilibria", eqs}};
  j["variant"] = r.variant ? Json(std::string(to_string(*r.variant))) : Json(nullptr);
  j["c"] = opt(r.c);
  j["v"] = opt(r.v);
  j["X"] = r.bound ? Json(r.bound->X) : Json(nullptr);
  j["bound"] = r.bound ? to_json_value(*r.bound) : Json(nullptr);
  j["X_upper"] = opt(r.X_upper);
  j["X_below_upper"] = opt(r.X_below_upper);
  j["refusal"] = r.refusal ? to_json_value(*r.refusal) : Json(nullptr);
  j["hypotheses"] = to_json_value(r.hypotheses);
  j["shot"] = r.shot ? to_json_value(*r.shot) : Json(nullptr);
  j["errors"] = errors;
  j["runtimes"] = runtimes;
  return j;
}

}  // namespace kolmo
