#pragma once

// Command implementations behind the kolmo executable. Kept in a header so
// the tests can drive them in-process.
//
// Exit codes: 0 success, 2 bound refused because a hypothesis failed,
// 1 any other error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kolmo/kolmo.hpp"

namespace kolmo::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_refused = 2;

struct Settings {
  std::string model;
  std::vector<std::string> sets;  // key=value
  std::string config;
  std::string out = "-";
  double tol = 1e-10;
  double t_end = 50.0;
  std::string grid;
  std::string start;
  double stride = 0.0;
  std::string component = "H";
};

inline std::pair<int, int> parse_grid(const std::string& s) {
  int nx = 0, ny = 0;
  char sep = 0, extra = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c", &nx, &sep, &ny, &extra) != 3 || (sep != 'x' && sep != 'X') ||
      nx < 1 || ny < 1 || nx > 10000 || ny > 10000)
    throw InvalidParameters("--grid expects NxM with positive N, M, got '" + s + "'");
  return {nx, ny};
}

inline Point parse_point(const std::string& s) {
  double x = 0, y = 0;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf%c", &x, &y, &extra) != 2)
    throw InvalidParameters("--start expects x,y, got '" + s + "'");
  return {x, y};
}

inline Parameters parse_sets(const std::vector<std::string>& sets) {
  Parameters p;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidParameters("--set expects key=value, got '" + kv + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(kv.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != kv.size() - eq - 1)
      throw InvalidParameters("--set value for '" + kv.substr(0, eq) + "' is not a number");
    p[kv.substr(0, eq)] = v;
  }
  return p;
}

/// Fills unset fields from a JSON config file. Command-line values win.
/// Recognised keys: model, set (object), out, tol, t_end, grid, start ([x,y]).
inline void apply_config(Settings& s, const CLI::App& sub) {
  if (s.config.empty()) return;
  std::ifstream in(s.config);
  if (!in) throw Error("cannot read config '" + s.config + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error("config '" + s.config + "': " + e.what());
  }
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  try {
    if (j.contains("model") && !given("--model")) s.model = j.at("model").get<std::string>();
    if (j.contains("set")) {
      std::vector<std::string> from_file;
      for (const auto& [k, v] : j.at("set").items())
        from_file.push_back(k + "=" + format_double(v.get<double>()));
      // Later entries override earlier ones in parse_sets.
      from_file.insert(from_file.end(), s.sets.begin(), s.sets.end());
      s.sets = std::move(from_file);
    }
    if (j.contains("out") && !given("--out")) s.out = j.at("out").get<std::string>();
    if (j.contains("tol") && !given("--tol")) s.tol = j.at("tol").get<double>();
    if (j.contains("t_end") && !given("--t-end")) s.t_end = j.at("t_end").get<double>();
    if (j.contains("grid") && !given("--grid")) s.grid = j.at("grid").get<std::string>();
    if (j.contains("start") && !given("--start")) {
      const auto& p = j.at("start");
      s.start = format_double(p.at(0).get<double>()) + "," + format_double(p.at(1).get<double>());
    }
  } catch (const Json::exception& e) {
    throw Error("config '" + s.config + "': " + e.what());
  }
}

inline void emit(const Settings& s, const std::string& text, std::ostream& out) {
  if (s.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f) throw Error("cannot write '" + s.out + "'");
  f << text;
  if (!f) throw Error("write to '" + s.out + "' failed");
}

inline int cmd_list(std::ostream& out) {
  for (const auto& m : list_models()) out << m.id << "\t" << m.description << "\n";
  return exit_ok;
}

inline int cmd_analyze(const Settings& s, std::ostream& out, std::ostream& err) {
  AnalysisOptions opt;
  if (!s.grid.empty()) {
    const auto [nx, ny] = parse_grid(s.grid);
    opt.grid.nx = nx;
    opt.grid.ny = ny;
  }
  const Analysis a = analyze(s.model, parse_sets(s.sets), opt);
  const AnalysisReport& r = a.report;
  emit(s, dump_json(to_json_value(r)) + "\n", out);
  std::ostream& note = s.out == "-" ? err : out;
  if (r.bound) {
    note << r.model << ": X = " << format_double(r.bound->X);
    if (r.X_below_upper) note << (*r.X_below_upper ? " < " : " >= ") << format_double(*r.X_upper);
    note << "\n";
  }
  if (r.refusal) {
    err << r.model << ": " << r.refusal->reason << "\n";
    return exit_refused;
  }
  for (const auto& e : r.errors)
    if (e.stage != "slope") {
      err << r.model << ": " << e.stage << ": " << e.message << "\n";
      return exit_error;
    }
  return exit_ok;
}

inline int cmd_simulate(const Settings& s, std::ostream& out, std::ostream& err) {
  const CatalogEntry entry = load_model(s.model, parse_sets(s.sets));
  const SystemDefinition& sys = entry.system;
  const Point start = s.start.empty() ? entry.equilibrium_guess : parse_point(s.start);
  sys.require_in_domain(start);
  std::optional<LyapunovFunction> L;
  try {
    const Equilibrium eq = find_equilibrium(sys, entry.equilibrium_guess);
    L = build_lyapunov(sys, eq, select_variant(sys, eq));
  } catch (const Error& e) {
    err << "note: no Lyapunov values attached: " << e.what() << "\n";
  }
  IntegrateOptions io;
  io.lyapunov = L ? &*L : nullptr;
  Trajectory t = integrate(sys, start, s.t_end, s.tol, std::max(1e-14, s.tol * 1e-2), io);
  if (s.stride > 0.0) t = resample(sys, t, s.stride);
  std::ostringstream csv;
  write_trajectory_csv(csv, t);
  emit(s, csv.str(), out);
  if (t.termination == Termination::step_underflow) {
    err << "integration stopped: step underflow at t = " << format_double(t.back().t) << "\n";
    return exit_error;
  }
  if (t.termination == Termination::left_domain) {
    err << "integration stopped: left the domain at " << format_point(t.back().state) << "\n";
    return exit_error;
  }
  return exit_ok;
}

inline int cmd_portrait(const Settings& s, std::ostream& out, std::ostream& err) {
  PortraitOptions popt;
  if (!s.grid.empty()) std::tie(popt.arrows_x, popt.arrows_y) = parse_grid(s.grid);
  const Analysis a = analyze(s.model, parse_sets(s.sets));
  emit(s, render_portrait(a, popt), out);
  if (a.report.refusal) err << a.report.model << ": drawn without bound layers; " << a.report.refusal->reason << "\n";
  return exit_ok;
}

inline int cmd_export_lyapunov(const Settings& s, std::ostream& out) {
  const CatalogEntry entry = load_model(s.model, parse_sets(s.sets));
  const SystemDefinition& sys = entry.system;
  const Equilibrium eq = find_equilibrium(sys, entry.equilibrium_guess);
  const LyapunovFunction L = build_lyapunov(sys, eq, select_variant(sys, eq));
  if (s.component != "H" && s.component != "G")
    throw InvalidParameters("--component must be H or G, got '" + s.component + "'");
  std::ostringstream csv;
  write_table_csv(csv, s.component == "H" ? L.H_table() : L.G_table());
  emit(s, csv.str(), out);
  return exit_ok;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Lyapunov functions, heteroclinic bounds and phase portraits for planar Kolmogorov systems",
               "kolmo"};
  app.require_subcommand(1);
  Settings s;

  auto model_opts = [&s](CLI::App* sub) {
    sub->add_option("--model,-m", s.model, "model id (see `kolmo list`)");
    sub->add_option("--set", s.sets, "parameter override key=value, repeatable");
    sub->add_option("--config", s.config, "JSON file with defaults for these options");
    sub->add_option("--out,-o", s.out, "output path, - for stdout");
  };
  CLI::App* list = app.add_subcommand("list", "list catalog models");
  CLI::App* an = app.add_subcommand("analyze", "run the full analysis and write a JSON report");
  model_opts(an);
  an->add_option("--grid", s.grid, "hypothesis grid NxM (default 200x200)");
  CLI::App* sim = app.add_subcommand("simulate", "integrate one trajectory and write CSV");
  model_opts(sim);
  sim->add_option("--start", s.start, "initial point x,y");
  sim->add_option("--t-end", s.t_end, "end time, negative for backward integration");
  sim->add_option("--tol", s.tol, "relative tolerance in [1e-14, 1e-2]");
  sim->add_option("--stride", s.stride, "resample at a fixed time stride");
  CLI::App* por = app.add_subcommand("portrait", "write an SVG phase portrait");
  model_opts(por);
  por->add_option("--grid", s.grid, "vector-field arrows NxM (default 20x20)");
  CLI::App* ex = app.add_subcommand("export-lyapunov", "write a Lyapunov component table as CSV");
  model_opts(ex);
  ex->add_option("--component", s.component, "H or G");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_error;
  }

  try {
    if (*list) return cmd_list(out);
    CLI::App* sub = app.get_subcommands().front();
    apply_config(s, *sub);
    if (s.model.empty()) throw InvalidParameters("--model is required");
    if (*an) return cmd_analyze(s, out, err);
    if (*sim) return cmd_simulate(s, out, err);
    if (*por) return cmd_portrait(s, out, err);
    if (*ex) return cmd_export_lyapunov(s, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_error;
}

}  // namespace kolmo::cli
