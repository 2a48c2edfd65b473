#include "affsv/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "affsv/verify.hpp"

namespace affsv {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kDefaultSimulatePaths = 10;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<double> dt;
  std::optional<std::string> out_dir;
  std::string format = "json";
};

void apply_overrides(Scenario& s, const Globals& g, bool dt_is_sim) {
  if (g.seed) s.seed = *g.seed;
  if (g.paths) {
    if (*g.paths == 0) throw ConfigError("--paths must be > 0");
    s.paths = *g.paths;
  }
  if (g.dt) {
    if (!(*g.dt > 0.0)) throw ConfigError("--dt must be > 0");
    (dt_is_sim ? s.sim_dt : s.riccati_dt) = *g.dt;
  }
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

/// To <out-dir>/<file> when --out-dir is set, else to `out`.
void emit(const Globals& g, const std::string& file, const std::string& text, std::ostream& out) {
  if (g.out_dir) {
    const fs::path path = fs::path(*g.out_dir) / file;
    write_file(path, text);
    out << path.string() << '\n';
  } else {
    out << text;
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_validate(const Scenario& s, const Globals& g, std::ostream& out) {
  const ValidateOutcome v = validate_scenario(s);
  emit(g, report_stem(s) + ".validate.json", dump(v.report), out);
  return v.pass ? 0 : 1;
}

int cmd_riccati(const Scenario& s, const Globals& g, std::optional<std::size_t> only, std::ostream& out) {
  if (s.queries.empty()) throw ConfigError("riccati: scenario has no queries");
  if (only && *only >= s.queries.size()) throw ConfigError("riccati: --query out of range");
  Json all = Json::array();
  std::ostringstream csv;
  for (std::size_t k = 0; k < s.queries.size(); ++k) {
    if (only && k != *only) continue;
    const TransformQuery& q = s.queries[k];
    const RiccatiSolution sol = solve_riccati(s.riccati_input(q));
    if (g.format == "csv") {
      if (!only) csv << "# query " << k << '\n';
      write_csv(csv, sol);
    } else {
      all.push_back({{"index", k},
                     {"query", to_json(q)},
                     {"affine", to_json(affine_value(sol, s.y0, s.x0.sym(), q))},
                     {"solution", to_json(sol)}});
    }
  }
  if (g.format == "csv") {
    emit(g, report_stem(s) + ".riccati.csv", csv.str(), out);
  } else {
    emit(g, report_stem(s) + ".riccati.json", dump({{"name", s.name}, {"queries", all}}), out);
  }
  return 0;
}

struct PathRows {
  bool csv = true;
  std::ostringstream text;
  Json paths = Json::array();

  PathRows() = default;
  PathRows(const PathRows& o) : csv(o.csv), paths(o.paths) { text << o.text.str(); }

  void add(std::size_t path, const PathSample& s) {
    if (csv) {
      text.precision(17);
      for (std::size_t i = 0; i < s.grid.size(); ++i) {
        text << path << ',' << s.grid[i];
        const auto& x = s.x_path[i];
        for (Index r = 0; r < x.dim(); ++r) {
          for (Index c = r; c < x.dim(); ++c) text << ',' << x(r, c);
        }
        if (!s.y_path.empty()) {
          for (Index k = 0; k < s.y_path[i].size(); ++k) text << ',' << s.y_path[i](k);
        }
        text << '\n';
      }
      return;
    }
    Json xs = Json::array();
    Json ys = Json::array();
    Json jumps = Json::array();
    for (const auto& x : s.x_path) xs.push_back(to_json(x.sym()));
    for (const auto& y : s.y_path) ys.push_back(to_json(y));
    for (const auto& e : s.jump_log) jumps.push_back({{"t", e.time}, {"atom", e.atom}, {"xi", to_json(e.xi.sym())}});
    paths.push_back({{"path", path}, {"x", xs}, {"y", ys}, {"jumps", jumps}});
  }

  void merge(const PathRows& o) {
    text << o.text.str();
    for (const auto& p : o.paths) paths.push_back(p);
  }
};

int cmd_simulate(Scenario s, const Globals& g, bool no_y, unsigned threads, std::ostream& out) {
  if (!g.paths) s.paths = kDefaultSimulatePaths;
  SimConfig cfg = s.sim_config();
  cfg.simulate_y = !no_y;
  cfg.threads = threads;
  const PathSimulator sim(cfg);
  PathRows proto;
  proto.csv = g.format == "csv";
  const PathRows rows = run_paths(sim, proto);
  if (proto.csv) {
    std::ostringstream head;
    head << "path,t";
    const Index d = s.params.dim();
    for (Index r = 0; r < d; ++r) {
      for (Index c = r; c < d; ++c) head << ",x_" << r << '_' << c;
    }
    if (cfg.simulate_y) {
      for (Index k = 0; k < d; ++k) head << ",y_" << k;
    }
    head << '\n';
    emit(g, report_stem(s) + ".sim.csv", head.str() + rows.text.str(), out);
  } else {
    Json j = {{"name", s.name}, {"seed", s.seed}, {"dt", s.sim_dt}, {"grid", sim.grid()},
              {"warnings", sim.warnings()}, {"paths", rows.paths}};
    emit(g, report_stem(s) + ".sim.json", dump(j), out);
  }
  return 0;
}

int cmd_verify(const Scenario& s, const Globals& g, unsigned threads, std::ostream& out) {
  VerifyOptions opt;
  opt.threads = threads;
  const VerifyOutcome v = verify_scenario(s, opt);
  const fs::path dir = g.out_dir ? fs::path(*g.out_dir) : fs::path(".");
  const fs::path report = dir / (report_stem(s) + ".report.json");
  write_file(report, dump(v.report));
  if (!v.summary_csv.empty()) write_file(dir / (report_stem(s) + ".paths.csv"), v.summary_csv);

  out << s.name << " seed " << s.seed << " paths " << s.paths << '\n';
  if (v.report.contains("queries")) {
    std::size_t k = 0;
    for (const auto& q : v.report.at("queries")) {
      out << "  query " << k++ << ": affine " << q["affine"]["re"].get<double>() << (q["affine"]["im"].get<double>() < 0 ? " - " : " + ")
          << std::abs(q["affine"]["im"].get<double>()) << "i, mc " << q["mc"]["re"].get<double>()
          << (q["mc"]["im"].get<double>() < 0 ? " - " : " + ") << std::abs(q["mc"]["im"].get<double>())
          << "i, " << (q["pass"].get<bool>() ? "pass" : "FAIL") << '\n';
    }
  } else {
    out << "  validation failed\n";
  }
  out << (v.pass ? "PASS " : "FAIL ") << report.string() << '\n';
  return v.pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine stochastic volatility models on the cone of positive operators"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (overrides the scenario)");
  app.add_option("--paths", g.paths, "Number of Monte-Carlo paths");
  app.add_option("--dt", g.dt, "Time step: simulation step for simulate/verify, solver step for riccati");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  std::string config;
  std::string example_name;
  std::optional<std::size_t> query;
  bool no_y = false;
  bool run = false;
  unsigned threads = 0;

  auto* validate = app.add_subcommand("validate", "Check admissibility of a parameter set");
  validate->add_option("config", config, "Scenario or parameter JSON file")->required();
  auto* riccati = app.add_subcommand("riccati", "Solve the Riccati system for each query");
  riccati->add_option("config", config, "Scenario JSON file")->required();
  riccati->add_option("--query", query, "Only this query index");
  auto* simulate = app.add_subcommand("simulate", "Simulate paths of (X, Y)");
  simulate->add_option("config", config, "Scenario JSON file")->required();
  simulate->add_flag("--no-y", no_y, "Simulate X only");
  simulate->add_option("--threads", threads, "Worker threads (0: all cores)");
  auto* verify = app.add_subcommand("verify", "Compare transform values with Monte-Carlo estimates");
  verify->add_option("config", config, "Scenario JSON file")->required();
  verify->add_option("--threads", threads, "Worker threads (0: all cores)");
  auto* example = app.add_subcommand("example", "Print or run a shipped scenario");
  example->add_option("name", example_name, "Scenario name (omit to list)");
  example->add_flag("--run", run, "Run verify on the scenario");
  example->add_option("--threads", threads, "Worker threads (0: all cores)");
  for (auto* sub : {validate, riccati, simulate, verify, example}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (example->parsed()) {
      if (example_name.empty()) {
        for (const auto& n : shipped_scenario_names()) out << n << '\n';
        return 0;
      }
      if (!run) {
        out << shipped_scenario_text(example_name);
        return 0;
      }
      Scenario s = shipped_scenario(example_name);
      apply_overrides(s, g, true);
      return cmd_verify(s, g, threads, out);
    }
    Scenario s = load_scenario(config);
    apply_overrides(s, g, !riccati->parsed());
    if (validate->parsed()) return cmd_validate(s, g, out);
    if (riccati->parsed()) return cmd_riccati(s, g, query, out);
    if (simulate->parsed()) return cmd_simulate(s, g, no_y, threads, out);
    return cmd_verify(s, g, threads, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace affsv
