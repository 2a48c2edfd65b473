#include "affsv/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace affsv {

namespace {

const std::map<std::string, std::string>& shipped() {
  static const std::map<std::string, std::string> table = {
#include "shipped_scenarios.inc"
  };
  return table;
}

}  // namespace

double Scenario::horizon() const {
  double t = 0.0;
  for (const auto& q : queries) t = std::max(t, q.t);
  return t > 0.0 ? t : 1.0;
}

SimConfig Scenario::sim_config() const {
  SimConfig c;
  c.params = params;
  c.noise = noise;
  c.gen = gen;
  c.x0 = x0;
  c.y0 = y0;
  c.horizon = horizon();
  c.dt = sim_dt;
  c.n_paths = paths;
  c.seed = seed;
  return c;
}

RiccatiInput Scenario::riccati_input(const TransformQuery& q) const {
  RiccatiInput in;
  in.params = params;
  in.noise = noise;
  in.gen = gen;
  in.u1_imag = q.v1;
  in.u2 = q.u2;
  in.horizon = q.t;
  in.dt = std::min(riccati_dt, q.t);
  return in;
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  Scenario s;
  s.name = j.value("name", std::string("scenario"));
  s.params = params_from_json(j);
  const Index d = s.params.dim();
  if (!j.contains("noise")) throw ConfigError("scenario: missing field \"noise\"");
  s.noise = noise_from_json(j.at("noise"));
  if (s.noise.matrix.dim() != d) throw ConfigError("noise matrix: dimension does not match b");
  s.gen = generator_from_json(j.contains("generator") ? j.at("generator") : Json(), d);
  s.x0 = j.contains("x0") ? psd_from_json(j.at("x0"), "x0") : PsdMatrix::zero(d);
  if (s.x0.dim() != d) throw ConfigError("x0: dimension does not match b");
  s.y0 = j.contains("y0") ? vector_from_json(j.at("y0"), "y0") : HVector::Zero(d);
  if (s.y0.size() != d) throw ConfigError("y0: dimension does not match b");
  if (j.contains("queries")) {
    if (!j.at("queries").is_array()) throw ConfigError("queries: expected an array");
    for (const auto& q : j.at("queries")) s.queries.push_back(query_from_json(q, d));
  }
  if (j.contains("extra_states")) {
    for (const auto& x : j.at("extra_states")) {
      s.extra_states.push_back(psd_from_json(x, "extra_states"));
      if (s.extra_states.back().dim() != d) throw ConfigError("extra_states: dimension does not match b");
    }
  }
  try {
    if (j.contains("riccati")) s.riccati_dt = j.at("riccati").value("dt", s.riccati_dt);
    if (j.contains("sim")) {
      s.sim_dt = j.at("sim").value("dt", s.sim_dt);
      s.paths = j.at("sim").value("paths", s.paths);
    }
    s.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (!(s.riccati_dt > 0.0) || !(s.sim_dt > 0.0)) throw ConfigError("scenario: dt must be > 0");
  if (s.paths == 0) throw ConfigError("scenario: paths must be > 0");
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json q = Json::array();
  for (const auto& x : s.queries) q.push_back(to_json(x));
  return {{"name", s.name},
          {"b", to_json(s.params.b)},
          {"B", to_json(s.params.B)},
          {"jumps", to_json(s.params.jumps)},
          {"noise", to_json(s.noise)},
          {"generator", to_json(s.gen)},
          {"x0", to_json(s.x0.sym())},
          {"y0", to_json(s.y0)},
          {"queries", q},
          {"riccati", {{"dt", s.riccati_dt}}},
          {"sim", {{"dt", s.sim_dt}, {"paths", s.paths}}},
          {"seed", s.seed}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

std::vector<std::string> shipped_scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : shipped()) names.push_back(name);
  return names;
}

const std::string& shipped_scenario_text(const std::string& name) {
  const auto it = shipped().find(name);
  if (it == shipped().end()) throw ConfigError("unknown shipped scenario \"" + name + "\"");
  return it->second;
}

Scenario shipped_scenario(const std::string& name) {
  try {
    return scenario_from_json(Json::parse(shipped_scenario_text(name)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

}  // namespace affsv
