#pragma once

// Scenario files: a parameter set together with initial state, transform
// queries and simulation settings. Shipped scenarios are compiled in.

#include <cstdint>
#include <string>
#include <vector>

#include "affsv/json_io.hpp"

namespace affsv {

struct Scenario {
  std::string name;
  AdmissibleParams params;
  NoiseSpec noise;
  Generator gen;
  PsdMatrix x0;
  HVector y0;
  std::vector<TransformQuery> queries;
  /// Additional states at which Assumption C is checked in the Q model.
  std::vector<PsdMatrix> extra_states;
  double riccati_dt = 1e-3;
  double sim_dt = 0.01;
  std::size_t paths = 10000;
  std::uint64_t seed = 0;

  /// Largest query time, or 1 without queries.
  double horizon() const;
  SimConfig sim_config() const;
  RiccatiInput riccati_input(const TransformQuery& q) const;
};

/// Only "b" and "noise" are required; everything else has defaults.
Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& s);

/// Reads and parses a file; ConfigError when unreadable or malformed.
Json read_json_file(const std::string& path);
Scenario load_scenario(const std::string& path);

std::vector<std::string> shipped_scenario_names();
/// Raw JSON text of a shipped scenario; ConfigError for unknown names.
const std::string& shipped_scenario_text(const std::string& name);
Scenario shipped_scenario(const std::string& name);

}  // namespace affsv
