#pragma once

// Validation and Monte-Carlo verification of a scenario: Riccati transform
// values against path estimates, the closed form of the Levy case, the
// first-moment ODE and the Yosida sub-suite.

#include <string>

#include "affsv/scenario.hpp"

namespace affsv {

struct ValidateOutcome {
  Json report;
  bool pass = false;
};

/// Assumption A, and in the Q model Assumption C on x0, x0 + each jump size
/// and the scenario's extra states. The subordinator criterion is reported
/// when mu is empty.
ValidateOutcome validate_scenario(const Scenario& s);

/// Sup over the common grid of |psi1 - psi1'| and |psi2 - psi2'|.
struct Discrepancy {
  double psi1 = 0.0;
  double psi2 = 0.0;
};
Discrepancy sup_discrepancy(const RiccatiSolution& a, const RiccatiSolution& b);

struct VerifyOptions {
  unsigned threads = 0;
  /// Yosida levels of the sub-suite for dense and shift_grid generators.
  std::vector<int> yosida_levels = {4, 16, 64};
};

struct VerifyOutcome {
  Json report;
  /// One row per simulation grid point.
  std::string summary_csv;
  bool pass = false;
};

VerifyOutcome verify_scenario(const Scenario& s, const VerifyOptions& opt = {});

/// <name>-<seed>
std::string report_stem(const Scenario& s);

}  // namespace affsv
