#pragma once

// Admissible parameter sets, the noise data of the joint model, and their
// validators.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "affsv/linear_map.hpp"

namespace affsv {

struct AdmissibleParams {
  SymMatrix b;  // constant drift; cone membership is checked by validation
  LinearMap B;
  JumpMeasureSpec jumps;

  Index dim() const { return b.dim(); }
  /// Throws DimensionError if b, B and the jump atoms disagree on d.
  void check_dims() const;
};

enum class NoiseMode { Q, D };

/// Q: dY = AY dt + X^{1/2} dW^Q.  D: dY = AY dt + D^{1/2} X^{1/2} dW.
struct NoiseSpec {
  NoiseMode mode = NoiseMode::Q;
  PsdMatrix matrix;

  /// Operator entering the Riccati quadratic term. In the Q model this is Q,
  /// valid when X^{1/2} Q X^{1/2} = Q^{1/2} X Q^{1/2} along the paths.
  const PsdMatrix& effective_D() const { return matrix; }
};

const char* to_string(NoiseMode mode);

struct Violation {
  int item = 0;  // admissibility condition (1)-(4)
  bool hard = true;
  std::string message;
  double value = 0.0;  // witness: offending eigenvalue or residual
};

struct ValidationReport {
  std::vector<Violation> violations;
  int probes = 0;
  double tol_cone = 0.0;
  double min_residual_item4 = 0.0;

  bool ok() const { return violations.empty(); }
  /// No violations of the structural conditions (1)-(3).
  bool hard_ok() const;
};

inline constexpr int kDefaultProbes = 512;

/// Checks (1) b PSD, (2) b - I_m PSD and finite second moments, (3) mu
/// cone-valued with finite masses, (4) the quasi-monotonicity condition on
/// B^* over random orthogonal rank-one pairs plus all coordinate pairs.
/// Item (4) violations are soft (warnings).
ValidationReport validate_assumption_A(const AdmissibleParams& p, std::uint64_t seed,
                                       int n_probe = kDefaultProbes);

/// Residual of condition (4) at the orthogonal pair (u, x).
double quasi_monotone_residual(const AdmissibleParams& p, const SymMatrix& u, const SymMatrix& x);

/// Cone-valued Levy subordinator criterion: gamma - I_eta is PSD.
bool validate_subordinator(const SymMatrix& gamma, std::span<const Atom> atoms);

struct AssumptionCReport {
  bool ok = true;
  double max_residual = 0.0;
};

/// max over xs of |x^{1/2} Q x^{1/2} - D^{1/2} x D^{1/2}|, ok iff below
/// kTolLin * (1 + scale).
AssumptionCReport check_assumption_C(const PsdMatrix& Q, const PsdMatrix& D,
                                     std::span<const PsdMatrix> xs);
/// Q model only; D defaults to Q.
AssumptionCReport check_assumption_C(const NoiseSpec& noise, std::span<const PsdMatrix> xs);

}  // namespace affsv
