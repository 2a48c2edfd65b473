#include "affsv/params.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace affsv {

void AdmissibleParams::check_dims() const {
  require_same_dim(B.dim(), b.dim(), "AdmissibleParams B");
  jumps.check_dim(b.dim());
}

const char* to_string(NoiseMode mode) { return mode == NoiseMode::Q ? "Q" : "D"; }

bool ValidationReport::hard_ok() const {
  return std::none_of(violations.begin(), violations.end(), [](const Violation& v) { return v.hard; });
}

double quasi_monotone_residual(const AdmissibleParams& p, const SymMatrix& u, const SymMatrix& x) {
  double r = frob_inner(p.B.adjoint(u), x);
  for (const auto& a : p.jumps.mu_atoms) {
    r -= frob_inner(chi(a.xi), u) * a.rate(x);
  }
  return r;
}

ValidationReport validate_assumption_A(const AdmissibleParams& p, std::uint64_t seed, int n_probe) {
  p.check_dims();
  const Index d = p.dim();
  ValidationReport rep;
  auto fail = [&rep](int item, bool hard, std::string msg, double value) {
    rep.violations.push_back({item, hard, std::move(msg), value});
  };

  const double b_min = min_eig(p.b);
  if (b_min < -tol_psd(p.b)) fail(1, true, "b is not positive semidefinite", b_min);

  double second_moment = 0.0;
  for (const auto& a : p.jumps.m_atoms) {
    second_moment += a.mass * frob_inner(a.xi.sym(), a.xi.sym());
  }
  if (!std::isfinite(second_moment)) fail(2, true, "m has infinite second moment", second_moment);
  const SymMatrix net = p.b - small_jump_mean_m(p.jumps, d);
  const double net_min = min_eig(net);
  if (net_min < -tol_psd(net)) fail(2, true, "b - I_m is not positive semidefinite", net_min);

  for (const auto& a : p.jumps.mu_atoms) {
    const double w = min_eig(a.weight.sym());
    if (w < -tol_psd(a.weight.sym())) fail(3, true, "mu weight is not positive semidefinite", w);
    if (!std::isfinite(a.mass)) fail(3, true, "mu atom mass is not finite", a.mass);
  }

  rep.tol_cone = 1e-9 * (1.0 + p.B.norm());
  rep.min_residual_item4 = std::numeric_limits<double>::infinity();
  auto probe = [&](const SymMatrix& u, const SymMatrix& x) {
    ++rep.probes;
    const double r = quasi_monotone_residual(p, u, x);
    rep.min_residual_item4 = std::min(rep.min_residual_item4, r);
    if (r < -rep.tol_cone && std::none_of(rep.violations.begin(), rep.violations.end(),
                                          [](const Violation& v) { return v.item == 4; })) {
      std::ostringstream os;
      os << "quasi-monotonicity residual " << r << " on an orthogonal pair";
      fail(4, false, os.str(), r);
    }
  };

  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (i != j) probe(SymMatrix::unit(d, i), SymMatrix::unit(d, j));
    }
  }
  if (d >= 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int k = 0; k < n_probe; ++k) {
      HVector a(d), c(d);
      for (Index i = 0; i < d; ++i) a(i) = normal(rng);
      for (Index i = 0; i < d; ++i) c(i) = normal(rng);
      a.normalize();
      c -= a.dot(c) * a;
      if (c.norm() < 1e-12) continue;
      c.normalize();
      probe(outer(a, a), outer(c, c));
    }
  }
  if (rep.probes == 0) rep.min_residual_item4 = 0.0;
  return rep;
}

bool validate_subordinator(const SymMatrix& gamma, std::span<const Atom> atoms) {
  SymMatrix i_eta = SymMatrix::zero(gamma.dim());
  for (const auto& a : atoms) {
    require_same_dim(a.xi.dim(), gamma.dim(), "validate_subordinator");
    i_eta += a.mass * chi(a.xi);
  }
  const SymMatrix diff = gamma - i_eta;
  return min_eig(diff) >= -tol_psd(diff);
}

AssumptionCReport check_assumption_C(const PsdMatrix& Q, const PsdMatrix& D,
                                     std::span<const PsdMatrix> xs) {
  require_same_dim(Q.dim(), D.dim(), "check_assumption_C");
  const Dense sd = psd_sqrt(D).dense();
  AssumptionCReport rep;
  for (const auto& x : xs) {
    require_same_dim(x.dim(), Q.dim(), "check_assumption_C state");
    const Dense sx = psd_sqrt(x).dense();
    const Dense lhs = sx * Q.dense() * sx;
    const Dense rhs = sd * x.dense() * sd;
    const double residual = (lhs - rhs).norm();
    const double scale = std::max(lhs.norm(), rhs.norm());
    rep.max_residual = std::max(rep.max_residual, residual);
    if (residual > kTolLin * (1.0 + scale)) rep.ok = false;
  }
  return rep;
}

AssumptionCReport check_assumption_C(const NoiseSpec& noise, std::span<const PsdMatrix> xs) {
  if (noise.mode != NoiseMode::Q) throw DomainError("check_assumption_C: requires the Q model");
  return check_assumption_C(noise.matrix, noise.matrix, xs);
}

}  // namespace affsv
