#pragma once

// Finite atomic representations of the jump measure m and the cone-valued
// measure mu, and the integrals of the jump kernels against them.

#include <vector>

#include "affsv/symcone.hpp"

namespace affsv {

/// Point mass of m at jump size xi.
struct Atom {
  PsdMatrix xi;
  double mass = 0.0;

  Atom() = default;
  Atom(PsdMatrix xi, double mass);
};

/// Point mass of mu at jump size xi with cone-valued direction `weight`,
/// i.e. mu({xi}) = mass * weight.
struct VectorAtom {
  PsdMatrix xi;
  PsdMatrix weight;
  double mass = 0.0;

  VectorAtom() = default;
  VectorAtom(PsdMatrix xi, PsdMatrix weight, double mass);

  /// Jump rate at state x: mass * <weight, x> / |xi|^2.
  double rate(const SymMatrix& x) const;
};

struct JumpMeasureSpec {
  std::vector<Atom> m_atoms;
  std::vector<VectorAtom> mu_atoms;

  bool empty() const { return m_atoms.empty() && mu_atoms.empty(); }
  /// Common matrix dimension, 0 for an empty spec.
  Index dim() const;
  /// Throws DimensionError unless every atom has dimension d.
  void check_dim(Index d) const;
};

/// Truncation function: xi on the closed unit ball, zero outside.
SymMatrix chi(const SymMatrix& xi);

/// exp(-<xi,u>) - 1 + <chi(xi),u>.
double kernel_K(const SymMatrix& xi, const SymMatrix& u);

/// Total mass of M(x, .) = m + <mu, x>/|xi|^2.
double intensity_at(const JumpMeasureSpec& spec, const SymMatrix& x);

/// Rates of all atoms at x, m atoms first, then mu atoms.
std::vector<double> atom_rates(const JumpMeasureSpec& spec, const SymMatrix& x);

/// Jump size of the atom with the given index in atom_rates() order.
const PsdMatrix& atom_jump(const JumpMeasureSpec& spec, std::size_t index);

/// int chi(xi) M(x, d xi).
SymMatrix compensator_small_jumps(const JumpMeasureSpec& spec, const SymMatrix& x);

/// I_m = int chi(xi) m(d xi).
SymMatrix small_jump_mean_m(const JumpMeasureSpec& spec, Index dim);

/// int_{|xi| > 1} xi M(x, d xi), the large-jump drift of the canonical
/// semimartingale representation.
SymMatrix large_jump_drift(const JumpMeasureSpec& spec, const SymMatrix& x);

/// Keeps only atoms with |xi| > 1/k.
JumpMeasureSpec truncate_ladder(const JumpMeasureSpec& spec, int k);

}  // namespace affsv
