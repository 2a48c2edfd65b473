#include "affsv/jumpmeasure.hpp"

#include <cmath>
#include <limits>

namespace affsv {

namespace {

void check_atom(const PsdMatrix& xi, double mass) {
  if (!(xi.norm() > 0.0)) throw DomainError("jump atom: xi must be nonzero");
  if (!std::isfinite(mass) || mass < 0.0) throw DomainError("jump atom: mass must be finite and >= 0");
}

// Largest argument for which exp() stays finite in double precision.
constexpr double kMaxExpArg = 700.0;

// Closed unit ball, boundary included.
bool in_unit_ball(const SymMatrix& xi) { return frob_inner(xi, xi) <= 1.0; }

}  // namespace

Atom::Atom(PsdMatrix xi_, double mass_) : xi(std::move(xi_)), mass(mass_) { check_atom(xi, mass); }

VectorAtom::VectorAtom(PsdMatrix xi_, PsdMatrix weight_, double mass_)
    : xi(std::move(xi_)), weight(std::move(weight_)), mass(mass_) {
  check_atom(xi, mass);
  require_same_dim(xi.dim(), weight.dim(), "VectorAtom");
}

double VectorAtom::rate(const SymMatrix& x) const {
  const double n = xi.norm();
  return mass * frob_inner(weight.sym(), x) / (n * n);
}

Index JumpMeasureSpec::dim() const {
  if (!m_atoms.empty()) return m_atoms.front().xi.dim();
  if (!mu_atoms.empty()) return mu_atoms.front().xi.dim();
  return 0;
}

void JumpMeasureSpec::check_dim(Index d) const {
  for (const auto& a : m_atoms) require_same_dim(a.xi.dim(), d, "jump measure m atom");
  for (const auto& a : mu_atoms) {
    require_same_dim(a.xi.dim(), d, "jump measure mu atom");
    require_same_dim(a.weight.dim(), d, "jump measure mu weight");
  }
}

SymMatrix chi(const SymMatrix& xi) {
  if (in_unit_ball(xi)) return xi;
  return SymMatrix::zero(xi.dim());
}

double kernel_K(const SymMatrix& xi, const SymMatrix& u) {
  const double s = frob_inner(xi, u);
  if (-s > kMaxExpArg) throw RangeError("kernel_K: exp(-<xi,u>) overflows");
  return std::expm1(-s) + frob_inner(chi(xi), u);
}

double intensity_at(const JumpMeasureSpec& spec, const SymMatrix& x) {
  double total = 0.0;
  for (const auto& a : spec.m_atoms) total += a.mass;
  for (const auto& a : spec.mu_atoms) total += a.rate(x);
  return total;
}

std::vector<double> atom_rates(const JumpMeasureSpec& spec, const SymMatrix& x) {
  std::vector<double> r;
  r.reserve(spec.m_atoms.size() + spec.mu_atoms.size());
  for (const auto& a : spec.m_atoms) r.push_back(a.mass);
  for (const auto& a : spec.mu_atoms) r.push_back(a.rate(x));
  return r;
}

const PsdMatrix& atom_jump(const JumpMeasureSpec& spec, std::size_t index) {
  if (index < spec.m_atoms.size()) return spec.m_atoms[index].xi;
  return spec.mu_atoms.at(index - spec.m_atoms.size()).xi;
}

SymMatrix compensator_small_jumps(const JumpMeasureSpec& spec, const SymMatrix& x) {
  SymMatrix out = SymMatrix::zero(x.dim());
  for (const auto& a : spec.m_atoms) {
    if (in_unit_ball(a.xi)) out += a.mass * a.xi.sym();
  }
  for (const auto& a : spec.mu_atoms) {
    if (in_unit_ball(a.xi)) out += a.rate(x) * a.xi.sym();
  }
  return out;
}

SymMatrix small_jump_mean_m(const JumpMeasureSpec& spec, Index dim) {
  SymMatrix out = SymMatrix::zero(dim);
  for (const auto& a : spec.m_atoms) out += a.mass * chi(a.xi);
  return out;
}

SymMatrix large_jump_drift(const JumpMeasureSpec& spec, const SymMatrix& x) {
  SymMatrix out = SymMatrix::zero(x.dim());
  for (const auto& a : spec.m_atoms) {
    if (!in_unit_ball(a.xi)) out += a.mass * a.xi.sym();
  }
  for (const auto& a : spec.mu_atoms) {
    if (!in_unit_ball(a.xi)) out += a.rate(x) * a.xi.sym();
  }
  return out;
}

JumpMeasureSpec truncate_ladder(const JumpMeasureSpec& spec, int k) {
  if (k < 1) throw DomainError("truncate_ladder: k must be >= 1");
  const double cut = 1.0 / static_cast<double>(k);
  JumpMeasureSpec out;
  for (const auto& a : spec.m_atoms) {
    if (a.xi.norm() > cut) out.m_atoms.push_back(a);
  }
  for (const auto& a : spec.mu_atoms) {
    if (a.xi.norm() > cut) out.mu_atoms.push_back(a);
  }
  return out;
}

}  // namespace affsv
