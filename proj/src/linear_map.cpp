#include "affsv/linear_map.hpp"

#include <cmath>

namespace affsv {

namespace {

Eigen::Map<const HVector> vec(const Dense& m) { return {m.data(), m.size()}; }

Dense unvec(const HVector& v, Index d) { return Eigen::Map<const Dense>(v.data(), d, d); }

SymMatrix symmetric_part(const Dense& m) {
  return SymMatrix::from_trusted(0.5 * (m + m.transpose()));
}

void check_square(const Dense& m, Index d, const char* what) {
  if (m.rows() != d || m.cols() != d) throw DimensionError(std::string(what) + ": expected a square matrix of the map dimension");
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entries");
}

}  // namespace

LinearMap LinearMap::zero(Index dim) {
  LinearMap b;
  b.kind_ = Kind::zero;
  b.dim_ = dim;
  return b;
}

LinearMap LinearMap::dense(const Dense& action) {
  const auto d = static_cast<Index>(std::lround(std::sqrt(static_cast<double>(action.rows()))));
  if (action.rows() != action.cols() || d * d != action.rows()) {
    throw DimensionError("LinearMap::dense: action must be d^2 x d^2");
  }
  if (!action.allFinite()) throw DomainError("LinearMap::dense: non-finite entries");
  LinearMap b;
  b.kind_ = Kind::dense;
  b.dim_ = d;
  b.action_ = action;
  return b;
}

LinearMap LinearMap::sandwich(const Dense& c, std::vector<Dense> conjugations,
                              std::vector<RayTerm> rays) {
  LinearMap b;
  b.kind_ = Kind::sandwich;
  b.dim_ = c.rows();
  check_square(c, b.dim_, "LinearMap::sandwich C");
  for (const auto& a : conjugations) check_square(a, b.dim_, "LinearMap::sandwich A");
  for (const auto& r : rays) {
    require_same_dim(r.g.dim(), b.dim_, "LinearMap ray g");
    require_same_dim(r.z.dim(), b.dim_, "LinearMap ray z");
  }
  b.c_ = c;
  b.conj_ = std::move(conjugations);
  b.rays_ = std::move(rays);
  return b;
}

LinearMap LinearMap::ray(Index dim, std::vector<RayTerm> rays) {
  LinearMap b = sandwich(Dense::Zero(dim, dim), {}, std::move(rays));
  b.kind_ = Kind::ray;
  return b;
}

std::vector<RayTerm> LinearMap::compensating_rays(const JumpMeasureSpec& jumps, Index dim) {
  std::vector<RayTerm> rays;
  for (const auto& a : jumps.mu_atoms) {
    const double n2 = frob_inner(a.xi.sym(), a.xi.sym());
    SymMatrix z = chi(a.xi);
    if (z.norm() == 0.0) continue;
    rays.push_back({a.weight.sym(), (a.mass / n2) * z});
  }
  for (auto& r : rays) require_same_dim(r.g.dim(), dim, "compensating_rays");
  return rays;
}

SymMatrix LinearMap::apply(const SymMatrix& u) const {
  require_same_dim(u.dim(), dim_, "LinearMap::apply");
  switch (kind_) {
    case Kind::zero:
      return SymMatrix::zero(dim_);
    case Kind::dense: {
      HVector out = action_ * vec(u.dense());
      return symmetric_part(unvec(out, dim_));
    }
    case Kind::sandwich:
    case Kind::ray: {
      Dense cu = c_ * u.dense();
      Dense out = cu + cu.transpose();
      for (const auto& a : conj_) out += a * u.dense() * a.transpose();
      SymMatrix s = symmetric_part(out);
      for (const auto& r : rays_) s += frob_inner(r.g, u) * r.z;
      return s;
    }
  }
  return SymMatrix::zero(dim_);
}

SymMatrix LinearMap::adjoint(const SymMatrix& v) const {
  require_same_dim(v.dim(), dim_, "LinearMap::adjoint");
  switch (kind_) {
    case Kind::zero:
      return SymMatrix::zero(dim_);
    case Kind::dense: {
      HVector out = action_.transpose() * vec(v.dense());
      return symmetric_part(unvec(out, dim_));
    }
    case Kind::sandwich:
    case Kind::ray: {
      Dense cv = c_.transpose() * v.dense();
      Dense out = cv + cv.transpose();
      for (const auto& a : conj_) out += a.transpose() * v.dense() * a;
      SymMatrix s = symmetric_part(out);
      for (const auto& r : rays_) s += frob_inner(r.z, v) * r.g;
      return s;
    }
  }
  return SymMatrix::zero(dim_);
}

Dense LinearMap::matrix() const {
  if (kind_ == Kind::dense) return action_;
  const Index n = dim_ * dim_;
  Dense m = Dense::Zero(n, n);
  if (kind_ == Kind::zero) return m;
  for (Index j = 0; j < dim_; ++j) {
    for (Index i = 0; i < dim_; ++i) {
      // structured form applied to the elementary matrix E_ij
      Dense e = Dense::Zero(dim_, dim_);
      e(i, j) = 1.0;
      Dense out = c_ * e + e * c_.transpose();
      for (const auto& a : conj_) out += a * e * a.transpose();
      for (const auto& r : rays_) out += r.g.dense()(i, j) * r.z.dense();
      m.col(j * dim_ + i) = vec(out);
    }
  }
  return m;
}

double LinearMap::norm() const {
  if (kind_ == Kind::zero) return 0.0;
  return matrix().norm();
}

}  // namespace affsv
