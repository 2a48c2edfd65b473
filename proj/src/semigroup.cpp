#include "affsv/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "affsv/expm.hpp"

namespace affsv {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("semigroup: time must be finite and >= 0");
}

}  // namespace

Generator Generator::zero(Index dim) {
  Generator g;
  g.kind_ = Kind::zero;
  g.dim_ = dim;
  return g;
}

Generator Generator::scalar(Index dim, double kappa) {
  if (!std::isfinite(kappa)) throw DomainError("Generator::scalar: non-finite kappa");
  Generator g;
  g.kind_ = Kind::scalar;
  g.dim_ = dim;
  g.kappa_ = kappa;
  return g;
}

Generator Generator::dense(const Dense& a) {
  if (a.rows() != a.cols()) throw DimensionError("Generator::dense: matrix is not square");
  if (!a.allFinite()) throw DomainError("Generator::dense: non-finite entries");
  Generator g;
  g.kind_ = Kind::dense;
  g.dim_ = a.rows();
  g.a_ = a;
  return g;
}

Generator Generator::shift_grid(std::vector<double> maturities) {
  if (maturities.empty()) throw DomainError("Generator::shift_grid: empty maturity grid");
  for (std::size_t i = 0; i < maturities.size(); ++i) {
    if (!std::isfinite(maturities[i])) throw DomainError("Generator::shift_grid: non-finite maturity");
    if (i > 0 && !(maturities[i] > maturities[i - 1])) {
      throw DomainError("Generator::shift_grid: maturities must be strictly increasing");
    }
  }
  Generator g;
  g.kind_ = Kind::shift_grid;
  g.dim_ = static_cast<Index>(maturities.size());
  g.maturities_ = std::move(maturities);
  return g;
}

Dense Generator::matrix() const {
  switch (kind_) {
    case Kind::zero:
      return Dense::Zero(dim_, dim_);
    case Kind::scalar:
      return kappa_ * Dense::Identity(dim_, dim_);
    case Kind::dense:
      return a_;
    case Kind::shift_grid: {
      Dense a = Dense::Zero(dim_, dim_);
      for (Index i = 0; i + 1 < dim_; ++i) {
        const double h = maturities_[i + 1] - maturities_[i];
        a(i, i) = -1.0 / h;
        a(i, i + 1) = 1.0 / h;
      }
      return a;
    }
  }
  return {};
}

Dense Generator::semigroup_matrix(double t) const {
  check_time(t);
  switch (kind_) {
    case Kind::zero:
      return Dense::Identity(dim_, dim_);
    case Kind::scalar:
      return std::exp(kappa_ * t) * Dense::Identity(dim_, dim_);
    case Kind::dense:
      return expm(t * a_);
    case Kind::shift_grid: {
      // (S(t) f)(x_i) = f(x_i + t), linear interpolation, flat beyond the last node
      Dense s = Dense::Zero(dim_, dim_);
      const auto& x = maturities_;
      for (Index i = 0; i < dim_; ++i) {
        const double target = x[i] + t;
        if (target >= x.back()) {
          s(i, dim_ - 1) = 1.0;
          continue;
        }
        const auto it = std::upper_bound(x.begin(), x.end(), target);
        const auto j = static_cast<Index>(it - x.begin()) - 1;
        const double w = (target - x[j]) / (x[j + 1] - x[j]);
        s(i, j) += 1.0 - w;
        s(i, j + 1) += w;
      }
      return s;
    }
  }
  return {};
}

HVector apply_semigroup(const Generator& gen, double t, const HVector& v) {
  require_same_dim(v.size(), gen.dim(), "apply_semigroup");
  check_time(t);
  switch (gen.kind()) {
    case Generator::Kind::zero:
      return v;
    case Generator::Kind::scalar:
      return std::exp(gen.kappa() * t) * v;
    default:
      return gen.semigroup_matrix(t) * v;
  }
}

HVector apply_adjoint_semigroup(const Generator& gen, double t, const HVector& v) {
  require_same_dim(v.size(), gen.dim(), "apply_adjoint_semigroup");
  check_time(t);
  switch (gen.kind()) {
    case Generator::Kind::zero:
      return v;
    case Generator::Kind::scalar:
      return std::exp(gen.kappa() * t) * v;
    default:
      return gen.semigroup_matrix(t).transpose() * v;
  }
}

Generator yosida(const Generator& gen, int n) {
  if (n < 1) throw DomainError("yosida: n must be >= 1");
  const Index d = gen.dim();
  const Dense a = gen.matrix();
  const Dense resolvent_arg = static_cast<double>(n) * Dense::Identity(d, d) - a;
  Eigen::FullPivLU<Dense> lu(resolvent_arg);
  if (!lu.isInvertible()) throw NumericalError("yosida: nI - A is singular");
  return Generator::dense(static_cast<double>(n) * a * lu.inverse());
}

GrowthBound growth_bound(const Generator& gen) {
  const Index d = gen.dim();
  switch (gen.kind()) {
    case Generator::Kind::zero:
      return {1.0, 0.0};
    case Generator::Kind::scalar:
      return {1.0, gen.kappa()};
    case Generator::Kind::dense: {
      // logarithmic norm: |e^{tA}| <= e^{t mu(A)}, mu(A) = max eig of (A + A^T)/2
      const Dense a = gen.matrix();
      const SymMatrix h(0.5 * (a + a.transpose()));
      const auto es = detail::eig(h, Eigen::EigenvaluesOnly);
      return {1.0, es.eigenvalues()(d - 1)};
    }
    case Generator::Kind::shift_grid:
      // rows are convex weights (|S|_inf = 1) and column sums are at most d
      return {std::sqrt(static_cast<double>(d)), 0.0};
  }
  return {};
}

}  // namespace affsv
