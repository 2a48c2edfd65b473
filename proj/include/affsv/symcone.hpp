#pragma once

// Dense symmetric matrices and the positive semidefinite cone at rank d.
//
// The Hilbert space H is truncated to R^d with its standard basis, so a
// self-adjoint Hilbert-Schmidt operator is a real symmetric d x d matrix and
// the Hilbert-Schmidt inner product is the Frobenius inner product.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "affsv/errors.hpp"

namespace affsv {

using Index = Eigen::Index;

template <typename Scalar>
using DenseT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using HVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Relative tolerance for linear-algebra identities (s*s == x, idempotence).
inline constexpr double kTolLin = 1e-9;

/// Symmetric d x d matrix. Only the upper triangle of the input is read;
/// storage is always exactly symmetric and finite.
template <typename Scalar>
class SymMatrixT {
 public:
  using Dense = DenseT<Scalar>;

  SymMatrixT() = default;

  explicit SymMatrixT(Index dim) : m_(Dense::Zero(dim, dim)) {}

  template <typename Derived>
  explicit SymMatrixT(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) {
      throw DimensionError("SymMatrix: matrix is not square (" + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + ")");
    }
    m_ = a.template triangularView<Eigen::Upper>();
    m_.template triangularView<Eigen::StrictlyLower>() = m_.transpose();
    if (!m_.allFinite()) throw DomainError("SymMatrix: non-finite entries");
  }

  static SymMatrixT zero(Index dim) { return SymMatrixT(dim); }
  static SymMatrixT identity(Index dim) { return from_trusted(Dense::Identity(dim, dim)); }

  /// e_i (x) e_i
  static SymMatrixT unit(Index dim, Index i) {
    SymMatrixT s(dim);
    s.m_(i, i) = Scalar(1);
    return s;
  }

  static SymMatrixT diag(const HVectorT<Scalar>& d) {
    if (!d.allFinite()) throw DomainError("SymMatrix::diag: non-finite entries");
    return from_trusted(Dense(d.asDiagonal()));
  }

  Index dim() const { return m_.rows(); }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }
  const Dense& dense() const { return m_; }

  Scalar norm() const { return m_.norm(); }
  Scalar trace() const { return m_.trace(); }

  SymMatrixT& operator+=(const SymMatrixT& o) {
    require_same_dim(dim(), o.dim(), "SymMatrix +=");
    m_ += o.m_;
    return *this;
  }
  SymMatrixT& operator-=(const SymMatrixT& o) {
    require_same_dim(dim(), o.dim(), "SymMatrix -=");
    m_ -= o.m_;
    return *this;
  }
  SymMatrixT& operator*=(Scalar a) {
    m_ *= a;
    return *this;
  }

  friend SymMatrixT operator+(SymMatrixT a, const SymMatrixT& b) { return a += b; }
  friend SymMatrixT operator-(SymMatrixT a, const SymMatrixT& b) { return a -= b; }
  friend SymMatrixT operator-(SymMatrixT a) { return a *= Scalar(-1); }
  friend SymMatrixT operator*(Scalar s, SymMatrixT a) { return a *= s; }
  friend SymMatrixT operator*(SymMatrixT a, Scalar s) { return a *= s; }

  /// Wraps a matrix already known to be exactly symmetric; skips the checks.
  template <typename Derived>
  static SymMatrixT from_trusted(const Eigen::MatrixBase<Derived>& a) {
    SymMatrixT s;
    s.m_ = a;
    return s;
  }

 private:
  Dense m_;
};

template <typename Scalar>
Scalar min_eig(const SymMatrixT<Scalar>& x);

template <typename Scalar>
Scalar tol_psd(const SymMatrixT<Scalar>& x) {
  return Scalar(1e-10) * (Scalar(1) + x.norm());
}

/// Element of the PSD cone. Constructed only through checked() or the cone
/// operations (project_psd, psd_sqrt, sums and nonnegative multiples).
template <typename Scalar>
class PsdMatrixT {
 public:
  using Sym = SymMatrixT<Scalar>;

  PsdMatrixT() = default;

  static PsdMatrixT checked(Sym s) {
    if (s.dim() > 0) {
      const Scalar lo = min_eig(s);
      if (lo < -tol_psd(s)) {
        throw DomainError("PsdMatrix: minimum eigenvalue " + std::to_string(lo) +
                          " below -tol_psd");
      }
    }
    return PsdMatrixT(std::move(s));
  }

  template <typename Derived>
  static PsdMatrixT checked(const Eigen::MatrixBase<Derived>& a) {
    return checked(Sym(a));
  }

  static PsdMatrixT zero(Index dim) { return PsdMatrixT(Sym::zero(dim)); }
  static PsdMatrixT identity(Index dim) { return PsdMatrixT(Sym::identity(dim)); }
  static PsdMatrixT unit(Index dim, Index i) { return PsdMatrixT(Sym::unit(dim, i)); }

  /// For values that are PSD by construction (v (x) v, projections).
  static PsdMatrixT from_trusted(Sym s) { return PsdMatrixT(std::move(s)); }

  const Sym& sym() const { return s_; }
  operator const Sym&() const { return s_; }  // NOLINT(google-explicit-constructor)
  const typename Sym::Dense& dense() const { return s_.dense(); }
  Index dim() const { return s_.dim(); }
  Scalar norm() const { return s_.norm(); }
  Scalar operator()(Index i, Index j) const { return s_(i, j); }

  friend PsdMatrixT operator+(const PsdMatrixT& a, const PsdMatrixT& b) {
    return PsdMatrixT(a.s_ + b.s_);
  }

  PsdMatrixT scaled(Scalar alpha) const {
    if (!(alpha >= Scalar(0))) throw DomainError("PsdMatrix::scaled: negative factor");
    return PsdMatrixT(alpha * s_);
  }

 private:
  explicit PsdMatrixT(Sym s) : s_(std::move(s)) {}
  Sym s_;
};

using SymMatrix = SymMatrixT<double>;
using PsdMatrix = PsdMatrixT<double>;
using HVector = HVectorT<double>;
using Dense = DenseT<double>;

namespace detail {

template <typename Scalar>
Eigen::SelfAdjointEigenSolver<DenseT<Scalar>> eig(const SymMatrixT<Scalar>& x, int options) {
  if (!x.dense().allFinite()) throw NumericalError("eigendecomposition: non-finite entries");
  Eigen::SelfAdjointEigenSolver<DenseT<Scalar>> es(x.dense(), options);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  return es;
}

}  // namespace detail

/// Hilbert-Schmidt (Frobenius) inner product.
template <typename Scalar>
Scalar frob_inner(const SymMatrixT<Scalar>& a, const SymMatrixT<Scalar>& b) {
  require_same_dim(a.dim(), b.dim(), "frob_inner");
  return a.dense().cwiseProduct(b.dense()).sum();
}

/// Symmetric part of a (x) b; outer(a, a) is PSD.
template <typename Scalar>
SymMatrixT<Scalar> outer(const HVectorT<Scalar>& a, const HVectorT<Scalar>& b) {
  require_same_dim(a.size(), b.size(), "outer");
  DenseT<Scalar> m = a * b.transpose();
  return SymMatrixT<Scalar>::from_trusted(Scalar(0.5) * (m + m.transpose()));
}

/// Non-template overload so Eigen expressions convert implicitly.
inline SymMatrixT<double> outer(const HVectorT<double>& a, const HVectorT<double>& b) {
  return outer<double>(a, b);
}

template <typename Scalar>
Scalar min_eig(const SymMatrixT<Scalar>& x) {
  if (x.dim() == 0) return Scalar(0);
  return detail::eig(x, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

/// Frobenius-nearest PSD matrix: negative eigenvalues are clipped to zero.
template <typename Scalar>
PsdMatrixT<Scalar> project_psd(const SymMatrixT<Scalar>& x) {
  if (x.dim() == 0) return PsdMatrixT<Scalar>::from_trusted(x);
  const auto es = detail::eig(x, Eigen::ComputeEigenvectors);
  if (es.eigenvalues()(0) >= Scalar(0)) return PsdMatrixT<Scalar>::from_trusted(x);
  const auto& q = es.eigenvectors();
  DenseT<Scalar> r = q * es.eigenvalues().cwiseMax(Scalar(0)).asDiagonal() * q.transpose();
  return PsdMatrixT<Scalar>::from_trusted(SymMatrixT<Scalar>(r));
}

/// Operator square root; eigenvalues are clipped at zero before rooting.
template <typename Scalar>
PsdMatrixT<Scalar> psd_sqrt(const PsdMatrixT<Scalar>& x) {
  if (x.dim() == 0) return x;
  const auto es = detail::eig(x.sym(), Eigen::ComputeEigenvectors);
  const auto& q = es.eigenvectors();
  DenseT<Scalar> r = q * es.eigenvalues().cwiseMax(Scalar(0)).cwiseSqrt().asDiagonal() * q.transpose();
  return PsdMatrixT<Scalar>::from_trusted(SymMatrixT<Scalar>(r));
}

template <typename Scalar>
bool is_psd(const SymMatrixT<Scalar>& x) {
  return min_eig(x) >= -tol_psd(x);
}

}  // namespace affsv
