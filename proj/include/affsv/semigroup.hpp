#pragma once

// Generators of strongly continuous semigroups on H = R^d, their semigroups
// S(t), the adjoint semigroups S*(t), and Yosida approximations.

#include <vector>

#include "affsv/symcone.hpp"

namespace affsv {

class Generator {
 public:
  enum class Kind { zero, scalar, dense, shift_grid };

  Generator() = default;

  static Generator zero(Index dim);
  /// A = kappa * I
  static Generator scalar(Index dim, double kappa);
  static Generator dense(const Dense& a);
  /// Forward-curve transport d/dx on a maturity grid: S(t) shifts left by t
  /// with linear interpolation and constant extrapolation at the long end.
  static Generator shift_grid(std::vector<double> maturities);

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }
  double kappa() const { return kappa_; }
  const std::vector<double>& maturities() const { return maturities_; }

  /// Bounded matrix of the generator. For shift_grid this is the first-order
  /// upwind difference matrix (last row zero).
  Dense matrix() const;

  /// Matrix of S(t).
  Dense semigroup_matrix(double t) const;

 private:
  Kind kind_ = Kind::zero;
  Index dim_ = 0;
  double kappa_ = 0.0;
  Dense a_;
  std::vector<double> maturities_;
};

HVector apply_semigroup(const Generator& gen, double t, const HVector& v);
HVector apply_adjoint_semigroup(const Generator& gen, double t, const HVector& v);

/// n A (n I - A)^{-1} as a dense generator.
Generator yosida(const Generator& gen, int n);

/// Constants with |S(t)| <= M e^{w t} in the spectral norm.
struct GrowthBound {
  double M = 1.0;
  double w = 0.0;
};

GrowthBound growth_bound(const Generator& gen);

}  // namespace affsv
