#pragma once

// The affine transform formula
//   E[exp(i<Y_t, v1> - <X_t, u2>)] = exp(-Phi(t) + i<y, v(t)> - <x, psi2(t)>)
// and its Monte-Carlo counterpart.

#include <complex>
#include <span>

#include "affsv/riccati.hpp"
#include "affsv/simulate.hpp"
#include "affsv/stats.hpp"

namespace affsv {

using Complex = std::complex<double>;

struct TransformQuery {
  HVector v1;  // u1 = i v1
  PsdMatrix u2;
  double t = 0.0;
};

Complex affine_value(const RiccatiSolution& sol, const HVector& y0, const SymMatrix& x0,
                     const TransformQuery& query);

struct McEstimate {
  Complex estimate;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t n = 0;

  double stderr() const { return std::max(stderr_re, stderr_im); }
};

/// exp(-<x, u2>) (cos<y, v1> + i sin<y, v1>)
Complex transform_sample(const SymMatrix& x, const HVector& y, const TransformQuery& query);

/// Mergeable accumulator of transform_sample over paths, for run_paths.
class TransformAccumulator {
 public:
  explicit TransformAccumulator(TransformQuery query) : query_(std::move(query)) {}

  void add(std::size_t path, const PathSample& s);
  void add(const Complex& sample);
  void merge(const TransformAccumulator& other);
  McEstimate result() const;

 private:
  TransformQuery query_;
  RunningStats re_;
  RunningStats im_;
};

McEstimate mc_transform(std::span<const PathSample> paths, const TransformQuery& query);

struct CompareReport {
  double z_re = 0.0;
  double z_im = 0.0;
  double threshold = 3.0;
  bool pass = false;
};

/// z-scores of the real and imaginary parts; a component with zero standard
/// error must match exactly (to 1e-12).
CompareReport compare(const Complex& affine, const McEstimate& mc, double threshold = 3.0);

}  // namespace affsv
