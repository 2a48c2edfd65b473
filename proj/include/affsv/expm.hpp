#pragma once

// Matrix exponential by scaling and squaring with a degree-13 Pade
// approximant (Higham, 2005).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "affsv/errors.hpp"

namespace affsv {

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(
    const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (a_in.rows() != a_in.cols()) throw DimensionError("expm: matrix is not square");
  if (!a_in.allFinite()) throw DomainError("expm: non-finite entries");
  const Eigen::Index n = a_in.rows();
  if (n == 0) return Mat(0, 0);

  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  // Largest 1-norm for which the degree-13 approximant is accurate to unit roundoff.
  constexpr double theta13 = 5.371920351148152;

  Mat a = a_in;
  const Scalar norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) {
    s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
    a /= std::pow(Scalar(2), s);
  }

  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;

  const Mat u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Mat u = a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Mat v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const Mat v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::PartialPivLU<Mat> lu(v - u);
  Mat r = lu.solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  if (!r.allFinite()) throw NumericalError("expm: result is not finite");
  return r;
}

}  // namespace affsv
