#include <doctest.h>

#include <cmath>
#include <limits>

#include "affsv/symcone.hpp"
#include "test_util.hpp"

using namespace affsv;
using affsv::test::random_psd;

namespace {

SymMatrix mat2(double a, double b, double c, double d) {
  Dense m(2, 2);
  m << a, b, c, d;
  return SymMatrix(m);
}

}  // namespace

TEST_CASE("frob_inner examples") {
  CHECK(frob_inner(SymMatrix::identity(2), SymMatrix::identity(2)) == doctest::Approx(2.0));
  CHECK(frob_inner(mat2(1, 0, 0, 2), mat2(3, 0, 0, 4)) == doctest::Approx(11.0));
  CHECK(frob_inner(SymMatrix::unit(2, 0), SymMatrix::unit(2, 1)) == 0.0);
  CHECK_THROWS_AS(frob_inner(SymMatrix::identity(2), SymMatrix::identity(3)), DimensionError);
}

TEST_CASE("outer examples") {
  HVector e1 = HVector::Zero(2);
  e1(0) = 1.0;
  CHECK(outer(e1, e1).dense() == SymMatrix::unit(2, 0).dense());
  const HVector ones = HVector::Ones(2);
  CHECK(outer(ones, ones).dense() == Dense::Ones(2, 2));
  CHECK(outer(HVector::Zero(2), ones).norm() == 0.0);
  CHECK_THROWS_AS(outer(HVector::Zero(2), HVector::Zero(3)), DimensionError);
}

TEST_CASE("psd_sqrt examples") {
  const PsdMatrix d49 = PsdMatrix::checked(mat2(4, 0, 0, 9));
  CHECK(affsv::test::max_abs_diff(psd_sqrt(d49), mat2(2, 0, 0, 3)) < 1e-12);
  CHECK(affsv::test::max_abs_diff(psd_sqrt(PsdMatrix::identity(3)), SymMatrix::identity(3)) < 1e-12);
  const double r3 = std::sqrt(3.0);
  const SymMatrix expected = mat2((r3 + 1) / 2, (r3 - 1) / 2, (r3 - 1) / 2, (r3 + 1) / 2);
  CHECK(affsv::test::max_abs_diff(psd_sqrt(PsdMatrix::checked(mat2(2, 1, 1, 2))), expected) < 1e-12);
}

TEST_CASE("project_psd examples") {
  CHECK(affsv::test::max_abs_diff(project_psd(mat2(1, 0, 0, -0.5)), mat2(1, 0, 0, 0)) < 1e-12);
  CHECK(affsv::test::max_abs_diff(project_psd(mat2(0, 1, 1, 0)), mat2(0.5, 0.5, 0.5, 0.5)) < 1e-12);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const PsdMatrix x = random_psd(rng, 4);
    CHECK(affsv::test::max_abs_diff(project_psd(x.sym()), x) <= kTolLin * (1.0 + x.norm()));
  }
}

TEST_CASE("min_eig examples") {
  CHECK(min_eig(mat2(3, 0, 0, 5)) == doctest::Approx(3.0));
  CHECK(min_eig(SymMatrix::zero(2)) == 0.0);
  CHECK(min_eig(mat2(0, 1, 1, 0)) == doctest::Approx(-1.0));
}

TEST_CASE("storage is symmetric and finite") {
  Dense a(2, 2);
  a << 1, 2, 5, 3;
  const SymMatrix s(a);
  CHECK(s(1, 0) == 2.0);
  CHECK(s(0, 1) == 2.0);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymMatrix{a}, DomainError);
  CHECK_THROWS_AS(SymMatrix(Dense::Zero(2, 3)), DimensionError);
}

TEST_CASE("PsdMatrix checked constructor") {
  CHECK_NOTHROW(PsdMatrix::checked(mat2(1, 0, 0, 0)));
  CHECK_NOTHROW(PsdMatrix::checked(mat2(1, 0, 0, -1e-12)));
  CHECK_THROWS_AS(PsdMatrix::checked(mat2(1, 0, 0, -1e-6)), DomainError);
  CHECK_THROWS_AS(PsdMatrix::identity(2).scaled(-1.0), DomainError);
}

TEST_CASE("cone properties on random inputs") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const Index d = 1 + k % 6;
    const PsdMatrix x = random_psd(rng, d, 1 + k % 3);
    const PsdMatrix u = random_psd(rng, d);
    const PsdMatrix s = psd_sqrt(x);
    const SymMatrix sq(s.dense() * s.dense());
    CHECK((sq - x.sym()).norm() <= kTolLin * (1.0 + x.norm()));
    CHECK(frob_inner(x.sym(), u.sym()) >= 0.0);
    CHECK(frob_inner(x.sym(), x.sym()) >= 0.0);
    const SymMatrix y(affsv::test::random_matrix(rng, d, d));
    const PsdMatrix p = project_psd(y);
    CHECK(min_eig(p.sym()) >= -tol_psd(p.sym()));
    CHECK(affsv::test::max_abs_diff(project_psd(p.sym()), p) <= kTolLin * (1.0 + p.norm()));
  }
  CHECK(frob_inner(SymMatrix::zero(3), SymMatrix::zero(3)) == 0.0);
}

TEST_CASE("single precision instantiation") {
  using S = SymMatrixT<float>;
  DenseT<float> a(2, 2);
  a << 4.0f, 0.0f, 0.0f, 9.0f;
  const auto r = psd_sqrt(PsdMatrixT<float>::checked(S(a)));
  CHECK(r(1, 1) == doctest::Approx(3.0f));
}
