#include <doctest.h>

#include "affsv/linear_map.hpp"
#include "test_util.hpp"

using namespace affsv;
using affsv::test::random_matrix;
using affsv::test::random_psd;

namespace {

LinearMap random_sandwich(std::mt19937_64& rng, Index d) {
  std::vector<RayTerm> rays = {{random_psd(rng, d).sym(), random_psd(rng, d).sym()}};
  return LinearMap::sandwich(random_matrix(rng, d, d), {random_matrix(rng, d, d)}, rays);
}

}  // namespace

TEST_CASE("adjoint identity on probes") {
  std::mt19937_64 rng(11);
  for (Index d : {1, 2, 3, 5}) {
    const LinearMap s = random_sandwich(rng, d);
    const LinearMap dense = LinearMap::dense(s.matrix());
    for (int k = 0; k < 10; ++k) {
      const SymMatrix u(random_matrix(rng, d, d));
      const SymMatrix v(random_matrix(rng, d, d));
      const double lhs = frob_inner(s.apply(u), v);
      CHECK(lhs == doctest::Approx(frob_inner(u, s.adjoint(v))).epsilon(1e-12));
      CHECK(frob_inner(dense.apply(u), v) == doctest::Approx(lhs).epsilon(1e-12));
      CHECK(frob_inner(u, dense.adjoint(v)) == doctest::Approx(lhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("structured form matches its definition") {
  std::mt19937_64 rng(12);
  const Dense c = random_matrix(rng, 3, 3);
  const Dense a = random_matrix(rng, 3, 3);
  const SymMatrix g = random_psd(rng, 3);
  const SymMatrix z = random_psd(rng, 3);
  const LinearMap m = LinearMap::sandwich(c, {a}, {RayTerm{g, z}});
  const SymMatrix u = random_psd(rng, 3);
  const Dense expected = c * u.dense() + u.dense() * c.transpose() + a * u.dense() * a.transpose() +
                         frob_inner(g, u) * z.dense();
  CHECK((m.apply(u).dense() - expected).norm() < 1e-12);
  CHECK(m.norm() == doctest::Approx(m.matrix().norm()));
}

TEST_CASE("zero and ray maps") {
  const LinearMap z = LinearMap::zero(2);
  CHECK(z.apply(SymMatrix::identity(2)).norm() == 0.0);
  CHECK(z.matrix().norm() == 0.0);
  const LinearMap r = LinearMap::ray(2, {RayTerm{SymMatrix::unit(2, 0), SymMatrix::unit(2, 1)}});
  const SymMatrix out = r.apply(SymMatrix::identity(2));
  CHECK(out(1, 1) == 1.0);
  CHECK(out(0, 0) == 0.0);
  CHECK(r.adjoint(SymMatrix::identity(2))(0, 0) == 1.0);
}

TEST_CASE("compensating rays reproduce the mu compensator") {
  JumpMeasureSpec jumps;
  jumps.mu_atoms.emplace_back(PsdMatrix::unit(2, 0).scaled(0.5), PsdMatrix::identity(2), 2.0);
  jumps.mu_atoms.emplace_back(PsdMatrix::unit(2, 1).scaled(3.0), PsdMatrix::unit(2, 1), 1.0);
  const LinearMap gamma = LinearMap::ray(2, LinearMap::compensating_rays(jumps, 2));
  std::mt19937_64 rng(2);
  for (int k = 0; k < 5; ++k) {
    const SymMatrix x = random_psd(rng, 2);
    CHECK(affsv::test::max_abs_diff(gamma.apply(x), compensator_small_jumps(jumps, x)) < 1e-13);
  }
}

TEST_CASE("dense action must be square in d^2") {
  CHECK_THROWS_AS(LinearMap::dense(Dense::Zero(3, 3)), DimensionError);
  CHECK_THROWS_AS(LinearMap::sandwich(Dense::Zero(2, 2), {Dense::Zero(3, 3)}), DimensionError);
}
