#include <doctest.h>

#include <cmath>

#include "affsv/transform.hpp"
#include "test_util.hpp"

using namespace affsv;
using affsv::test::random_psd;
using affsv::test::yule_params;

namespace {

RiccatiInput input_for(const AdmissibleParams& p, const TransformQuery& q, double dt = 1e-3) {
  RiccatiInput in;
  in.params = p;
  in.noise = {NoiseMode::Q, PsdMatrix::identity(p.dim())};
  in.gen = Generator::zero(p.dim());
  in.u1_imag = q.v1;
  in.u2 = q.u2;
  in.horizon = q.t;
  in.dt = dt;
  return in;
}

AdmissibleParams general_params() {
  AdmissibleParams p = yule_params();
  p.b = SymMatrix::diag(HVector::Constant(2, 0.2));
  p.jumps.m_atoms.emplace_back(PsdMatrix::unit(2, 1).scaled(0.5), 0.4);
  p.B = LinearMap::sandwich(-0.3 * Dense::Identity(2, 2), {}, LinearMap::compensating_rays(p.jumps, 2));
  return p;
}

}  // namespace

TEST_CASE("affine_value examples") {
  const TransformQuery trivial{HVector::Zero(2), PsdMatrix::zero(2), 1.0};
  const RiccatiSolution s0 = solve_riccati(input_for(yule_params(), trivial));
  CHECK(affine_value(s0, HVector::Zero(2), SymMatrix::unit(2, 0), trivial) == Complex(1.0, 0.0));

  const TransformQuery laplace{HVector::Zero(2), PsdMatrix::unit(2, 0), 1.0};
  const RiccatiSolution sy = solve_riccati(input_for(yule_params(), laplace));
  const double e = std::exp(1.0);
  const Complex v = affine_value(sy, HVector::Zero(2), SymMatrix::unit(2, 0), laplace);
  CHECK(v.real() == doctest::Approx(1.0 / (e * e - e + 1.0)).epsilon(1e-9));
  CHECK(v.real() == doctest::Approx(0.176344).epsilon(1e-5));
  CHECK(v.imag() == 0.0);

  AdmissibleParams bns;
  bns.b = SymMatrix::diag(HVector::Constant(2, 0.02));
  bns.B = LinearMap::zero(2);
  HVector v1 = HVector::Zero(2);
  v1(0) = 1.0;
  const TransformQuery g{v1, PsdMatrix::zero(2), 1.0};
  HVector xd(2);
  xd << 0.04, 0.01;
  const Complex gv = affine_value(solve_riccati(input_for(bns, g)), HVector::Zero(2), SymMatrix::diag(xd), g);
  CHECK(gv.real() == doctest::Approx(std::exp(-0.025)).epsilon(1e-10));

  const TransformQuery late{HVector::Zero(2), PsdMatrix::zero(2), 2.0};
  CHECK_THROWS_AS(affine_value(s0, HVector::Zero(2), SymMatrix::zero(2), late), DomainError);
}

TEST_CASE("compare examples") {
  const McEstimate exact{Complex(0.5, 0.25), 0.0, 0.0, 10};
  CHECK(compare(Complex(0.5, 0.25), exact).pass);
  CHECK_FALSE(compare(Complex(0.5, 0.26), exact).pass);

  const McEstimate near{Complex(0.1758, 0.0), 0.0004, 0.0, 1000};
  const CompareReport r = compare(Complex(0.1763, 0.0), near);
  CHECK(std::abs(r.z_re) == doctest::Approx(1.25));
  CHECK(r.pass);

  const McEstimate far{Complex(0.9, 0.0), 0.001, 0.0, 1000};
  CHECK_FALSE(compare(Complex(0.9753, 0.0), far).pass);
}

TEST_CASE("mc_transform examples") {
  SimConfig cfg;
  cfg.params.b = SymMatrix::zero(2);
  cfg.params.B = LinearMap::zero(2);
  cfg.noise = {NoiseMode::Q, PsdMatrix::identity(2)};
  cfg.gen = Generator::zero(2);
  cfg.x0 = PsdMatrix::zero(2);
  cfg.y0 = HVector::LinSpaced(2, 0.4, -0.3);
  cfg.horizon = 1.0;
  cfg.dt = 0.1;
  cfg.n_paths = 50;
  const auto xs = simulate_X(cfg);
  std::vector<PathSample> paths;
  for (std::size_t p = 0; p < xs.size(); ++p) {
    PathSample s = xs[p];
    s.y_path = simulate_Y(cfg, s, p);
    paths.push_back(std::move(s));
  }
  const McEstimate one = mc_transform(paths, {HVector::Zero(2), PsdMatrix::zero(2), 1.0});
  CHECK(one.estimate == Complex(1.0, 0.0));
  CHECK(one.stderr() == 0.0);

  const HVector v1 = HVector::LinSpaced(2, 1.0, 2.0);
  const McEstimate det = mc_transform(paths, {v1, PsdMatrix::zero(2), 1.0});
  const Complex expected = std::exp(Complex(0.0, cfg.y0.dot(v1)));
  CHECK(std::abs(det.estimate - expected) < 1e-15);
  CHECK(det.stderr() == 0.0);

  CHECK_THROWS_AS(mc_transform(std::span<const PathSample>(), {v1, PsdMatrix::zero(2), 1.0}), DomainError);
}

TEST_CASE("modulus bound and conjugate symmetry") {
  std::mt19937_64 rng(41);
  const AdmissibleParams p = general_params();
  for (int k = 0; k < 5; ++k) {
    const TransformQuery q{test::random_vector(rng, 2), random_psd(rng, 2), 1.0};
    const TransformQuery neg{-q.v1, q.u2, 1.0};
    const HVector y = test::random_vector(rng, 2);
    const SymMatrix x = random_psd(rng, 2).sym();
    const Complex a = affine_value(solve_riccati(input_for(p, q, 1e-2)), y, x, q);
    const Complex b = affine_value(solve_riccati(input_for(p, neg, 1e-2)), y, x, neg);
    CHECK(std::abs(a) <= 1.0);
    CHECK(std::abs(a - std::conj(b)) < 1e-14);
  }
}

TEST_CASE("tower identity for u1 = 0") {
  std::mt19937_64 rng(42);
  const AdmissibleParams p = general_params();
  const PsdMatrix u2 = random_psd(rng, 2);
  const SymMatrix x = random_psd(rng, 2).sym();
  const double s = 0.4;
  const double t = 0.6;
  const TransformQuery full{HVector::Zero(2), u2, s + t};
  const RiccatiSolution sol = solve_riccati(input_for(p, full));
  const std::size_t is = sol.index_of(s);
  const TransformQuery rest{HVector::Zero(2), sol.psi2[is], t};
  const Complex lhs = affine_value(sol, HVector::Zero(2), x, full);
  const Complex rhs = affine_value(solve_riccati(input_for(p, rest)), HVector::Zero(2), x, rest) * std::exp(-sol.phi[is]);
  CHECK(std::abs(lhs - rhs) < 1e-7);
}

TEST_CASE("accumulator merge is associative in block order") {
  const TransformQuery q{HVector::Ones(1), PsdMatrix::identity(1), 1.0};
  TransformAccumulator a(q);
  TransformAccumulator b(q);
  TransformAccumulator all(q);
  for (int k = 0; k < 100; ++k) {
    const Complex z(std::cos(0.1 * k), std::sin(0.3 * k));
    (k < 40 ? a : b).add(z);
    all.add(z);
  }
  a.merge(b);
  CHECK(std::abs(a.result().estimate - all.result().estimate) < 1e-15);
  CHECK(a.result().n == 100);
}
