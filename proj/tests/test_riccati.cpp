#include <doctest.h>

#include <cmath>
#include <sstream>

#include "affsv/riccati.hpp"
#include "affsv/transform.hpp"
#include "test_util.hpp"

using namespace affsv;
using affsv::test::e11;
using affsv::test::random_matrix;
using affsv::test::random_psd;
using affsv::test::yule_params;

namespace {

const double kE = std::exp(1.0);

NoiseSpec q_identity(Index d) { return {NoiseMode::Q, PsdMatrix::identity(d)}; }

HVector unit_vector(Index d, Index i) {
  HVector v = HVector::Zero(d);
  v(i) = 1.0;
  return v;
}

RiccatiInput make_input(AdmissibleParams p, const HVector& v1, const PsdMatrix& u2, double horizon, double dt) {
  const Index d = p.dim();
  RiccatiInput in;
  in.params = std::move(p);
  in.noise = q_identity(d);
  in.gen = Generator::zero(d);
  in.u1_imag = v1;
  in.u2 = u2;
  in.horizon = horizon;
  in.dt = dt;
  return in;
}

/// q(t) solving q' = 1 - e^{-q}: e^{q(t)} - 1 = e^t (e^{q0} - 1)
double yule_q(double q0, double t) { return std::log1p(std::exp(t) * std::expm1(q0)); }

/// Levy case with every ingredient switched on: sandwich B, small and large
/// m atoms, dense generator, non-diagonal D.
RiccatiInput levy_input(const HVector& v1) {
  AdmissibleParams p;
  Dense c(2, 2);
  c << -1.0, 0.2, 0.0, -0.5;
  Dense b(2, 2);
  b << 0.13, 0.02, 0.02, 0.06;
  p.b = SymMatrix(b);
  p.B = LinearMap::sandwich(c);
  Dense xi(2, 2);
  xi << 0.3, 0.1, 0.1, 0.1;
  p.jumps.m_atoms.emplace_back(PsdMatrix::checked(xi), 0.3);
  p.jumps.m_atoms.emplace_back(PsdMatrix::unit(2, 0).scaled(1.5), 0.2);
  RiccatiInput in = make_input(p, v1, PsdMatrix::zero(2), 1.0, 1e-3);
  Dense d(2, 2);
  d << 1.0, 0.3, 0.3, 0.6;
  in.noise = {NoiseMode::D, PsdMatrix::checked(d)};
  Dense a(2, 2);
  a << -0.5, 0.1, 0.0, -0.2;
  in.gen = Generator::dense(a);
  return in;
}

}  // namespace

TEST_CASE("F_fn examples") {
  AdmissibleParams p;
  p.b = SymMatrix::zero(2);
  p.B = LinearMap::zero(2);
  CHECK(F_fn(p, SymMatrix::zero(2)) == 0.0);
  p.b = SymMatrix::unit(2, 0);
  CHECK(F_fn(p, SymMatrix::unit(2, 0) * 2.0) == doctest::Approx(2.0));
  p.b = SymMatrix::zero(2);
  p.jumps.m_atoms.emplace_back(PsdMatrix::unit(2, 0), 1.0);
  CHECK(F_fn(p, e11(2)) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("R_fn examples") {
  AdmissibleParams p;
  p.b = SymMatrix::zero(2);
  p.B = LinearMap::zero(2);
  const PsdMatrix id = PsdMatrix::identity(2);
  CHECK(test::max_abs_diff(R_fn(p, id, unit_vector(2, 0), SymMatrix::zero(2)), e11(2) * 0.5) < 1e-15);
  CHECK(R_fn(p, id, HVector::Zero(2), SymMatrix::unit(2, 1)).norm() == 0.0);
  const AdmissibleParams y = yule_params();
  for (double q : {0.1, 1.0, 3.0}) {
    const SymMatrix r = R_fn(y, id, HVector::Zero(2), e11(2) * q);
    CHECK(test::max_abs_diff(r, e11(2) * (1.0 - std::exp(-q))) < 1e-14);
  }
}

TEST_CASE("solve_psi1 examples") {
  const std::vector<double> grid = {0.0, 0.25, 1.0, 2.0};
  const HVector v1 = HVector::LinSpaced(2, 1.0, -2.0);
  for (const auto& v : solve_psi1(Generator::zero(2), v1, grid)) CHECK(v == v1);
  const auto scalar = solve_psi1(Generator::scalar(2, -0.7), v1, grid);
  Dense n = Dense::Zero(2, 2);
  n(0, 1) = 1.0;
  const auto nil = solve_psi1(Generator::dense(n), v1, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK((scalar[i] - std::exp(-0.7 * grid[i]) * v1).norm() < 1e-14);
    CHECK((nil[i] - (Dense::Identity(2, 2) + grid[i] * n.transpose()) * v1).norm() < 1e-14);
  }
}

TEST_CASE("trivial query gives the zero solution") {
  const RiccatiSolution sol = solve_riccati(make_input(yule_params(), HVector::Zero(2), PsdMatrix::zero(2), 1.0, 0.01));
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    CHECK(sol.psi2[i].norm() == 0.0);
    CHECK(sol.phi[i] == 0.0);
  }
}

TEST_CASE("BNS Gaussian case") {
  AdmissibleParams p;
  p.b = SymMatrix::diag(HVector::Constant(2, 0.02));
  p.B = LinearMap::zero(2);
  const HVector v1 = unit_vector(2, 0) + 0.5 * unit_vector(2, 1);
  const RiccatiSolution sol = solve_riccati(make_input(p, v1, PsdMatrix::zero(2), 1.0, 1e-3));
  for (std::size_t i = 0; i < sol.grid.size(); i += 100) {
    const double t = sol.grid[i];
    CHECK(test::max_abs_diff(sol.psi2[i], outer(v1, v1) * (0.5 * t)) < 1e-12);
    CHECK(sol.phi[i] == doctest::Approx(0.25 * t * t * v1.dot(p.b.dense() * v1)).epsilon(1e-10));
  }
}

TEST_CASE("Yule Laplace oracle") {
  const RiccatiSolution sol = solve_riccati(make_input(yule_params(), HVector::Zero(2), PsdMatrix::unit(2, 0), 1.0, 1e-3));
  const double q1 = std::log(1.0 + (kE - 1.0) * kE);
  CHECK(q1 == doctest::Approx(1.73533).epsilon(1e-5));
  CHECK(sol.psi2.back()(0, 0) == doctest::Approx(q1).epsilon(1e-12));
  CHECK(sol.psi2.back()(1, 1) == 0.0);
  for (double phi : sol.phi) CHECK(phi == 0.0);
  for (std::size_t i = 0; i < sol.grid.size(); i += 50) CHECK(sol.psi2[i](0, 0) == doctest::Approx(yule_q(1.0, sol.grid[i])).epsilon(1e-12));
}

TEST_CASE("initial conditions and cone invariant") {
  std::mt19937_64 rng(31);
  RiccatiInput in = levy_input(test::random_vector(rng, 2));
  in.u2 = random_psd(rng, 2);
  const RiccatiSolution sol = solve_riccati(in);
  CHECK(sol.phi[0] == 0.0);
  CHECK(sol.psi1_imag[0] == in.u1_imag);
  CHECK(sol.psi2[0].dense() == in.u2.dense());
  CHECK(sol.min_eig_psi2() >= -1e-10);
  CHECK(sol.noise_mode == NoiseMode::D);
  CHECK_THROWS_AS(sol.index_of(1.5), DomainError);
  CHECK_THROWS_AS(sol.index_of(0.0005), DomainError);
  CHECK(sol.index_of(0.5) == 500);
}

TEST_CASE("input checks") {
  RiccatiInput in = make_input(yule_params(), HVector::Zero(2), PsdMatrix::zero(2), 1.0, 2.0);
  CHECK_THROWS_AS(solve_riccati(in), DomainError);
  in.dt = 0.1;
  in.u1_imag = HVector::Zero(3);
  CHECK_THROWS_AS(solve_riccati(in), DimensionError);
}

TEST_CASE("coarse steps on a fast rotation are rejected") {
  // B*(u) = J^T u + u J with J skew: the exact flow is a congruence and stays in the cone
  Dense j(2, 2);
  j << 0.0, 100.0, -100.0, 0.0;
  AdmissibleParams p;
  p.b = SymMatrix::zero(2);
  p.B = LinearMap::sandwich(j.transpose());
  const RiccatiInput coarse = make_input(p, HVector::Zero(2), PsdMatrix::unit(2, 0), 0.3, 0.03);
  CHECK_THROWS_AS(solve_riccati(coarse), StepRejected);
  const RiccatiInput fine = make_input(p, HVector::Zero(2), PsdMatrix::unit(2, 0), 0.3, 1e-4);
  const RiccatiSolution sol = solve_riccati(fine);
  CHECK(sol.psi2.back().sym().trace() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("step halving converges at fourth order") {
  const double exact = yule_q(1.0, 1.0);
  std::vector<double> err;
  for (double dt : {0.2, 0.1, 0.05}) {
    const RiccatiSolution sol = solve_riccati(make_input(yule_params(), HVector::Zero(2), PsdMatrix::unit(2, 0), 1.0, dt));
    err.push_back(std::abs(sol.psi2.back()(0, 0) - exact));
  }
  CHECK(std::log2(err[0] / err[1]) >= 3.5);
  CHECK(std::log2(err[1] / err[2]) >= 3.5);
}

TEST_CASE("semiflow identity") {
  // Yule ray plus drift and m jumps so that Phi is not identically zero
  AdmissibleParams p = yule_params();
  p.b = SymMatrix::diag(HVector::Constant(2, 0.3));
  p.jumps.m_atoms.emplace_back(PsdMatrix::unit(2, 1).scaled(0.4), 0.5);
  std::mt19937_64 rng(32);
  const PsdMatrix u2 = random_psd(rng, 2);
  const double s = 0.3;
  const double t = 0.7;
  const RiccatiSolution full = solve_riccati(make_input(p, HVector::Zero(2), u2, s + t, 1e-3));
  const std::size_t is = full.index_of(s);
  const RiccatiSolution rest = solve_riccati(make_input(p, HVector::Zero(2), full.psi2[is], t, 1e-3));
  CHECK((full.psi2.back().sym() - rest.psi2.back().sym()).norm() <= 1e-6);
  CHECK(std::abs(full.phi.back() - rest.phi.back() - full.phi[is]) <= 1e-6);
  CHECK(std::abs(full.phi.back()) > 0.1);
}

TEST_CASE("ladder examples") {
  AdmissibleParams p = yule_params();
  p.b = SymMatrix::diag(HVector::Constant(2, 0.5));
  p.jumps.m_atoms.emplace_back(PsdMatrix::unit(2, 1).scaled(0.3), 1.0);
  std::mt19937_64 rng(33);
  const RiccatiInput in = make_input(p, test::random_vector(rng, 2), random_psd(rng, 2), 1.0, 1e-2);
  const RiccatiSolution full = solve_riccati(in);
  const RiccatiSolution k4 = solve_riccati_ladder(in, 4);
  CHECK(k4.psi2.back().dense() == full.psi2.back().dense());
  CHECK(k4.phi.back() == full.phi.back());

  AdmissibleParams small;
  small.b = SymMatrix::diag(HVector::Constant(2, 0.5));
  small.B = LinearMap::zero(2);
  small.jumps.m_atoms.emplace_back(PsdMatrix::unit(2, 1).scaled(0.3), 1.0);
  AdmissibleParams drift_only = small;
  drift_only.jumps = {};
  RiccatiInput a = in;
  a.params = small;
  RiccatiInput b = in;
  b.params = drift_only;
  const RiccatiSolution k1 = solve_riccati_ladder(a, 1);
  const RiccatiSolution pure = solve_riccati(b);
  CHECK(k1.phi.back() == pure.phi.back());
  CHECK(k1.psi2.back().dense() == pure.psi2.back().dense());
  CHECK_THROWS(solve_riccati_ladder(in, 0));
}

TEST_CASE("ladder is monotone in cone order") {
  // Yule ray plus a small mu atom along the same ray
  AdmissibleParams p;
  p.b = SymMatrix::zero(2);
  p.jumps.mu_atoms.emplace_back(PsdMatrix::unit(2, 0), PsdMatrix::unit(2, 0), 1.0);
  p.jumps.mu_atoms.emplace_back(PsdMatrix::unit(2, 0).scaled(0.05), PsdMatrix::identity(2), 2.0);
  p.jumps.m_atoms.emplace_back(PsdMatrix::unit(2, 1).scaled(0.2), 1.0);
  p.b = SymMatrix::unit(2, 1) * 0.3;
  p.B = LinearMap::ray(2, LinearMap::compensating_rays(p.jumps, 2));
  std::mt19937_64 rng(34);
  const RiccatiInput in = make_input(p, test::random_vector(rng, 2), random_psd(rng, 2), 1.0, 1e-3);
  std::vector<RiccatiSolution> sols;
  for (int k : {1, 3, 6, 25, 100}) sols.push_back(solve_riccati_ladder(in, k));
  sols.push_back(solve_riccati(in));
  for (std::size_t j = 0; j + 1 < sols.size(); ++j) {
    for (std::size_t i = 0; i < sols[j].grid.size(); i += 100) {
      const SymMatrix diff = sols[j].psi2[i].sym() - sols[j + 1].psi2[i].sym();
      CHECK(min_eig(diff) >= -1e-9);
    }
  }
  CHECK(sols[4].psi2.back().dense() == sols[5].psi2.back().dense());
}

TEST_CASE("bns_closed_form examples") {
  AdmissibleParams p;
  p.b = SymMatrix::zero(2);
  p.B = LinearMap::zero(2);
  const HVector y = HVector::LinSpaced(2, 0.3, -0.4);
  const HVector v1 = HVector::LinSpaced(2, 1.0, 2.0);
  const Complex z = bns_closed_form(p, Generator::zero(2), PsdMatrix::identity(2), SymMatrix::zero(2), y, v1, 1.0);
  CHECK(std::abs(z - std::exp(Complex(0.0, y.dot(v1)))) < 1e-15);

  p.b = SymMatrix::diag(HVector::Constant(2, 0.02));
  HVector xd(2);
  xd << 0.04, 0.01;
  const Complex g = bns_closed_form(p, Generator::zero(2), PsdMatrix::identity(2), SymMatrix::diag(xd),
                                    HVector::Zero(2), unit_vector(2, 0), 1.0);
  CHECK(g.real() == doctest::Approx(std::exp(-0.025)).epsilon(1e-12));
  CHECK(std::abs(g.imag()) < 1e-15);
  CHECK(std::exp(-0.025) == doctest::Approx(0.975310).epsilon(1e-6));

  AdmissibleParams with_mu = yule_params();
  CHECK_THROWS_AS(bns_closed_form(with_mu, Generator::zero(2), PsdMatrix::identity(2), SymMatrix::zero(2), y, v1, 1.0),
                  DomainError);
}

TEST_CASE("closed form agrees with the Riccati solver") {
  std::mt19937_64 rng(35);
  for (int k = 0; k < 3; ++k) {
    const RiccatiInput in = levy_input(test::random_vector(rng, 2));
    const RiccatiSolution sol = solve_riccati(in);
    const PsdMatrix x = random_psd(rng, 2).scaled(0.1);
    const HVector y = test::random_vector(rng, 2);
    const TransformQuery q{in.u1_imag, PsdMatrix::zero(2), 1.0};
    const Complex riccati = affine_value(sol, y, x.sym(), q);
    const Complex closed = bns_closed_form(in.params, in.gen, in.noise.effective_D(), x.sym(), y, in.u1_imag, 1.0);
    CHECK(std::abs(riccati - closed) <= 1e-8);
  }
}

TEST_CASE("Yosida approximations of the generator converge") {
  const Generator shift = Generator::shift_grid({0.0, 0.25, 0.5, 1.0, 2.0, 3.0});
  const Generator base = Generator::dense(shift.matrix());
  AdmissibleParams p = yule_params(6);
  RiccatiInput in = make_input(p, HVector::LinSpaced(6, 1.0, 0.2), PsdMatrix::unit(6, 0), 1.0, 1e-2);
  in.gen = base;
  const RiccatiSolution ref = solve_riccati(in);
  double prev1 = 1e300;
  double prev2 = 1e300;
  for (int n : {4, 16, 64}) {
    RiccatiInput yn = in;
    yn.gen = yosida(base, n);
    const RiccatiSolution s = solve_riccati(yn);
    double e1 = 0.0;
    double e2 = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      e1 = std::max(e1, (s.psi1_imag[i] - ref.psi1_imag[i]).norm());
      e2 = std::max(e2, (s.psi2[i].sym() - ref.psi2[i].sym()).norm());
    }
    CHECK(e1 < prev1);
    CHECK(e2 < prev2);
    prev1 = e1;
    prev2 = e2;
  }
}

TEST_CASE("csv layout") {
  const RiccatiSolution sol = solve_riccati(make_input(yule_params(), HVector::Zero(2), PsdMatrix::unit(2, 0), 1.0, 0.5));
  std::ostringstream os;
  write_csv(os, sol);
  std::string header;
  std::istringstream is(os.str());
  std::getline(is, header);
  CHECK(header == "t,phi,psi1_0,psi1_1,psi2_0_0,psi2_0_1,psi2_1_1");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  CHECK(rows == 3);
}
