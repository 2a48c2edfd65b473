#pragma once

// The functions F and R, the generalised Riccati system for (Phi, psi1, psi2),
// its truncation ladder, and the closed form of the Levy-driven case.
//
// The first argument u1 of the transform is purely imaginary, u1 = i v1, so
// psi1 = i v(t) with v(t) = S*(t) v1 and both psi2 and Phi stay real. The
// quadratic term of R then enters with a plus sign: (iv) (x) (iv) = -v (x) v.

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "affsv/params.hpp"
#include "affsv/semigroup.hpp"

namespace affsv {

struct RiccatiInput {
  AdmissibleParams params;
  NoiseSpec noise;
  Generator gen;
  HVector u1_imag;  // v1, with u1 = i v1
  PsdMatrix u2;
  double horizon = 1.0;
  double dt = 1e-3;

  void check() const;
};

struct RiccatiSolution {
  std::vector<double> grid;
  std::vector<double> phi;
  std::vector<HVector> psi1_imag;  // v(t_i), psi1 = i v(t_i)
  std::vector<PsdMatrix> psi2;
  NoiseMode noise_mode = NoiseMode::Q;
  /// Largest Frobenius change made by the post-step cone projection.
  double max_projection = 0.0;

  double horizon() const { return grid.empty() ? 0.0 : grid.back(); }
  /// Index of the grid point equal to t; DomainError if t is beyond the
  /// horizon or between grid points.
  std::size_t index_of(double t) const;
  /// Smallest eigenvalue over all psi2 grid points.
  double min_eig_psi2() const;
};

/// Largest allowed post-step projection change, relative to 1 + |psi2|.
inline constexpr double kTolProjection = 1e-6;

double F_fn(const AdmissibleParams& p, const SymMatrix& u);

SymMatrix R_fn(const AdmissibleParams& p, const PsdMatrix& d_eff, const HVector& v, const SymMatrix& u);

std::vector<HVector> solve_psi1(const Generator& gen, const HVector& v1, std::span<const double> grid);

/// Uniform time grid 0 = t_0 < ... < t_N = horizon with step close to dt.
std::vector<double> make_grid(double horizon, double dt);

/// RK4 for psi2 with PSD projection after each step, Simpson for Phi.
RiccatiSolution solve_riccati(const RiccatiInput& input);

/// Same system with jump atoms of norm <= 1/k removed.
RiccatiSolution solve_riccati_ladder(const RiccatiInput& input, int k);

/// E[exp(i <Y_t, v1>)] for mu = 0 from the explicit integrals
///   psi2(s) = 1/2 int_0^s e^{(s-tau) B*} (D^{1/2} S*(tau) v1)^{(x)2} dtau,
///   Phi(t)  = int_0^t phi_L(psi2(s)) ds,
/// evaluated with composite Gauss-Legendre quadrature.
std::complex<double> bns_closed_form(const AdmissibleParams& p, const Generator& gen,
                                     const PsdMatrix& d_eff, const SymMatrix& x, const HVector& y,
                                     const HVector& v1, double t, int panels = 16);

/// One row per grid point: t, phi, psi1 entries, psi2 upper triangle.
void write_csv(std::ostream& os, const RiccatiSolution& sol);

}  // namespace affsv
