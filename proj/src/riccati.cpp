#include "affsv/riccati.hpp"

#include <cmath>
#include <ostream>

#include "affsv/expm.hpp"

namespace affsv {

namespace {

// R with D^{1/2} precomputed.
class RiccatiField {
 public:
  RiccatiField(const AdmissibleParams& p, const PsdMatrix& d_eff)
      : p_(p), sqrt_d_(psd_sqrt(d_eff).dense()) {}

  SymMatrix operator()(const HVector& v, const SymMatrix& u) const {
    SymMatrix r = p_.B.adjoint(u);
    const HVector w = sqrt_d_ * v;
    r += 0.5 * outer(w, w);
    for (const auto& a : p_.jumps.mu_atoms) {
      const double n2 = frob_inner(a.xi.sym(), a.xi.sym());
      r -= (kernel_K(a.xi, u) * a.mass / n2) * a.weight.sym();
    }
    return r;
  }

  const Dense& sqrt_d() const { return sqrt_d_; }

 private:
  const AdmissibleParams& p_;
  Dense sqrt_d_;
};

// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
struct GaussRule {
  HVector nodes;
  HVector weights;
};

GaussRule gauss_legendre(int n) {
  Dense j = Dense::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Dense> es(j);
  GaussRule rule{es.eigenvalues(), 2.0 * es.eigenvectors().row(0).transpose().array().square()};
  return rule;
}

// Restriction of B* to symmetric matrices as a d^2 x d^2 matrix on vec().
Dense adjoint_on_symmetric(const LinearMap& b) {
  const Index d = b.dim();
  const Index n = d * d;
  Dense sym = Dense::Zero(n, n);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      sym(j * d + i, j * d + i) += 0.5;
      sym(j * d + i, i * d + j) += 0.5;
    }
  }
  return sym * b.matrix().transpose() * sym;
}

}  // namespace

void RiccatiInput::check() const {
  params.check_dims();
  const Index d = params.dim();
  require_same_dim(noise.matrix.dim(), d, "RiccatiInput noise");
  require_same_dim(gen.dim(), d, "RiccatiInput generator");
  require_same_dim(u1_imag.size(), d, "RiccatiInput u1");
  require_same_dim(u2.dim(), d, "RiccatiInput u2");
  if (!u1_imag.allFinite()) throw DomainError("RiccatiInput: non-finite u1");
  if (!(horizon > 0.0) || !(dt > 0.0) || dt > horizon * (1.0 + 1e-12)) {
    throw DomainError("RiccatiInput: need horizon > 0 and 0 < dt <= horizon");
  }
}

std::size_t RiccatiSolution::index_of(double t) const {
  if (grid.empty()) throw DomainError("RiccatiSolution: empty solution");
  const double tol = 1e-9 * (1.0 + std::abs(t));
  if (t < -tol || t > grid.back() + tol) throw DomainError("RiccatiSolution: time beyond horizon");
  const auto it = std::lower_bound(grid.begin(), grid.end(), t - tol);
  if (it == grid.end() || std::abs(*it - t) > tol) {
    throw DomainError("RiccatiSolution: time is not a grid point");
  }
  return static_cast<std::size_t>(it - grid.begin());
}

double RiccatiSolution::min_eig_psi2() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : psi2) lo = std::min(lo, min_eig(p.sym()));
  return lo;
}

double F_fn(const AdmissibleParams& p, const SymMatrix& u) {
  double f = frob_inner(p.b, u);
  for (const auto& a : p.jumps.m_atoms) f -= kernel_K(a.xi, u) * a.mass;
  return f;
}

SymMatrix R_fn(const AdmissibleParams& p, const PsdMatrix& d_eff, const HVector& v, const SymMatrix& u) {
  return RiccatiField(p, d_eff)(v, u);
}

std::vector<HVector> solve_psi1(const Generator& gen, const HVector& v1, std::span<const double> grid) {
  std::vector<HVector> out;
  out.reserve(grid.size());
  for (const double t : grid) out.push_back(apply_adjoint_semigroup(gen, t, v1));
  return out;
}

std::vector<double> make_grid(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0)) throw DomainError("make_grid: need horizon > 0, dt > 0");
  const double ratio = horizon / dt;
  auto n = static_cast<long>(std::llround(ratio));
  if (n < 1 || std::abs(static_cast<double>(n) - ratio) > 1e-9 * ratio) {
    n = static_cast<long>(std::ceil(ratio));
  }
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) grid[static_cast<std::size_t>(i)] = horizon * static_cast<double>(i) / static_cast<double>(n);
  grid.back() = horizon;
  return grid;
}

RiccatiSolution solve_riccati(const RiccatiInput& input) {
  input.check();
  const RiccatiField field(input.params, input.noise.effective_D());

  RiccatiSolution sol;
  sol.noise_mode = input.noise.mode;
  sol.grid = make_grid(input.horizon, input.dt);
  const std::size_t n = sol.grid.size() - 1;
  const double h = input.horizon / static_cast<double>(n);

  std::vector<double> times(2 * n + 1);
  for (std::size_t i = 0; i <= 2 * n; ++i) times[i] = 0.5 * h * static_cast<double>(i);
  times.back() = input.horizon;
  const std::vector<HVector> v = solve_psi1(input.gen, input.u1_imag, times);

  sol.phi.reserve(n + 1);
  sol.psi1_imag.reserve(n + 1);
  sol.psi2.reserve(n + 1);
  sol.phi.push_back(0.0);
  sol.psi1_imag.push_back(input.u1_imag);
  sol.psi2.push_back(input.u2);

  SymMatrix psi = input.u2.sym();
  SymMatrix r_now = field(v[0], psi);
  double f_now = F_fn(input.params, psi);
  for (std::size_t i = 0; i < n; ++i) {
    const HVector& v_mid = v[2 * i + 1];
    const HVector& v_end = v[2 * i + 2];
    const SymMatrix k1 = r_now;
    const SymMatrix k2 = field(v_mid, psi + (0.5 * h) * k1);
    const SymMatrix k3 = field(v_mid, psi + (0.5 * h) * k2);
    const SymMatrix k4 = field(v_end, psi + h * k3);
    const SymMatrix raw = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!raw.dense().allFinite()) throw NumericalError("solve_riccati: non-finite state");

    PsdMatrix next = project_psd(raw);
    const double moved = (next.sym() - raw).norm();
    sol.max_projection = std::max(sol.max_projection, moved);
    if (moved > kTolProjection * (1.0 + raw.norm())) {
      throw StepRejected("solve_riccati: cone projection moved psi2 by " + std::to_string(moved) +
                         " at t = " + std::to_string(sol.grid[i + 1]) + "; reduce dt");
    }

    const SymMatrix r_next = field(v_end, next.sym());
    // cubic Hermite midpoint, so that Simpson's rule keeps fourth order
    const SymMatrix psi_mid = 0.5 * (psi + next.sym()) + (h / 8.0) * (r_now - r_next);
    const double f_next = F_fn(input.params, next.sym());
    const double f_mid = F_fn(input.params, psi_mid);
    sol.phi.push_back(sol.phi.back() + h / 6.0 * (f_now + 4.0 * f_mid + f_next));
    sol.psi1_imag.push_back(v_end);
    sol.psi2.push_back(next);

    psi = next.sym();
    r_now = r_next;
    f_now = f_next;
  }
  return sol;
}

RiccatiSolution solve_riccati_ladder(const RiccatiInput& input, int k) {
  RiccatiInput truncated = input;
  truncated.params.jumps = truncate_ladder(input.params.jumps, k);
  return solve_riccati(truncated);
}

std::complex<double> bns_closed_form(const AdmissibleParams& p, const Generator& gen,
                                     const PsdMatrix& d_eff, const SymMatrix& x, const HVector& y,
                                     const HVector& v1, double t, int panels) {
  if (!p.jumps.mu_atoms.empty()) throw DomainError("bns_closed_form: requires mu = 0");
  p.check_dims();
  const Index d = p.dim();
  require_same_dim(gen.dim(), d, "bns_closed_form generator");
  require_same_dim(d_eff.dim(), d, "bns_closed_form D");
  require_same_dim(x.dim(), d, "bns_closed_form x");
  require_same_dim(y.size(), d, "bns_closed_form y");
  require_same_dim(v1.size(), d, "bns_closed_form v1");
  if (!(t >= 0.0)) throw DomainError("bns_closed_form: t must be >= 0");
  if (panels < 1) throw DomainError("bns_closed_form: panels must be >= 1");

  const std::complex<double> drift_factor(0.0, y.dot(apply_adjoint_semigroup(gen, t, v1)));
  if (t == 0.0) return std::exp(drift_factor);

  const Dense sqrt_d = psd_sqrt(d_eff).dense();
  const bool has_b = p.B.kind() != LinearMap::Kind::zero;
  const Dense b_adj = has_b ? adjoint_on_symmetric(p.B) : Dense();
  const GaussRule rule = gauss_legendre(8);

  auto source = [&](double tau) -> HVector {
    const HVector w = sqrt_d * apply_adjoint_semigroup(gen, tau, v1);
    const Dense q = w * w.transpose();
    return Eigen::Map<const HVector>(q.data(), q.size());
  };
  // int_a^b f over `panels` equal pieces
  auto integrate = [&](double a, double b, const auto& f) {
    const double width = (b - a) / panels;
    decltype(f(a)) acc = f(a) * 0.0;
    for (int k = 0; k < panels; ++k) {
      const double lo = a + width * k;
      for (Index j = 0; j < rule.nodes.size(); ++j) {
        const double s = lo + 0.5 * width * (rule.nodes(j) + 1.0);
        acc = acc + (0.5 * width * rule.weights(j)) * f(s);
      }
    }
    return acc;
  };
  auto psi2_at = [&](double s) -> SymMatrix {
    if (s <= 0.0) return SymMatrix::zero(d);
    const HVector vec = integrate(0.0, s, [&](double tau) -> HVector {
      if (!has_b) return source(tau);
      return expm((s - tau) * b_adj) * source(tau);
    });
    return SymMatrix(0.5 * Eigen::Map<const Dense>(vec.data(), d, d));
  };

  const double phi = integrate(0.0, t, [&](double s) { return F_fn(p, psi2_at(s)); });
  const double state = frob_inner(x, psi2_at(t));
  return std::exp(drift_factor - phi - state);
}

void write_csv(std::ostream& os, const RiccatiSolution& sol) {
  const Index d = sol.psi2.empty() ? 0 : sol.psi2.front().dim();
  os << "t,phi";
  for (Index i = 0; i < d; ++i) os << ",psi1_" << i;
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) os << ",psi2_" << i << "_" << j;
  }
  os << '\n';
  os.precision(17);
  for (std::size_t k = 0; k < sol.grid.size(); ++k) {
    os << sol.grid[k] << ',' << sol.phi[k];
    for (Index i = 0; i < d; ++i) os << ',' << sol.psi1_imag[k](i);
    for (Index i = 0; i < d; ++i) {
      for (Index j = i; j < d; ++j) os << ',' << sol.psi2[k](i, j);
    }
    os << '\n';
  }
}

}  // namespace affsv
