#include "affsv/simulate.hpp"

#include <cmath>
#include <limits>

#include "affsv/riccati.hpp"
#include "affsv/stats.hpp"

namespace affsv {

namespace {

// Hard ceiling on the thinning majorant; beyond this the parameters are
// explosive on the simulated horizon.
constexpr double kMaxMajorant = 1e9;

std::size_t grid_index(const std::vector<double>& grid, double t) {
  const double tol = 1e-9 * (1.0 + std::abs(t));
  const auto it = std::lower_bound(grid.begin(), grid.end(), t - tol);
  if (it == grid.end() || std::abs(*it - t) > tol) throw DomainError("path grid: time is not a grid point");
  return static_cast<std::size_t>(it - grid.begin());
}

}  // namespace

void SimConfig::check() const {
  params.check_dims();
  const Index d = params.dim();
  require_same_dim(noise.matrix.dim(), d, "SimConfig noise");
  require_same_dim(gen.dim(), d, "SimConfig generator");
  require_same_dim(x0.dim(), d, "SimConfig x0");
  require_same_dim(y0.size(), d, "SimConfig y0");
  if (!y0.allFinite()) throw DomainError("SimConfig: non-finite y0");
  if (!(horizon > 0.0) || !(dt > 0.0) || n_paths == 0) {
    throw DomainError("SimConfig: horizon, dt and n_paths must be positive");
  }
}

std::size_t PathSample::index_of(double t) const { return grid_index(grid, t); }

PathSimulator::PathSimulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.check();
  const ValidationReport rep = validate_assumption_A(cfg_.params, cfg_.seed);
  if (!rep.hard_ok()) {
    for (const auto& v : rep.violations) {
      if (v.hard) {
        throw DomainError("simulation refused: admissibility item (" + std::to_string(v.item) +
                          ") violated: " + v.message);
      }
    }
  }
  for (const auto& v : rep.violations) warnings_.push_back(v.message);

  grid_ = make_grid(cfg_.horizon, cfg_.dt);
  const double h = grid_[1] - grid_[0];
  semigroup_step_ = cfg_.gen.semigroup_matrix(h);
  if (cfg_.gen.kind() == Generator::Kind::shift_grid) {
    // interpolated shifts do not compose exactly, so Y uses S(t_i - t_j) directly
    const Index d = cfg_.params.dim();
    const auto n = static_cast<Index>(grid_.size() - 1);
    semigroup_lags_.resize(d, d * n);
    for (Index k = 0; k < n; ++k) {
      semigroup_lags_.middleCols(d * k, d) = cfg_.gen.semigroup_matrix(h * static_cast<double>(k + 1));
    }
  }
  sqrt_noise_ = psd_sqrt(cfg_.noise.matrix).dense();

  // The inter-jump drift and the intensity are affine in x; tabulate both on vec(x).
  const Index d = cfg_.params.dim();
  const SymMatrix zero = SymMatrix::zero(d);
  const SymMatrix c = flow_drift(zero);
  drift_const_ = Eigen::Map<const HVector>(c.dense().data(), d * d);
  drift_linear_ = Dense::Zero(d * d, d * d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i <= j; ++i) {
      Dense e = Dense::Zero(d, d);
      e(i, j) = e(j, i) = 1.0;
      const SymMatrix f = flow_drift(SymMatrix::from_trusted(e)) - c;
      const Eigen::Map<const HVector> col(f.dense().data(), d * d);
      // symmetric x carries x_ij in both (i,j) and (j,i)
      const double share = i == j ? 1.0 : 0.5;
      drift_linear_.col(i + d * j) = share * col;
      drift_linear_.col(j + d * i) = share * col;
    }
  }
  drift_is_zero_ = drift_const_.isZero(0.0) && drift_linear_.isZero(0.0);
  const auto& jumps = cfg_.params.jumps;
  intensity_const_ = intensity_at(jumps, zero);
  intensity_weight_ = HVector::Zero(d * d);
  for (const auto& a : jumps.mu_atoms) {
    const SymMatrix w = (a.mass / frob_inner(a.xi.sym(), a.xi.sym())) * a.weight.sym();
    intensity_weight_ += Eigen::Map<const HVector>(w.dense().data(), d * d);
  }
}

double PathSimulator::intensity(const SymMatrix& x) const {
  return intensity_const_ + intensity_weight_.dot(Eigen::Map<const HVector>(x.dense().data(), x.dense().size()));
}

SymMatrix PathSimulator::flow_drift(const SymMatrix& x) const {
  const auto& p = cfg_.params;
  SymMatrix f = p.b + p.B.apply(x);
  f -= compensator_small_jumps(p.jumps, x);
  return f;
}

SymMatrix PathSimulator::flow(const SymMatrix& x, double tau) const {
  if (tau <= 0.0 || drift_is_zero_) return x;
  const Index d = x.dim();
  const Eigen::Map<const HVector> v(x.dense().data(), d * d);
  auto f = [this](const HVector& u) -> HVector { return drift_const_ + drift_linear_ * u; };
  const HVector k1 = f(v);
  const HVector k2 = f(v + (0.5 * tau) * k1);
  const HVector k3 = f(v + (0.5 * tau) * k2);
  const HVector k4 = f(v + tau * k3);
  const HVector next = v + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return SymMatrix(Eigen::Map<const Dense>(next.data(), d, d));
}

double PathSimulator::majorant(const SymMatrix& x, double span, double eta) const {
  double peak = intensity(x);
  if (!cfg_.params.jumps.mu_atoms.empty() && span > 0.0 && !drift_is_zero_) {
    peak = std::max({peak, intensity(flow(x, 0.5 * span)), intensity(flow(x, span))});
  }
  const double bound = (1.0 + eta) * std::max(peak, 0.0);
  if (!std::isfinite(bound) || bound > kMaxMajorant) {
    throw MajorantOverflow("thinning majorant " + std::to_string(bound) +
                           " exceeds the refresh bound; parameters explode on this horizon");
  }
  return bound;
}

PathSample PathSimulator::simulate_x(std::size_t path) const {
  auto rng = path_engine(cfg_.seed, path, 0);
  std::exponential_distribution<double> unit_exp(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto& jumps = cfg_.params.jumps;

  PathSample out;
  out.grid = grid_;
  out.x_path.reserve(grid_.size());
  out.min_eig_pre_projection = 0.0;

  SymMatrix x = cfg_.x0.sym();
  // pivoted LDL^T screens out PSD states before any eigendecomposition
  auto reproject = [&out](const SymMatrix& s) {
    const Eigen::LDLT<Dense> ldlt(s.dense());
    if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() >= 0.0) return PsdMatrix::from_trusted(s);
    const double lo = min_eig(s);
    out.min_eig_pre_projection = std::min(out.min_eig_pre_projection, lo);
    return lo >= 0.0 ? PsdMatrix::from_trusted(s) : project_psd(s);
  };
  out.x_path.push_back(reproject(x));
  x = out.x_path.back().sym();

  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    double t = grid_[i];
    const double t_end = grid_[i + 1];
    if (jumps.empty()) {
      x = flow(x, t_end - t);
    } else {
      double eta = kThinningEta;
      double bound = majorant(x, t_end - t, eta);
      while (true) {
        if (bound <= 0.0) {
          x = flow(x, t_end - t);
          break;
        }
        const double s = t + unit_exp(rng) / bound;
        if (s >= t_end) {
          x = flow(x, t_end - t);
          break;
        }
        x = flow(x, s - t);
        t = s;
        ++out.proposals;
        const double lambda = intensity(x);
        if (lambda > bound) {
          if (++out.majorant_doublings > kMaxMajorantDoublings) {
            throw MajorantOverflow("thinning majorant could not dominate the intensity");
          }
          eta *= 2.0;
          bound = majorant(x, t_end - t, eta);
          continue;
        }
        if (unif(rng) * bound > lambda) continue;

        const std::vector<double> rates = atom_rates(jumps, x);
        double pick = unif(rng) * lambda;
        std::size_t atom = 0;
        while (atom + 1 < rates.size() && pick >= rates[atom]) {
          pick -= rates[atom];
          ++atom;
        }
        // a zero-rate atom can only be reached through rounding; step back
        while (atom > 0 && rates[atom] <= 0.0) --atom;
        const PsdMatrix& xi = atom_jump(jumps, atom);
        x = reproject(x + xi.sym()).sym();
        out.jump_log.push_back({t, atom, xi});
        bound = majorant(x, t_end - t, eta);
      }
    }
    if (!x.dense().allFinite()) throw NumericalError("simulate_x: non-finite state");
    // without drift x is the last grid state or an already projected post-jump state
    out.x_path.push_back(drift_is_zero_ ? PsdMatrix::from_trusted(x) : reproject(x));
    x = out.x_path.back().sym();
  }
  return out;
}

std::vector<HVector> PathSimulator::simulate_y(const PathSample& xs, std::size_t path) const {
  if (xs.x_path.size() != grid_.size()) throw DimensionError("simulate_y: x path does not match the grid");
  auto rng = path_engine(cfg_.seed, path, 1);
  std::normal_distribution<double> normal;
  const Index d = cfg_.params.dim();
  const double root_h = std::sqrt(grid_[1] - grid_[0]);
  const bool q_model = cfg_.noise.mode == NoiseMode::Q;

  std::vector<HVector> y;
  y.reserve(grid_.size());
  y.push_back(cfg_.y0);
  HVector zeta(d);
  Dense vol;
  const SymMatrix* vol_for = nullptr;
  const bool lagged = semigroup_lags_.size() > 0;
  const auto steps = static_cast<Index>(grid_.size() - 1);
  // increments in reverse time order: slot steps-1-i holds step i
  HVector increments(lagged ? d * steps : 0);
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    const SymMatrix& x = xs.x_path[i].sym();
    if (vol_for == nullptr || x.dense() != vol_for->dense()) {
      const Dense sx = psd_sqrt(xs.x_path[i]).dense();
      vol = q_model ? Dense(sx * sqrt_noise_) : Dense(sqrt_noise_ * sx);
      vol_for = &x;
    }
    for (Index k = 0; k < d; ++k) zeta(k) = normal(rng);
    if (!lagged) {
      y.push_back(semigroup_step_ * (y.back() + root_h * (vol * zeta)));
      continue;
    }
    // Y_{i+1} = S(t_{i+1}) y0 + sum_{j <= i} S(t_{i+1} - t_j) increment_j
    const auto ii = static_cast<Index>(i);
    increments.segment(d * (steps - 1 - ii), d) = root_h * (vol * zeta);
    y.push_back(semigroup_lags_.middleCols(d * ii, d) * cfg_.y0 +
                semigroup_lags_.leftCols(d * (ii + 1)) * increments.tail(d * (ii + 1)));
  }
  return y;
}

PathSample PathSimulator::simulate(std::size_t path) const {
  PathSample s = simulate_x(path);
  if (cfg_.simulate_y) s.y_path = simulate_y(s, path);
  return s;
}

std::vector<PathSample> simulate_X(const SimConfig& cfg) {
  const PathSimulator sim(cfg);
  std::vector<PathSample> out;
  out.reserve(cfg.n_paths);
  for (std::size_t p = 0; p < cfg.n_paths; ++p) out.push_back(sim.simulate_x(p));
  return out;
}

std::vector<HVector> simulate_Y(const SimConfig& cfg, const PathSample& x_path, std::size_t path_index) {
  return PathSimulator(cfg).simulate_y(x_path, path_index);
}

std::vector<SymMatrix> mean_ode(const SimConfig& cfg) {
  cfg.check();
  const auto& p = cfg.params;
  auto drift = [&p](const SymMatrix& m) {
    return p.b + p.B.apply(m) + large_jump_drift(p.jumps, m);
  };
  const std::vector<double> grid = make_grid(cfg.horizon, cfg.dt);
  std::vector<SymMatrix> out;
  out.reserve(grid.size());
  out.push_back(cfg.x0.sym());
  // substeps keep the RK4 error of the mean far below Monte-Carlo noise
  constexpr int kSub = 8;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = (grid[i + 1] - grid[i]) / kSub;
    SymMatrix m = out.back();
    for (int s = 0; s < kSub; ++s) {
      const SymMatrix k1 = drift(m);
      const SymMatrix k2 = drift(m + (0.5 * h) * k1);
      const SymMatrix k3 = drift(m + (0.5 * h) * k2);
      const SymMatrix k4 = drift(m + h * k3);
      m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.push_back(m);
  }
  return out;
}

namespace {

struct TerminalInner {
  SymMatrix u;
  RunningStats stats;

  void add(std::size_t, const PathSample& s) { stats.add(frob_inner(s.x_path.back().sym(), u)); }
  void merge(const TerminalInner& o) { stats.merge(o.stats); }
};

}  // namespace

MomentReport moment_check_X(const SimConfig& cfg, const SymMatrix& u) {
  require_same_dim(u.dim(), cfg.params.dim(), "moment_check_X");
  SimConfig xs_only = cfg;
  xs_only.simulate_y = false;
  const PathSimulator sim(xs_only);
  const TerminalInner acc = run_paths(sim, TerminalInner{u, {}});

  MomentReport rep;
  rep.ode_mean = frob_inner(mean_ode(cfg).back(), u);
  rep.mc_mean = acc.stats.mean();
  rep.stderr = acc.stats.stderr_mean();
  rep.n = acc.stats.count();
  const double diff = rep.mc_mean - rep.ode_mean;
  if (rep.stderr > 0.0) {
    rep.z = diff / rep.stderr;
  } else {
    rep.z = std::abs(diff) <= 1e-12 * (1.0 + std::abs(rep.ode_mean)) ? 0.0
                                                                     : std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace affsv
