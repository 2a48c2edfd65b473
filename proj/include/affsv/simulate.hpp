#pragma once

// Path simulation of the joint process (Y, X).
//
// X: between jumps the deterministic flow dx/dt = b + B(x) - int chi(xi) M(x, d xi);
// jumps arrive with the state-dependent intensity M(x, .) and are drawn by
// Ogata thinning against a locally refreshed majorant.
// Y: exponential Euler for the mild solution, volatility frozen per step. For
// shift_grid generators the stochastic convolution is summed with S(t_i - t_j).

#include <algorithm>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "affsv/params.hpp"
#include "affsv/rng.hpp"
#include "affsv/semigroup.hpp"

namespace affsv {

struct SimConfig {
  AdmissibleParams params;
  NoiseSpec noise;
  Generator gen;
  PsdMatrix x0;
  HVector y0;
  double horizon = 1.0;
  double dt = 0.01;
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
  bool simulate_y = true;
  /// Worker threads for run_paths; 0 means hardware concurrency.
  unsigned threads = 0;

  void check() const;
};

struct JumpEvent {
  double time = 0.0;
  std::size_t atom = 0;  // index in atom_rates() order
  PsdMatrix xi;
};

struct PathSample {
  std::vector<double> grid;
  std::vector<PsdMatrix> x_path;
  std::vector<HVector> y_path;  // empty when Y is not simulated
  std::vector<JumpEvent> jump_log;
  /// min(0, smallest eigenvalue) over all X states before re-projection.
  double min_eig_pre_projection = 0.0;
  std::size_t proposals = 0;
  std::size_t majorant_doublings = 0;

  /// Grid index of time t (DomainError if t is not on the grid).
  std::size_t index_of(double t) const;
};

/// Initial thinning headroom: majorant = (1 + eta) * local intensity bound.
inline constexpr double kThinningEta = 0.5;
/// Headroom doublings per path before the majorant is declared to overflow.
inline constexpr int kMaxMajorantDoublings = 40;

class PathSimulator {
 public:
  /// Refuses configurations violating admissibility items (1)-(3); an item
  /// (4) violation is only recorded in warnings().
  explicit PathSimulator(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  PathSample simulate_x(std::size_t path) const;
  std::vector<HVector> simulate_y(const PathSample& x, std::size_t path) const;
  /// X, then Y when config().simulate_y.
  PathSample simulate(std::size_t path) const;

  /// Drift of the inter-jump flow.
  SymMatrix flow_drift(const SymMatrix& x) const;
  /// One RK4 step of the inter-jump flow over time tau.
  SymMatrix flow(const SymMatrix& x, double tau) const;

 private:
  double majorant(const SymMatrix& x, double span, double eta) const;
  double intensity(const SymMatrix& x) const;

  SimConfig cfg_;
  std::vector<double> grid_;
  std::vector<std::string> warnings_;
  Dense semigroup_step_;
  Dense semigroup_lags_;  // [S(h) S(2h) ... S(Nh)], shift_grid only
  // flow drift c + L vec(x) and intensity l0 + <W, x>
  HVector drift_const_;
  Dense drift_linear_;
  bool drift_is_zero_ = false;
  double intensity_const_ = 0.0;
  HVector intensity_weight_;
  Dense sqrt_noise_;
};

std::vector<PathSample> simulate_X(const SimConfig& cfg);
std::vector<HVector> simulate_Y(const SimConfig& cfg, const PathSample& x_path, std::size_t path_index);

/// Paths per work block of run_paths.
inline constexpr std::size_t kPathBlock = 256;

/// Simulates config().n_paths paths and folds each into a copy of
/// `prototype` (Acc::add(std::size_t index, const PathSample&)). Blocks of
/// paths are accumulated independently and merged (Acc::merge) in block
/// order, so the result does not depend on the thread count.
template <typename Acc>
Acc run_paths(const PathSimulator& sim, const Acc& prototype) {
  const std::size_t n = sim.config().n_paths;
  const std::size_t blocks = (n + kPathBlock - 1) / kPathBlock;
  std::vector<Acc> partial(blocks, prototype);
  unsigned threads = sim.config().threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(blocks, 1)));

  auto work = [&](unsigned worker) {
    for (std::size_t b = worker; b < blocks; b += threads) {
      const std::size_t end = std::min(n, (b + 1) * kPathBlock);
      for (std::size_t p = b * kPathBlock; p < end; ++p) partial[b].add(p, sim.simulate(p));
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Acc out = prototype;
  for (const auto& p : partial) out.merge(p);
  return out;
}

struct MomentReport {
  double ode_mean = 0.0;
  double mc_mean = 0.0;
  double stderr = 0.0;
  double z = 0.0;
  std::size_t n = 0;
};

/// Solution at the grid times of the first-moment equation
///   m' = b + B(m) + int_{|xi|>1} xi M(m, d xi).
std::vector<SymMatrix> mean_ode(const SimConfig& cfg);

/// Compares <E X_T, u> from mean_ode with the Monte-Carlo mean of <X_T, u>.
MomentReport moment_check_X(const SimConfig& cfg, const SymMatrix& u);

}  // namespace affsv
