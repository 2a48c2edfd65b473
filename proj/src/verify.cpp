#include "affsv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace affsv {

namespace {

constexpr double kTolCone = 1e-8;
constexpr double kTolDual = 1e-8;
// terminal states per block kept for the Assumption C check
constexpr std::size_t kStatesPerBlock = 8;

struct VerifyAccumulator {
  std::vector<TransformAccumulator> transforms;
  std::vector<RunningStats> trace_x;
  std::vector<std::vector<RunningStats>> y;  // per grid point, per component
  RunningStats terminal_trace;
  RunningStats jumps;
  double min_eig_pre = std::numeric_limits<double>::infinity();
  std::vector<PsdMatrix> states;

  VerifyAccumulator(const std::vector<TransformQuery>& queries, std::size_t grid_size, Index d)
      : trace_x(grid_size), y(grid_size, std::vector<RunningStats>(static_cast<std::size_t>(d))) {
    for (const auto& q : queries) transforms.emplace_back(q);
  }

  void add(std::size_t path, const PathSample& s) {
    for (auto& t : transforms) t.add(path, s);
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      trace_x[i].add(s.x_path[i].sym().trace());
      if (!s.y_path.empty()) {
        for (std::size_t k = 0; k < y[i].size(); ++k) y[i][k].add(s.y_path[i](static_cast<Index>(k)));
      }
    }
    terminal_trace.add(s.x_path.back().sym().trace());
    jumps.add(static_cast<double>(s.jump_log.size()));
    min_eig_pre = std::min(min_eig_pre, s.min_eig_pre_projection);
    if (path % kPathBlock < kStatesPerBlock) states.push_back(s.x_path.back());
  }

  void merge(const VerifyAccumulator& o) {
    for (std::size_t q = 0; q < transforms.size(); ++q) transforms[q].merge(o.transforms[q]);
    for (std::size_t i = 0; i < trace_x.size(); ++i) {
      trace_x[i].merge(o.trace_x[i]);
      for (std::size_t k = 0; k < y[i].size(); ++k) y[i][k].merge(o.y[i][k]);
    }
    terminal_trace.merge(o.terminal_trace);
    jumps.merge(o.jumps);
    min_eig_pre = std::min(min_eig_pre, o.min_eig_pre);
    states.insert(states.end(), o.states.begin(), o.states.end());
  }
};

Json assumption_c_json(const AssumptionCReport& rep) {
  return {{"ok", rep.ok}, {"max_residual", rep.max_residual}};
}

double z_or_inf(double diff, double se) {
  if (se > 0.0) return diff / se;
  return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

ValidateOutcome validate_scenario(const Scenario& s) {
  ValidateOutcome out;
  const ValidationReport rep = validate_assumption_A(s.params, s.seed);
  out.pass = rep.hard_ok();
  out.report["name"] = s.name;
  out.report["seed"] = s.seed;
  out.report["assumption_A"] = to_json(rep);
  std::vector<std::string> warnings;
  for (const auto& v : rep.violations) {
    if (!v.hard) warnings.push_back("item (" + std::to_string(v.item) + "): " + v.message);
  }
  out.report["warnings"] = warnings;

  if (s.noise.mode == NoiseMode::Q) {
    std::vector<PsdMatrix> xs = {s.x0};
    for (const auto& a : s.params.jumps.m_atoms) xs.push_back(s.x0 + a.xi);
    for (const auto& a : s.params.jumps.mu_atoms) xs.push_back(s.x0 + a.xi);
    xs.insert(xs.end(), s.extra_states.begin(), s.extra_states.end());
    const AssumptionCReport c = check_assumption_C(s.noise, xs);
    out.report["assumption_C"] = assumption_c_json(c);
    out.pass = out.pass && c.ok;
  } else {
    out.report["assumption_C"] = nullptr;
  }
  if (s.params.jumps.mu_atoms.empty()) {
    out.report["subordinator"] = validate_subordinator(s.params.b, s.params.jumps.m_atoms);
  }
  out.report["pass"] = out.pass;
  return out;
}

Discrepancy sup_discrepancy(const RiccatiSolution& a, const RiccatiSolution& b) {
  if (a.grid.size() != b.grid.size()) throw DimensionError("sup_discrepancy: grids differ");
  Discrepancy d;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    d.psi1 = std::max(d.psi1, (a.psi1_imag[i] - b.psi1_imag[i]).norm());
    d.psi2 = std::max(d.psi2, (a.psi2[i].sym() - b.psi2[i].sym()).norm());
  }
  return d;
}

std::string report_stem(const Scenario& s) { return s.name + "-" + std::to_string(s.seed); }

VerifyOutcome verify_scenario(const Scenario& s, const VerifyOptions& opt) {
  VerifyOutcome out;
  Json& rep = out.report;
  rep["name"] = s.name;
  rep["seed"] = s.seed;
  rep["paths"] = s.paths;
  rep["sim_dt"] = s.sim_dt;
  rep["riccati_dt"] = s.riccati_dt;
  rep["noise_mode"] = to_string(s.noise.mode);

  const ValidateOutcome val = validate_scenario(s);
  rep["validation"] = val.report;
  if (!val.pass) {
    rep["pass"] = false;
    return out;
  }

  std::vector<RiccatiSolution> sols;
  double min_eig_psi2 = std::numeric_limits<double>::infinity();
  for (const auto& q : s.queries) {
    sols.push_back(solve_riccati(s.riccati_input(q)));
    min_eig_psi2 = std::min(min_eig_psi2, sols.back().min_eig_psi2());
  }

  SimConfig cfg = s.sim_config();
  cfg.threads = opt.threads;
  const PathSimulator sim(cfg);
  const Index d = s.params.dim();
  const VerifyAccumulator acc = run_paths(sim, VerifyAccumulator(s.queries, sim.grid().size(), d));

  // 2 z-tests per query, 1 for the moment check
  const double threshold = bonferroni_threshold(2 * s.queries.size() + 1);
  rep["threshold"] = threshold;
  bool pass = true;

  Json queries = Json::array();
  for (std::size_t k = 0; k < s.queries.size(); ++k) {
    const TransformQuery& q = s.queries[k];
    const Complex affine = affine_value(sols[k], s.y0, s.x0.sym(), q);
    const McEstimate mc = acc.transforms[k].result();
    const CompareReport cmp = compare(affine, mc, threshold);
    Json jq = {{"query", to_json(q)},
               {"affine", to_json(affine)},
               {"mc", to_json(mc)},
               {"z", to_json(cmp)},
               {"riccati", {{"min_eig_psi2", sols[k].min_eig_psi2()}, {"max_projection", sols[k].max_projection}}}};
    bool qpass = cmp.pass;
    if (s.params.jumps.mu_atoms.empty() && q.u2.norm() == 0.0) {
      const Complex closed = bns_closed_form(s.params, s.gen, s.noise.effective_D(), s.x0.sym(), s.y0, q.v1, q.t);
      const double diff = std::abs(closed - affine);
      jq["closed_form"] = {{"value", to_json(closed)}, {"abs_diff", diff}, {"pass", diff <= kTolDual}};
      qpass = qpass && diff <= kTolDual;
    }
    jq["pass"] = qpass;
    pass = pass && qpass;
    queries.push_back(std::move(jq));
  }
  rep["queries"] = queries;

  MomentReport moment;
  moment.ode_mean = mean_ode(cfg).back().trace();
  moment.mc_mean = acc.terminal_trace.mean();
  moment.stderr = acc.terminal_trace.stderr_mean();
  moment.n = acc.terminal_trace.count();
  moment.z = z_or_inf(moment.mc_mean - moment.ode_mean, moment.stderr);
  const bool moment_pass = std::abs(moment.z) <= threshold;
  rep["moment_trace_x"] = to_json(moment);
  rep["moment_trace_x"]["pass"] = moment_pass;
  pass = pass && moment_pass;

  const bool cone_pass = min_eig_psi2 >= -kTolCone && acc.min_eig_pre >= -kTolCone;
  rep["cone"] = {{"min_eig_psi2", finite_or_null(min_eig_psi2)},
                 {"min_eig_x_pre_projection", acc.min_eig_pre},
                 {"pass", cone_pass}};
  pass = pass && cone_pass;

  if (s.noise.mode == NoiseMode::Q) {
    const AssumptionCReport c = check_assumption_C(s.noise, acc.states);
    rep["assumption_C_paths"] = {{"states", acc.states.size()}, {"ok", c.ok}, {"max_residual", c.max_residual}};
    pass = pass && c.ok;
  }
  rep["mean_jumps_per_path"] = acc.jumps.mean();

  const auto probe = std::find_if(s.queries.begin(), s.queries.end(),
                                  [](const TransformQuery& q) { return q.v1.norm() > 0.0; });
  const bool unbounded = s.gen.kind() == Generator::Kind::dense || s.gen.kind() == Generator::Kind::shift_grid;
  if (unbounded && probe != s.queries.end() && !opt.yosida_levels.empty()) {
    // the approximations of a shift_grid generator converge to its upwind matrix
    const Generator base = s.gen.kind() == Generator::Kind::shift_grid ? Generator::dense(s.gen.matrix()) : s.gen;
    RiccatiInput base_in = s.riccati_input(*probe);
    base_in.gen = base;
    const RiccatiSolution ref = solve_riccati(base_in);
    Json levels = Json::array();
    bool monotone = true;
    Discrepancy prev{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (int n : opt.yosida_levels) {
      RiccatiInput in = s.riccati_input(*probe);
      in.gen = yosida(base, n);
      const Discrepancy e = sup_discrepancy(solve_riccati(in), ref);
      levels.push_back({{"n", n}, {"psi1", e.psi1}, {"psi2", e.psi2}});
      monotone = monotone && e.psi1 <= prev.psi1 && e.psi2 <= prev.psi2;
      prev = e;
    }
    rep["yosida"] = {{"query", static_cast<std::size_t>(probe - s.queries.begin())},
                     {"levels", levels},
                     {"pass", monotone}};
    pass = pass && monotone;
  }

  rep["warnings"] = sim.warnings();
  rep["pass"] = pass;
  out.pass = pass;

  std::ostringstream csv;
  csv.precision(17);
  csv << "t,mean_trace_x,stderr_trace_x";
  for (Index k = 0; k < d; ++k) csv << ",mean_y_" << k;
  csv << '\n';
  for (std::size_t i = 0; i < sim.grid().size(); ++i) {
    csv << sim.grid()[i] << ',' << acc.trace_x[i].mean() << ',' << acc.trace_x[i].stderr_mean();
    for (const auto& st : acc.y[i]) csv << ',' << st.mean();
    csv << '\n';
  }
  out.summary_csv = csv.str();
  return out;
}

}  // namespace affsv
