#include "affsv/json_io.hpp"

#include <cmath>

namespace affsv {

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& why) {
  throw ConfigError(what + ": " + why);
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) bad(what, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what, "non-finite number");
  return v;
}

}  // namespace

Json to_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const HVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const JumpMeasureSpec& spec) {
  Json m = Json::array();
  for (const auto& a : spec.m_atoms) m.push_back({{"xi", to_json(a.xi.sym())}, {"mass", a.mass}});
  Json mu = Json::array();
  for (const auto& a : spec.mu_atoms) {
    mu.push_back({{"xi", to_json(a.xi.sym())}, {"weight", to_json(a.weight.sym())}, {"mass", a.mass}});
  }
  return {{"m_atoms", m}, {"mu_atoms", mu}};
}

Json to_json(const LinearMap& b) {
  auto dense_rows = [](const Dense& d) {
    Json rows = Json::array();
    for (Index i = 0; i < d.rows(); ++i) {
      Json row = Json::array();
      for (Index k = 0; k < d.cols(); ++k) row.push_back(d(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  switch (b.kind()) {
    case LinearMap::Kind::zero:
      return {{"kind", "zero"}};
    case LinearMap::Kind::dense:
      return {{"kind", "dense"}, {"matrix", dense_rows(b.dense_action())}};
    case LinearMap::Kind::sandwich:
    case LinearMap::Kind::ray: {
      Json rays = Json::array();
      for (const auto& r : b.rays()) rays.push_back({{"g", to_json(r.g)}, {"z", to_json(r.z)}});
      Json out = {{"kind", b.kind() == LinearMap::Kind::ray ? "ray" : "sandwich"}};
      if (b.kind() == LinearMap::Kind::sandwich) {
        out["C"] = dense_rows(b.c());
        Json conj = Json::array();
        for (const auto& a : b.conjugations()) conj.push_back(dense_rows(a));
        out["conjugations"] = conj;
      }
      out["rays"] = rays;
      return out;
    }
  }
  return {};
}

Json to_json(const Generator& gen) {
  switch (gen.kind()) {
    case Generator::Kind::zero:
      return {{"kind", "zero"}};
    case Generator::Kind::scalar:
      return {{"kind", "scalar"}, {"kappa", gen.kappa()}};
    case Generator::Kind::dense: {
      const Dense a = gen.matrix();
      Json rows = Json::array();
      for (Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
        rows.push_back(std::move(row));
      }
      return {{"kind", "dense"}, {"matrix", rows}};
    }
    case Generator::Kind::shift_grid:
      return {{"kind", "shift_grid"}, {"maturities", gen.maturities()}};
  }
  return {};
}

Json to_json(const NoiseSpec& noise) {
  return {{"mode", to_string(noise.mode)}, {"matrix", to_json(noise.matrix.sym())}};
}

Json to_json(const ValidationReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations) {
    v.push_back({{"item", x.item}, {"hard", x.hard}, {"message", x.message}, {"value", x.value}});
  }
  return {{"ok", rep.ok()},
          {"hard_ok", rep.hard_ok()},
          {"probes", rep.probes},
          {"tol_cone", rep.tol_cone},
          {"min_residual_item4", rep.min_residual_item4},
          {"violations", v}};
}

Json to_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const McEstimate& mc) {
  return {{"re", mc.estimate.real()},  {"im", mc.estimate.imag()}, {"stderr", mc.stderr()},
          {"stderr_re", mc.stderr_re}, {"stderr_im", mc.stderr_im}, {"n", mc.n}};
}

Json to_json(const CompareReport& c) {
  auto finite_or_null = [](double z) { return std::isfinite(z) ? Json(z) : Json(nullptr); };
  return {{"re", finite_or_null(c.z_re)}, {"im", finite_or_null(c.z_im)}, {"threshold", c.threshold}};
}

Json to_json(const TransformQuery& q) {
  return {{"v1", to_json(q.v1)}, {"u2", to_json(q.u2.sym())}, {"t", q.t}};
}

Json to_json(const RiccatiSolution& sol) {
  Json psi1 = Json::array();
  Json psi2 = Json::array();
  for (const auto& v : sol.psi1_imag) psi1.push_back(to_json(v));
  for (const auto& p : sol.psi2) psi2.push_back(to_json(p.sym()));
  return {{"noise_mode", to_string(sol.noise_mode)},
          {"max_projection", sol.max_projection},
          {"t", sol.grid},
          {"phi", sol.phi},
          {"psi1_imag", psi1},
          {"psi2", psi2}};
}

Json to_json(const MomentReport& m) {
  return {{"ode_mean", m.ode_mean}, {"mc_mean", m.mc_mean}, {"stderr", m.stderr},
          {"z", std::isfinite(m.z) ? Json(m.z) : Json(nullptr)}, {"n", m.n}};
}

Dense dense_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "expected a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array()) bad(what, "expected a non-empty array of rows");
  const auto cols = static_cast<Index>(j[0].size());
  Dense m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) bad(what, "ragged matrix rows");
    for (Index k = 0; k < cols; ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

SymMatrix sym_from_json(const Json& j, const std::string& what) {
  const Dense m = dense_from_json(j, what);
  if (m.rows() != m.cols()) bad(what, "matrix is not square");
  if ((m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm())) bad(what, "matrix is not symmetric");
  return SymMatrix(m);
}

PsdMatrix psd_from_json(const Json& j, const std::string& what) {
  SymMatrix s = sym_from_json(j, what);
  if (!is_psd(s)) bad(what, "matrix is not positive semidefinite (min eigenvalue " + std::to_string(min_eig(s)) + ")");
  return PsdMatrix::checked(std::move(s));
}

HVector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) bad(what, "expected an array of numbers");
  HVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], what);
  return v;
}

JumpMeasureSpec jumps_from_json(const Json& j) {
  JumpMeasureSpec spec;
  if (j.is_null()) return spec;
  if (!j.is_object()) bad("jumps", "expected an object");
  try {
    if (j.contains("m_atoms")) {
      for (const auto& a : j.at("m_atoms")) {
        spec.m_atoms.emplace_back(psd_from_json(field(a, "xi", "m atom"), "m atom xi"),
                                  number(field(a, "mass", "m atom"), "m atom mass"));
      }
    }
    if (j.contains("mu_atoms")) {
      for (const auto& a : j.at("mu_atoms")) {
        spec.mu_atoms.emplace_back(psd_from_json(field(a, "xi", "mu atom"), "mu atom xi"),
                                   psd_from_json(field(a, "weight", "mu atom"), "mu atom weight"),
                                   number(field(a, "mass", "mu atom"), "mu atom mass"));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    bad("jumps", e.what());
  }
  return spec;
}

LinearMap linear_map_from_json(const Json& j, Index dim, const JumpMeasureSpec& jumps) {
  if (j.is_null()) return LinearMap::zero(dim);
  const std::string kind = field(j, "kind", "B").get<std::string>();
  try {
    if (kind == "zero") return LinearMap::zero(dim);
    if (kind == "dense") {
      LinearMap b = LinearMap::dense(dense_from_json(field(j, "matrix", "B"), "B matrix"));
      require_same_dim(b.dim(), dim, "B");
      return b;
    }
    std::vector<RayTerm> rays;
    if (j.contains("rays")) {
      for (const auto& r : j.at("rays")) {
        rays.push_back({sym_from_json(field(r, "g", "B ray"), "B ray g"), sym_from_json(field(r, "z", "B ray"), "B ray z")});
      }
    }
    if (j.value("compensate_mu", false)) {
      for (auto& r : LinearMap::compensating_rays(jumps, dim)) rays.push_back(std::move(r));
    }
    if (kind == "ray") return LinearMap::ray(dim, std::move(rays));
    if (kind == "sandwich") {
      const Dense c = j.contains("C") ? dense_from_json(j.at("C"), "B C") : Dense::Zero(dim, dim);
      std::vector<Dense> conj;
      if (j.contains("conjugations")) {
        for (const auto& a : j.at("conjugations")) conj.push_back(dense_from_json(a, "B conjugation"));
      }
      return LinearMap::sandwich(c, std::move(conj), std::move(rays));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    bad("B", e.what());
  }
  bad("B", "unknown kind \"" + kind + "\"");
}

Generator generator_from_json(const Json& j, Index dim) {
  if (j.is_null()) return Generator::zero(dim);
  const std::string kind = field(j, "kind", "generator").get<std::string>();
  Generator g;
  try {
    if (kind == "zero") {
      g = Generator::zero(dim);
    } else if (kind == "scalar") {
      g = Generator::scalar(dim, number(field(j, "kappa", "generator"), "generator kappa"));
    } else if (kind == "dense") {
      g = Generator::dense(dense_from_json(field(j, "matrix", "generator"), "generator matrix"));
    } else if (kind == "shift_grid") {
      g = Generator::shift_grid(field(j, "maturities", "generator").get<std::vector<double>>());
    } else {
      bad("generator", "unknown kind \"" + kind + "\"");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    bad("generator", e.what());
  }
  if (g.dim() != dim) bad("generator", "dimension does not match b");
  return g;
}

NoiseSpec noise_from_json(const Json& j) {
  NoiseSpec n;
  const std::string mode = field(j, "mode", "noise").get<std::string>();
  if (mode == "Q") {
    n.mode = NoiseMode::Q;
  } else if (mode == "D") {
    n.mode = NoiseMode::D;
  } else {
    bad("noise", "mode must be \"Q\" or \"D\"");
  }
  n.matrix = psd_from_json(field(j, "matrix", "noise"), "noise matrix");
  return n;
}

AdmissibleParams params_from_json(const Json& j) {
  AdmissibleParams p;
  p.b = sym_from_json(field(j, "b", "config"), "b");
  p.jumps = jumps_from_json(j.contains("jumps") ? j.at("jumps") : Json());
  p.B = linear_map_from_json(j.contains("B") ? j.at("B") : Json(), p.b.dim(), p.jumps);
  try {
    p.check_dims();
  } catch (const DimensionError& e) {
    bad("config", e.what());
  }
  return p;
}

TransformQuery query_from_json(const Json& j, Index dim) {
  TransformQuery q;
  q.v1 = j.contains("v1") ? vector_from_json(j.at("v1"), "query v1") : HVector::Zero(dim);
  if (q.v1.size() != dim) bad("query v1", "dimension does not match b");
  if (j.contains("u2")) {
    const SymMatrix u2 = sym_from_json(j.at("u2"), "query u2");
    if (u2.dim() != dim) bad("query u2", "dimension does not match b");
    if (!is_psd(u2)) {
      bad("query u2", "must be positive semidefinite (the Laplace argument lies in the cone); min eigenvalue " +
                          std::to_string(min_eig(u2)));
    }
    q.u2 = PsdMatrix::checked(u2);
  } else {
    q.u2 = PsdMatrix::zero(dim);
  }
  q.t = number(field(j, "t", "query"), "query t");
  if (!(q.t > 0.0)) bad("query t", "must be > 0");
  return q;
}

}  // namespace affsv
