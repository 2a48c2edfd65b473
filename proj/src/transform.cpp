#include "affsv/transform.hpp"

#include <cmath>
#include <limits>

namespace affsv {

namespace {

double z_score(double exact, double estimate, double se) {
  const double diff = estimate - exact;
  if (se > 0.0) return diff / se;
  return std::abs(diff) <= 1e-12 * (1.0 + std::abs(exact)) ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

Complex affine_value(const RiccatiSolution& sol, const HVector& y0, const SymMatrix& x0,
                     const TransformQuery& query) {
  const std::size_t i = sol.index_of(query.t);
  require_same_dim(y0.size(), sol.psi1_imag[i].size(), "affine_value y0");
  require_same_dim(x0.dim(), sol.psi2[i].dim(), "affine_value x0");
  const double modulus_log = -sol.phi[i] - frob_inner(x0, sol.psi2[i].sym());
  const double theta = y0.dot(sol.psi1_imag[i]);
  return std::exp(modulus_log) * Complex(std::cos(theta), std::sin(theta));
}

Complex transform_sample(const SymMatrix& x, const HVector& y, const TransformQuery& query) {
  const double damp = std::exp(-frob_inner(x, query.u2.sym()));
  const double theta = y.dot(query.v1);
  return damp * Complex(std::cos(theta), std::sin(theta));
}

void TransformAccumulator::add(std::size_t, const PathSample& s) {
  const std::size_t i = s.index_of(query_.t);
  if (s.y_path.empty()) {
    if (query_.v1.norm() != 0.0) throw DomainError("mc_transform: query needs Y but the path has none");
    add(transform_sample(s.x_path[i].sym(), HVector::Zero(query_.v1.size()), query_));
    return;
  }
  add(transform_sample(s.x_path[i].sym(), s.y_path[i], query_));
}

void TransformAccumulator::add(const Complex& sample) {
  re_.add(sample.real());
  im_.add(sample.imag());
}

void TransformAccumulator::merge(const TransformAccumulator& other) {
  re_.merge(other.re_);
  im_.merge(other.im_);
}

McEstimate TransformAccumulator::result() const {
  if (re_.count() == 0) throw DomainError("mc_transform: empty path set");
  return {Complex(re_.mean(), im_.mean()), re_.stderr_mean(), im_.stderr_mean(), re_.count()};
}

McEstimate mc_transform(std::span<const PathSample> paths, const TransformQuery& query) {
  TransformAccumulator acc(query);
  for (std::size_t p = 0; p < paths.size(); ++p) acc.add(p, paths[p]);
  return acc.result();
}

CompareReport compare(const Complex& affine, const McEstimate& mc, double threshold) {
  CompareReport rep;
  rep.threshold = threshold;
  rep.z_re = z_score(affine.real(), mc.estimate.real(), mc.stderr_re);
  rep.z_im = z_score(affine.imag(), mc.estimate.imag(), mc.stderr_im);
  rep.pass = std::abs(rep.z_re) <= threshold && std::abs(rep.z_im) <= threshold;
  return rep;
}

}  // namespace affsv
