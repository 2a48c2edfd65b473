#pragma once

// Linear drift operators B on the symmetric matrices, with their adjoints.

#include <vector>

#include "affsv/jumpmeasure.hpp"

namespace affsv {

/// u -> <g, u> z
struct RayTerm {
  SymMatrix g;
  SymMatrix z;
};

/// A linear map on SymMatrix given either as a dense action on vec(u)
/// (column-major, d^2 x d^2) or in the structured form
///
///   B(u) = C u + u C^T + sum_k A_k u A_k^T + sum_r <g_r, u> z_r.
class LinearMap {
 public:
  enum class Kind { zero, dense, sandwich, ray };

  LinearMap() = default;

  static LinearMap zero(Index dim);
  static LinearMap dense(const Dense& action);
  static LinearMap sandwich(const Dense& c, std::vector<Dense> conjugations = {},
                            std::vector<RayTerm> rays = {});
  static LinearMap ray(Index dim, std::vector<RayTerm> rays);

  /// Ray terms of the compensating map u -> int chi(xi) <mu(d xi), u> / |xi|^2.
  static std::vector<RayTerm> compensating_rays(const JumpMeasureSpec& jumps, Index dim);

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }

  SymMatrix apply(const SymMatrix& u) const;
  SymMatrix adjoint(const SymMatrix& v) const;

  /// d^2 x d^2 matrix of the action on column-major vec(u).
  Dense matrix() const;
  /// Frobenius norm of matrix().
  double norm() const;

  const Dense& dense_action() const { return action_; }
  const Dense& c() const { return c_; }
  const std::vector<Dense>& conjugations() const { return conj_; }
  const std::vector<RayTerm>& rays() const { return rays_; }

 private:
  Kind kind_ = Kind::zero;
  Index dim_ = 0;
  Dense action_;
  Dense c_;
  std::vector<Dense> conj_;
  std::vector<RayTerm> rays_;
};

}  // namespace affsv
