#pragma once

#include "qfock/symmetrizer.hpp"
#include "qfock/types.hpp"

#include <Eigen/Cholesky>

#include <memory>
#include <vector>

namespace qfock {

/// Per-level cache of the deformed metric: P^(n), its square roots and
/// Cholesky factorizations.  Everything downstream (inner products, adjoints,
/// operator norms) goes through this.
class QMetric {
 public:
  explicit QMetric(const TruncationConfig& cfg);

  const TruncationConfig& config() const { return cfg_; }
  const Matrix& level_p(int n) const { return p_[n]; }
  const Matrix& level_sqrt(int n) const { return sqrt_[n]; }
  const Matrix& level_inv_sqrt(int n) const { return inv_sqrt_[n]; }

  /// Solves P^(n) x = b.
  Vector level_solve(int n, const Vector& b) const { return llt_[n].solve(b); }
  Matrix level_solve(int n, const Matrix& b) const { return llt_[n].solve(b); }

  /// P applied blockwise to a full Fock vector.
  Vector apply_p(const Vector& v) const;

  /// Deformed inner product <a, P b>_free, conjugate-linear in `a`.
  Complex inner(const Vector& a, const Vector& b) const;
  double norm(const Vector& a) const;

 private:
  TruncationConfig cfg_;
  std::vector<Matrix> p_, sqrt_, inv_sqrt_;
  std::vector<Eigen::LLT<Matrix>> llt_;
};

}  // namespace qfock
