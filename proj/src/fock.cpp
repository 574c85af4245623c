#include "qfock/fock.hpp"

namespace qfock {

Complex q_inner(const QMetric& metric, const FockVector& a, const FockVector& b) {
  if (!(a.cfg == b.cfg) || !(a.cfg == metric.config()))
    throw std::invalid_argument("q_inner: configuration mismatch");
  return metric.inner(a.coeffs, b.coeffs);
}

FockOperator level_projection(const TruncationConfig& cfg, int j) {
  if (j < 0 || j > cfg.N)
    throw std::out_of_range("level_projection: level outside truncation");
  Matrix m = Matrix::Zero(cfg.total_dim(), cfg.total_dim());
  const Index off = cfg.level_offset(j);
  const Index dim = cfg.level_dim(j);
  m.block(off, off, dim, dim) = Matrix::Identity(dim, dim);
  return FockOperator(std::move(m), cfg.N, 0);
}

Complex vacuum_state(const QMetric& metric, const FockOperator& x) {
  const TruncationConfig& cfg = metric.config();
  if (x.mat.rows() != cfg.total_dim())
    throw std::invalid_argument("vacuum_state: dimension mismatch");
  // P acts trivially on the vacuum level, so this is just the (0,0) entry.
  FockVector omega = vacuum_vector(cfg);
  return metric.inner(omega.coeffs, x.mat * omega.coeffs);
}

}  // namespace qfock
