#include "qfock/metric.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qfock {

QMetric::QMetric(const TruncationConfig& cfg) : cfg_(cfg) {
  p_.resize(cfg.N + 1);
  sqrt_.resize(cfg.N + 1);
  inv_sqrt_.resize(cfg.N + 1);
  llt_.resize(cfg.N + 1);
  for (int n = 0; n <= cfg.N; ++n) {
    p_[n] = build_symmetrizer(cfg, n).mat;
    Eigen::SelfAdjointEigenSolver<Matrix> es(p_[n]);
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() <= 0.0)
      throw std::runtime_error("QMetric: symmetrizer not positive definite");
    Vector s = ev.array().sqrt().matrix().cast<Complex>();
    sqrt_[n] = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
    inv_sqrt_[n] = es.eigenvectors() * s.cwiseInverse().asDiagonal() *
                   es.eigenvectors().adjoint();
    llt_[n].compute(p_[n]);
  }
}

Vector QMetric::apply_p(const Vector& v) const {
  Vector out(v.size());
  for (int n = 0; n <= cfg_.N; ++n) {
    const Index off = cfg_.level_offset(n);
    const Index dim = cfg_.level_dim(n);
    out.segment(off, dim) = p_[n] * v.segment(off, dim);
  }
  return out;
}

Complex QMetric::inner(const Vector& a, const Vector& b) const {
  if (a.size() != b.size() || a.size() != cfg_.total_dim())
    throw std::invalid_argument("QMetric::inner: dimension mismatch");
  return a.dot(apply_p(b));
}

double QMetric::norm(const Vector& a) const {
  double s = std::real(inner(a, a));
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

}  // namespace qfock
