#include "qfock/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qfock {

FockOperator creation(const TruncationConfig& cfg, const Vector& phi) {
  if (phi.size() != cfg.d)
    throw std::invalid_argument("creation: one-particle dimension mismatch");
  const Index total = cfg.total_dim();
  Matrix m = Matrix::Zero(total, total);
  for (int n = 0; n + 1 <= cfg.N; ++n) {
    const Index off_in = cfg.level_offset(n);
    const Index off_out = cfg.level_offset(n + 1);
    const Index dim = cfg.level_dim(n);
    for (int j0 = 0; j0 < cfg.d; ++j0) {
      if (phi[j0] == Complex(0, 0)) continue;
      for (Index r = 0; r < dim; ++r)
        m(off_out + j0 * dim + r, off_in + r) = phi[j0];
    }
  }
  return FockOperator(std::move(m), cfg.N - 1, 1);
}

FockOperator annihilation(const TruncationConfig& cfg, const Vector& phi) {
  if (phi.size() != cfg.d)
    throw std::invalid_argument("annihilation: one-particle dimension mismatch");
  const Index total = cfg.total_dim();
  const Index d = cfg.d;
  Matrix m = Matrix::Zero(total, total);
  for (int n = 1; n <= cfg.N; ++n) {
    const Index off_in = cfg.level_offset(n);
    const Index off_out = cfg.level_offset(n - 1);
    double w = 1.0;
    Index tail = cfg.level_dim(n - 1);  // becomes d^(n-s) as s runs 1..n
    for (int s = 1; s <= n; ++s, w *= cfg.q) {
      tail /= (s > 1) ? d : 1;
      // slot s (1-based) has stride tail = d^(n-s)
      const Index heads = cfg.level_dim(n) / (tail * d);
      for (Index a = 0; a < heads; ++a)
        for (Index digit = 0; digit < d; ++digit) {
          const Complex coeff = w * std::conj(phi[digit]);
          if (coeff == Complex(0, 0)) continue;
          const Index in_base = off_in + (a * d + digit) * tail;
          const Index out_base = off_out + a * tail;
          for (Index b = 0; b < tail; ++b)
            m(out_base + b, in_base + b) += coeff;
        }
    }
  }
  return FockOperator(std::move(m), cfg.N, -1);
}

FockOperator gauge(const TruncationConfig& cfg, Complex mu, const Matrix& t) {
  if (!(std::abs(mu) < 1.0))
    throw std::invalid_argument("gauge: |mu| must be < 1");
  if (t.rows() != cfg.d || t.cols() != cfg.d)
    throw std::invalid_argument("gauge: operator dimension mismatch");
  const Index total = cfg.total_dim();
  const Index d = cfg.d;
  Matrix m = Matrix::Zero(total, total);
  Complex mun = 1.0;
  for (int n = 1; n <= cfg.N; ++n) {
    mun *= mu;
    const Index off = cfg.level_offset(n);
    Index tail = cfg.level_dim(n) / d;
    for (int s = 1; s <= n; ++s) {
      const Index heads = cfg.level_dim(n) / (tail * d);
      for (Index a = 0; a < heads; ++a)
        for (Index r = 0; r < d; ++r)
          for (Index c = 0; c < d; ++c) {
            const Complex coeff = mun * t(r, c);
            if (coeff == Complex(0, 0)) continue;
            const Index row_base = off + (a * d + r) * tail;
            const Index col_base = off + (a * d + c) * tail;
            for (Index b = 0; b < tail; ++b)
              m(row_base + b, col_base + b) += coeff;
          }
      tail /= d;
    }
  }
  return FockOperator(std::move(m), cfg.N, 0);
}

FockOperator gamma_op(const TruncationConfig& cfg, Complex mu) {
  if (std::abs(mu) > 1.0 + 1e-15)
    throw std::invalid_argument("gamma: |mu| must be <= 1");
  const Index total = cfg.total_dim();
  Matrix m = Matrix::Zero(total, total);
  Complex mun = 1.0;
  for (int n = 0; n <= cfg.N; ++n) {
    const Index off = cfg.level_offset(n);
    const Index dim = cfg.level_dim(n);
    for (Index i = 0; i < dim; ++i) m(off + i, off + i) = mun;
    mun *= mu;
  }
  return FockOperator(std::move(m), cfg.N, 0);
}

FockOperator q_adjoint(const QMetric& metric, const FockOperator& x) {
  const TruncationConfig& cfg = metric.config();
  if (x.mat.rows() != cfg.total_dim())
    throw std::invalid_argument("q_adjoint: dimension mismatch");
  Matrix out = Matrix::Zero(x.mat.rows(), x.mat.cols());
  for (int n = 0; n <= cfg.N; ++n)
    for (int m = 0; m <= cfg.N; ++m) {
      const Index on = cfg.level_offset(n), dn = cfg.level_dim(n);
      const Index om = cfg.level_offset(m), dm = cfg.level_dim(m);
      Matrix block = x.mat.block(om, on, dm, dn).adjoint() * metric.level_p(m);
      out.block(on, om, dn, dm) = metric.level_solve(n, block);
    }
  // the adjoint of an operator exact up to level e, shifting by u, is exact
  // up to e + u and shifts by -u
  return FockOperator(std::move(out), std::min(cfg.N, x.exactness + x.upshift),
                      -x.upshift);
}

double spectral_norm(const Matrix& t) {
  if (t.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.adjoint() * t,
                                           Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double q_operator_norm(const QMetric& metric, const FockOperator& x) {
  const TruncationConfig& cfg = metric.config();
  if (x.mat.rows() != cfg.total_dim())
    throw std::invalid_argument("q_operator_norm: dimension mismatch");
  Matrix scaled(x.mat.rows(), x.mat.cols());
  for (int n = 0; n <= cfg.N; ++n)
    for (int m = 0; m <= cfg.N; ++m) {
      const Index on = cfg.level_offset(n), dn = cfg.level_dim(n);
      const Index om = cfg.level_offset(m), dm = cfg.level_dim(m);
      scaled.block(om, on, dm, dn) = metric.level_sqrt(m) *
                                     x.mat.block(om, on, dm, dn) *
                                     metric.level_inv_sqrt(n);
    }
  return spectral_norm(scaled);
}

double q_block_norm(const QMetric& metric, const FockOperator& x, int n, int m) {
  const TruncationConfig& cfg = metric.config();
  const Index on = cfg.level_offset(n), dn = cfg.level_dim(n);
  const Index om = cfg.level_offset(m), dm = cfg.level_dim(m);
  Matrix block = metric.level_sqrt(m) * x.mat.block(om, on, dm, dn) *
                 metric.level_inv_sqrt(n);
  return spectral_norm(block);
}

Matrix second_quantization(const TruncationConfig& cfg1,
                           const TruncationConfig& cfg2, const Matrix& u) {
  if (u.rows() != cfg2.d || u.cols() != cfg1.d)
    throw std::invalid_argument("second_quantization: shape mismatch");
  if (cfg1.N != cfg2.N)
    throw std::invalid_argument("second_quantization: level counts differ");
  if (!((u.adjoint() * u - Matrix::Identity(cfg1.d, cfg1.d)).norm() < 1e-10))
    throw std::invalid_argument("second_quantization: u is not an isometry");
  Matrix out = Matrix::Zero(cfg2.total_dim(), cfg1.total_dim());
  Matrix pow = Matrix::Identity(1, 1);
  out(0, 0) = 1.0;
  for (int n = 1; n <= cfg1.N; ++n) {
    Matrix next(pow.rows() * cfg2.d, pow.cols() * cfg1.d);
    for (Index r = 0; r < cfg2.d; ++r)
      for (Index c = 0; c < cfg1.d; ++c)
        next.block(r * pow.rows(), c * pow.cols(), pow.rows(), pow.cols()) =
            u(r, c) * pow;
    pow = std::move(next);
    out.block(cfg2.level_offset(n), cfg1.level_offset(n), pow.rows(),
              pow.cols()) = pow;
  }
  return out;
}

double gauge_norm_bound_factor(Complex mu) {
  const double a = std::abs(mu);
  if (a <= 0.0) return 0.0;
  if (a >= 1.0) throw std::invalid_argument("gauge bound needs |mu| < 1");
  // n |mu|^n is maximal near n* = -1/log|mu|
  const double nstar = -1.0 / std::log(a);
  double best = 0.0;
  for (long n = std::max<long>(1, static_cast<long>(nstar) - 1);
       n <= static_cast<long>(nstar) + 2; ++n)
    best = std::max(best, static_cast<double>(n) * std::pow(a, n));
  return std::max(best, a);  // n = 1 term
}

}  // namespace qfock
