#include "qfock/symmetrizer.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qfock {

namespace {

// Row index obtained from r by the k-cycle on the leading window of j slots:
// digits (r_0 .. r_{j-1}) become (r_{k-1}, r_0, .., r_{k-2}), trailing digits
// untouched.  Here the window is the whole index (j = n).
Index cycle_source(Index r, int k, int n, Index d) {
  Index tail_size = 1;
  for (int i = 0; i < n - k; ++i) tail_size *= d;
  Index head = r / tail_size;  // first k digits
  Index tail = r % tail_size;
  Index last = head % d;
  Index head_size_over_d = 1;
  for (int i = 0; i < k - 1; ++i) head_size_over_d *= d;
  Index rotated = last * head_size_over_d + head / d;
  return rotated * tail_size + tail;
}

}  // namespace

QSymmetrizer build_symmetrizer(const TruncationConfig& cfg, int n) {
  if (n < 0 || n > cfg.N)
    throw std::out_of_range("build_symmetrizer: level outside truncation");
  const Index d = cfg.d;
  const double q = cfg.q;

  Matrix p = Matrix::Identity(1, 1);
  for (int j = 2; j <= n; ++j) {
    Index dim = 1;
    for (int i = 0; i < j; ++i) dim *= d;
    // lift: 1 (x) P^(j-1) is block diagonal in the leading digit
    Matrix lifted = Matrix::Zero(dim, dim);
    const Index sub = dim / d;
    for (Index b = 0; b < d; ++b)
      lifted.block(b * sub, b * sub, sub, sub) = p;
    // apply D_j from the left: row r of the product gathers rows of `lifted`
    Matrix out = lifted;  // k = 1 term is the identity cycle
    double w = 1.0;
    for (int k = 2; k <= j; ++k) {
      w *= q;
      for (Index r = 0; r < dim; ++r)
        out.row(r) += w * lifted.row(cycle_source(r, k, j, d));
    }
    p = std::move(out);
  }
  if (n <= 1) p = Matrix::Identity(cfg.level_dim(n), cfg.level_dim(n));
  return QSymmetrizer{n, std::move(p)};
}

Matrix build_partial_symmetrizer(const TruncationConfig& cfg, int n, int k) {
  if (k < 0) throw std::invalid_argument("build_partial_symmetrizer: k < 0");
  if (n + 1 > cfg.N)
    throw std::out_of_range("build_partial_symmetrizer: n+1 exceeds truncation");
  const Index d = cfg.d;
  const Index dim = cfg.level_dim(n + 1);
  if (n < k) return Matrix::Zero(dim, dim);

  const Matrix p = build_symmetrizer(cfg, n).mat;
  const Index sub = cfg.level_dim(n);
  Matrix out = Matrix::Zero(dim, dim);

  // index = prefix * (d * suffix_size) + fixed * suffix_size + suffix,
  // where the fixed digit sits in slot k (0-based) and prefix has k digits
  Index suffix_size = 1;
  for (int i = 0; i < n - k; ++i) suffix_size *= d;
  auto embed = [&](Index reduced, Index fixed) {
    Index prefix = reduced / suffix_size;
    Index suffix = reduced % suffix_size;
    return prefix * (d * suffix_size) + fixed * suffix_size + suffix;
  };
  for (Index c = 0; c < sub; ++c)
    for (Index r = 0; r < sub; ++r) {
      const Complex v = p(r, c);
      if (v == Complex(0, 0)) continue;
      for (Index f = 0; f < d; ++f) out(embed(r, f), embed(c, f)) = v;
    }
  return out;
}

namespace {

double pencil_min_eig(const RealMatrix& a, const RealMatrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> es(a, b,
                                                          Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double pencil_max_eig(const RealMatrix& a, const RealMatrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> es(a, b,
                                                          Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

QConstants estimate_constants(const TruncationConfig& cfg, int k_max) {
  QConstants qc;
  qc.q = cfg.q;
  const double aq = std::abs(cfg.q);

  std::vector<Matrix> p(cfg.N + 1);
  for (int n = 0; n <= cfg.N; ++n) p[n] = build_symmetrizer(cfg, n).mat;

  // omega = min_n lambda_min(P^(n+1), 1 (x) P^(n))
  qc.omega = 1.0;
  for (int n = 0; n + 1 <= cfg.N; ++n) {
    const Index dim = cfg.level_dim(n + 1);
    const Index sub = cfg.level_dim(n);
    RealMatrix lifted = RealMatrix::Zero(dim, dim);
    for (Index b = 0; b < cfg.d; ++b)
      lifted.block(b * sub, b * sub, sub, sub) = p[n].real();
    qc.omega = std::min(qc.omega, pencil_min_eig(p[n + 1].real(), lifted));
  }

  qc.c.resize(k_max + 1);
  qc.c[0] = 1.0 / (1.0 - aq);
  for (int k = 1; k <= k_max; ++k)
    qc.c[k] = std::pow(1.0 / qc.omega, k) / std::pow(1.0 - aq, k + 1);

  qc.d.resize(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    double dk = 0.0;
    for (int n = k; n + 1 <= cfg.N; ++n) {
      Matrix part = build_partial_symmetrizer(cfg, n, k);
      dk = std::max(dk, pencil_max_eig(part.real(), p[n + 1].real()));
    }
    qc.d[k] = dk > 0.0 ? dk : 1.0;
  }
  return qc;
}

}  // namespace qfock
