#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfock {

using Complex = std::complex<double>;
using Index = std::int64_t;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Truncated q-Fock space over a d-dimensional one-particle space,
/// keeping levels 0..N.  Level n is spanned by simple tensors
/// e_{i1} (x) ... (x) e_{in}, multi-indices listed lexicographically
/// with the first slot most significant.
struct TruncationConfig {
  int d = 1;       ///< one-particle basis size
  int N = 1;       ///< maximal particle number kept
  double q = 0.0;  ///< deformation parameter, |q| < 1

  TruncationConfig(int d_, int N_, double q_) : d(d_), N(N_), q(q_) {
    if (d < 1) throw std::invalid_argument("TruncationConfig: d must be >= 1");
    if (N < 1) throw std::invalid_argument("TruncationConfig: N must be >= 1");
    if (!(std::abs(q) < 1.0))
      throw std::invalid_argument("TruncationConfig: |q| must be < 1");
  }

  Index level_dim(int n) const {
    Index r = 1;
    for (int i = 0; i < n; ++i) r *= d;
    return r;
  }

  Index level_offset(int n) const {
    Index off = 0, dim = 1;
    for (int i = 0; i < n; ++i) {
      off += dim;
      dim *= d;
    }
    return off;
  }

  Index total_dim() const { return level_offset(N) + level_dim(N); }

  bool operator==(const TruncationConfig& o) const {
    return d == o.d && N == o.N && q == o.q;
  }
};

/// Decode the s-th slot (0-based, slot 0 most significant) of a level-n
/// basis index.
inline int slot_digit(Index idx, int s, int n, int d) {
  for (int t = n - 1; t > s; --t) idx /= d;
  return static_cast<int>(idx % d);
}

/// Element of the truncated Fock space: one coefficient per basis tensor,
/// all levels concatenated.
struct FockVector {
  TruncationConfig cfg;
  Vector coeffs;

  explicit FockVector(const TruncationConfig& c)
      : cfg(c), coeffs(Vector::Zero(c.total_dim())) {}
  FockVector(const TruncationConfig& c, Vector v) : cfg(c), coeffs(std::move(v)) {
    if (coeffs.size() != cfg.total_dim())
      throw std::invalid_argument("FockVector: coefficient size mismatch");
  }

  Eigen::VectorBlock<Vector> level(int n) {
    return coeffs.segment(cfg.level_offset(n), cfg.level_dim(n));
  }
  Eigen::VectorBlock<const Vector> level(int n) const {
    return coeffs.segment(cfg.level_offset(n), cfg.level_dim(n));
  }
};

/// The vacuum unit vector Omega.
inline FockVector vacuum_vector(const TruncationConfig& cfg) {
  FockVector v(cfg);
  v.coeffs[0] = Complex(1.0, 0.0);
  return v;
}

/// Dense operator on the truncated Fock space.  `exactness` is the largest
/// level L such that the action on levels <= L carries no truncation
/// artifact; `upshift` is the largest level increase any component of the
/// operator can produce (creators raise it, annihilators lower it).
struct FockOperator {
  Matrix mat;
  int exactness = 0;
  int upshift = 0;

  FockOperator() = default;
  FockOperator(Matrix m, int ex, int up = 0)
      : mat(std::move(m)), exactness(ex), upshift(up) {}
};

inline FockOperator identity_operator(const TruncationConfig& cfg) {
  return FockOperator(Matrix::Identity(cfg.total_dim(), cfg.total_dim()), cfg.N, 0);
}

/// Composition rule: the right factor acts first, so its upshift eats into
/// the left factor's exact region.
inline FockOperator compose(const FockOperator& x, const FockOperator& y) {
  FockOperator r;
  r.mat = x.mat * y.mat;
  r.exactness = std::min<int>(y.exactness, x.exactness - y.upshift);
  r.upshift = x.upshift + y.upshift;
  return r;
}

inline FockOperator operator*(const FockOperator& x, const FockOperator& y) {
  return compose(x, y);
}

inline FockOperator operator+(const FockOperator& x, const FockOperator& y) {
  FockOperator r;
  r.mat = x.mat + y.mat;
  r.exactness = std::min(x.exactness, y.exactness);
  r.upshift = std::max(x.upshift, y.upshift);
  return r;
}

inline FockOperator operator-(const FockOperator& x, const FockOperator& y) {
  FockOperator r;
  r.mat = x.mat - y.mat;
  r.exactness = std::min(x.exactness, y.exactness);
  r.upshift = std::max(x.upshift, y.upshift);
  return r;
}

inline FockOperator operator*(Complex a, const FockOperator& x) {
  return FockOperator(a * x.mat, x.exactness, x.upshift);
}

}  // namespace qfock
