#pragma once

#include "qfock/types.hpp"

namespace qfock {

/// q-symmetrizer P^(n) on the n-th tensor power, free basis.
struct QSymmetrizer {
  int level = 0;
  Matrix mat;
};

/// Builds P^(n) = sum_{sigma in S_n} q^{inv(sigma)} (permutation action)
/// through the level recursion P^(n) = D_n (1 (x) P^(n-1)), where D_n is the
/// sum over k = 1..n of the cycle moving slot 1 to slot k, weighted q^(k-1).
QSymmetrizer build_symmetrizer(const TruncationConfig& cfg, int n);

/// 1 (x)_k P^(n) on the (n+1)-st tensor power: symmetrizes every factor
/// except the one in slot k+1.  Zero when n < k.
Matrix build_partial_symmetrizer(const TruncationConfig& cfg, int n, int k);

/// Constants of the sandwich inequalities between P^(n+1) and the partial
/// symmetrizers.  `omega` is a numerical estimate (a generalized-eigenvalue
/// minimum over the truncation) and is flagged as such in reports; the c[k]
/// chain uses inverse powers of it so that every downstream bound stays
/// sound when omega is under-estimated.
struct QConstants {
  double q = 0.0;
  double omega = 1.0;
  std::vector<double> c;  // ||.|| <= sqrt(c_k) ||.||_{1 (x)_k P} on levels > k
  std::vector<double> d;  // 1 (x)_k P^(n) <= d_k P^(n+1)
};

/// Estimates omega(q) and the c_k, d_k families on the given truncation,
/// for k = 0..k_max.
QConstants estimate_constants(const TruncationConfig& cfg, int k_max);

}  // namespace qfock
