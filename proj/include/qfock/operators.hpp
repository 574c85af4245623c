#pragma once

#include "qfock/metric.hpp"
#include "qfock/types.hpp"

namespace qfock {

/// Creation operator a*(phi): left tensoring, level n -> n+1; the top level
/// is dropped by the truncation, so the exact region ends at N-1.
FockOperator creation(const TruncationConfig& cfg, const Vector& phi);

/// Annihilation operator a(phi): the q-weighted contraction
/// sum_i q^(i-1) <phi, psi_i> over slots, level n -> n-1.
FockOperator annihilation(const TruncationConfig& cfg, const Vector& phi);

/// Deformed gauge operator lambda_mu(T): mu^n sum over slots of T applied in
/// one slot; requires |mu| < 1.
FockOperator gauge(const TruncationConfig& cfg, Complex mu, const Matrix& t);

/// Deformed identity gamma_mu: multiplies level n by mu^n; |mu| <= 1.
FockOperator gamma_op(const TruncationConfig& cfg, Complex mu);

/// Adjoint with respect to the deformed metric, computed blockwise as
/// P^{-1} X^H P.
FockOperator q_adjoint(const QMetric& metric, const FockOperator& x);

/// Operator norm in the deformed metric: largest singular value of
/// P^{1/2} X P^{-1/2} with blockwise square roots.
double q_operator_norm(const QMetric& metric, const FockOperator& x);

/// Restricted norm of the level block H^(x)n -> H^(x)m in the deformed
/// metric.
double q_block_norm(const QMetric& metric, const FockOperator& x, int n, int m);

/// Second quantization of a one-particle isometry u : H_1 -> H_2 (u^H u = 1):
/// factorwise application, an isometry between the deformed metrics.
/// The two truncations must keep the same number of levels.
Matrix second_quantization(const TruncationConfig& cfg1,
                           const TruncationConfig& cfg2, const Matrix& u);

/// sup_n n |mu|^n over all particle numbers (not just the truncation); the
/// gauge norm bound from the boundedness theorem.
double gauge_norm_bound_factor(Complex mu);

/// Free-metric spectral norm of a one-particle operator.
double spectral_norm(const Matrix& t);

}  // namespace qfock
