#pragma once

#include "qfock/metric.hpp"
#include "qfock/types.hpp"

namespace qfock {

/// Deformed inner product of two Fock vectors under the given metric.
Complex q_inner(const QMetric& metric, const FockVector& a, const FockVector& b);

/// Orthogonal projection onto the j-th level (idempotent, self-adjoint in
/// the deformed metric since levels are mutually orthogonal).
FockOperator level_projection(const TruncationConfig& cfg, int j);

/// Vacuum expectation tau(X) = <Omega, X Omega>.
Complex vacuum_state(const QMetric& metric, const FockOperator& x);

}  // namespace qfock
