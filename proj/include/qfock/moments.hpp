#pragma once

#include "qfock/grid.hpp"

#include <vector>

namespace qfock {

/// Vacuum moments tau(B(t)^(2n)) for n = 1..n_max of the combined
/// creation-plus-annihilation process, computed by repeated operator
/// application to the vacuum.  Requires 2 n_max <= levels so that no
/// contributing path can cross the truncation.
std::vector<double> brownian_moments(const TimeGrid& grid, double q, int levels,
                                     double t, int n_max);

/// Companion oracle: sum over pair partitions of {1..2n} of
/// q^(number of crossings) t^n, by exhaustive enumeration (n <= 6).
double pair_partition_moment(double q, double t, int n);

}  // namespace qfock
