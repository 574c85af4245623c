#include "qfock/moments.hpp"

#include "qfock/apply.hpp"

#include <cmath>

namespace qfock {

std::vector<double> brownian_moments(const TimeGrid& grid, double q, int levels,
                                     double t, int n_max) {
  if (n_max < 1) throw std::invalid_argument("brownian_moments: n_max >= 1");
  if (2 * n_max > levels)
    throw std::invalid_argument(
        "brownian_moments: truncation too small, need 2*n_max <= N");
  TruncationConfig cfg = grid.config(q, levels);
  SymbolTable symtab(grid.m);
  Interval iv{0.0, t};
  Polynomial b = basic_increment(ProcessKind::annihilation(), iv, grid, symtab) +
                 basic_increment(ProcessKind::creation(), iv, grid, symtab);

  Applier applier(cfg, symtab);
  Vector v = vacuum_vector(cfg).coeffs;
  Vector next(cfg.total_dim());
  std::vector<double> out;
  for (int k = 1; k <= 2 * n_max; ++k) {
    applier.apply_polynomial(b, v, next);
    v.swap(next);
    if (k % 2 == 0) out.push_back(std::real(v[0]));
  }
  return out;
}

namespace {

// pairings built by always matching the smallest free point; crossings
// counted pair against pair
double enumerate(std::vector<int>& partner, double q, int level_points,
                 int* built, std::vector<std::pair<int, int>>& pairs) {
  int first = -1;
  for (int i = 0; i < level_points; ++i)
    if (partner[i] < 0) {
      first = i;
      break;
    }
  if (first < 0) {
    double cr = 0;
    for (std::size_t a = 0; a < pairs.size(); ++a)
      for (std::size_t b = a + 1; b < pairs.size(); ++b) {
        auto [i, j] = pairs[a];
        auto [k, l] = pairs[b];
        if (k < i) { std::swap(i, k); std::swap(j, l); }
        if (i < k && k < j && j < l) cr += 1.0;
      }
    ++*built;
    return std::pow(q, cr);
  }
  double total = 0.0;
  for (int j = first + 1; j < level_points; ++j) {
    if (partner[j] >= 0) continue;
    partner[first] = j;
    partner[j] = first;
    pairs.push_back({first, j});
    total += enumerate(partner, q, level_points, built, pairs);
    pairs.pop_back();
    partner[first] = -1;
    partner[j] = -1;
  }
  return total;
}

}  // namespace

double pair_partition_moment(double q, double t, int n) {
  if (n < 0 || n > 6)
    throw std::invalid_argument("pair_partition_moment: supported for n <= 6");
  if (n == 0) return 1.0;
  std::vector<int> partner(2 * n, -1);
  std::vector<std::pair<int, int>> pairs;
  int built = 0;
  const double sum = enumerate(partner, q, 2 * n, &built, pairs);
  return sum * std::pow(t, n);
}

}  // namespace qfock
