#include "qfock/grid.hpp"

#include <cmath>

namespace qfock {

namespace {

bool near_integer(double x, double tol) {
  return std::abs(x - std::round(x)) <= tol;
}

}  // namespace

bool grid_aligned(const TimeGrid& grid, const Interval& iv, double tol) {
  if (!(iv.t1 >= -tol && iv.t2 <= grid.t_max + tol && iv.t1 <= iv.t2 + tol))
    return false;
  const double h = grid.cell_width();
  return near_integer(iv.t1 / h, tol) && near_integer(iv.t2 / h, tol);
}

std::pair<int, int> cell_range(const TimeGrid& grid, const Interval& iv) {
  if (!grid_aligned(grid, iv))
    throw std::invalid_argument("interval is not aligned to the grid");
  const double h = grid.cell_width();
  return {static_cast<int>(std::lround(iv.t1 / h)),
          static_cast<int>(std::lround(iv.t2 / h))};
}

Vector indicator_coeffs(const TimeGrid& grid, const Interval& iv) {
  auto [a, b] = cell_range(grid, iv);
  Vector v = Vector::Zero(grid.m);
  const double w = std::sqrt(grid.cell_width());
  for (int c = a; c < b; ++c) v[c] = w;
  return v;
}

Vector projection_diag(const TimeGrid& grid, const Interval& iv) {
  auto [a, b] = cell_range(grid, iv);
  Vector v = Vector::Zero(grid.m);
  for (int c = a; c < b; ++c) v[c] = 1.0;
  return v;
}

ProcessKind ProcessKind::gauge(Complex mu) {
  if (!(std::abs(mu) < 1.0))
    throw std::invalid_argument("gauge process needs |mu| < 1");
  return {Gauge, mu};
}

std::string ProcessKind::name() const {
  switch (type) {
    case Annihilation: return "A";
    case Creation: return "Astar";
    case Gauge: return "Lambda";
    case Time: return "T";
  }
  return "?";
}

std::string indicator_symbol(const TimeGrid& grid, const Interval& iv,
                             SymbolTable& symtab) {
  auto [a, b] = cell_range(grid, iv);
  if (a == b) return {};
  std::string id = "chi[" + std::to_string(a) + "," + std::to_string(b) + ")";
  if (!symtab.has_vector(id)) symtab.set_vector(id, indicator_coeffs(grid, iv));
  return id;
}

std::string projection_symbol(const TimeGrid& grid, const Interval& iv,
                              SymbolTable& symtab) {
  auto [a, b] = cell_range(grid, iv);
  if (a == b) return {};
  std::string id = "Pi[" + std::to_string(a) + "," + std::to_string(b) + ")";
  if (!symtab.has_op(id))
    symtab.set_operator(id, OneParticleOp::from_diag(projection_diag(grid, iv)));
  return id;
}

Polynomial basic_increment(const ProcessKind& kind, const Interval& iv,
                           const TimeGrid& grid, SymbolTable& symtab) {
  auto [a, b] = cell_range(grid, iv);
  switch (kind.type) {
    case ProcessKind::Annihilation: {
      if (a == b) return Polynomial::zero();
      return Polynomial::generator(
          make_annihilate(indicator_symbol(grid, iv, symtab)));
    }
    case ProcessKind::Creation: {
      if (a == b) return Polynomial::zero();
      return Polynomial::generator(
          make_create(indicator_symbol(grid, iv, symtab)));
    }
    case ProcessKind::Gauge: {
      if (a == b) return Polynomial::zero();
      return Polynomial::generator(
          make_lambda(kind.mu, projection_symbol(grid, iv, symtab)));
    }
    case ProcessKind::Time:
      return Polynomial::monomial(Word{}, Complex(iv.length(), 0.0));
  }
  throw std::logic_error("basic_increment: bad kind");
}

}  // namespace qfock
