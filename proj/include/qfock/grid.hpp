#pragma once

#include "qfock/symbols.hpp"
#include "qfock/word.hpp"

#include <string>
#include <utility>

namespace qfock {

/// Uniform discretization of (0, t_max] into m cells; the one-particle space
/// is spanned by the normalized cell indicators, so its dimension equals m
/// and the one-particle Gram matrix is the identity.
struct TimeGrid {
  double t_max = 1.0;
  int m = 1;

  TimeGrid(double t_max_, int m_) : t_max(t_max_), m(m_) {
    if (!(t_max > 0.0) || m < 1)
      throw std::invalid_argument("TimeGrid: need t_max > 0 and m >= 1");
  }

  double cell_width() const { return t_max / m; }
  TruncationConfig config(double q, int levels) const { return {m, levels, q}; }
};

/// Half-open interval (t1, t2].
struct Interval {
  double t1 = 0.0;
  double t2 = 0.0;
  double length() const { return t2 - t1; }
};

bool grid_aligned(const TimeGrid& grid, const Interval& iv, double tol = 1e-9);

/// Cells covered by a grid-aligned interval, as [first, last).
std::pair<int, int> cell_range(const TimeGrid& grid, const Interval& iv);

/// Coefficients of the indicator of `iv` over the normalized cell basis:
/// sqrt(cell width) on each covered cell.
Vector indicator_coeffs(const TimeGrid& grid, const Interval& iv);

/// 0/1 diagonal of the orthogonal projection onto the covered cells.
Vector projection_diag(const TimeGrid& grid, const Interval& iv);

/// One of the four basic processes.
struct ProcessKind {
  enum Type { Annihilation, Creation, Gauge, Time };
  Type type = Time;
  Complex mu{0.0, 0.0};  // Gauge parameter, |mu| < 1

  static ProcessKind annihilation() { return {Annihilation, Complex(0, 0)}; }
  static ProcessKind creation() { return {Creation, Complex(0, 0)}; }
  static ProcessKind gauge(Complex mu);
  static ProcessKind time() { return {Time, Complex(0, 0)}; }

  std::string name() const;
};

/// Registers the indicator symbol chi[a,b) for a grid-aligned interval and
/// returns its id (empty intervals yield no symbol and an empty id).
std::string indicator_symbol(const TimeGrid& grid, const Interval& iv,
                             SymbolTable& symtab);
/// Same for the projection symbol Pi[a,b).
std::string projection_symbol(const TimeGrid& grid, const Interval& iv,
                              SymbolTable& symtab);

/// Increment S(t2) - S(t1) of a basic process over the grid-aligned interval
/// (t1, t2], as a symbolic polynomial over the grid symbol table.
Polynomial basic_increment(const ProcessKind& kind, const Interval& iv,
                           const TimeGrid& grid, SymbolTable& symtab);

}  // namespace qfock
