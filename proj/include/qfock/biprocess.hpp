#pragma once

#include "qfock/grid.hpp"
#include "qfock/metric.hpp"
#include "qfock/normal_order.hpp"
#include "qfock/symmetrizer.hpp"
#include "qfock/word.hpp"

#include <map>
#include <vector>

namespace qfock {

/// Finite sum of elementary tensors F (x) G of generator words; the tensor
/// legs multiply operators from the left and the right respectively.
class Bioperator {
 public:
  struct KeyLess {
    bool operator()(const std::pair<Word, Word>& a,
                    const std::pair<Word, Word>& b) const {
      WordLess less;
      if (less(a.first, b.first)) return true;
      if (less(b.first, a.first)) return false;
      return less(a.second, b.second);
    }
  };
  using TermMap = std::map<std::pair<Word, Word>, Complex, KeyLess>;

  Bioperator() = default;
  static Bioperator zero() { return {}; }
  static Bioperator one();  // 1 (x) 1
  static Bioperator simple(const Polynomial& f, const Polynomial& g);

  void add_term(const Word& f, const Word& g, Complex c);
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Bioperator& operator+=(const Bioperator& o);
  friend Bioperator operator+(Bioperator a, const Bioperator& b) { return a += b; }
  friend Bioperator operator*(Complex a, const Bioperator& b);

  /// S (F (x) G) = (S F) (x) G
  friend Bioperator operator*(const Polynomial& s, const Bioperator& b);
  /// (F (x) G) S = F (x) (G S)
  friend Bioperator operator*(const Bioperator& b, const Polynomial& s);

  /// (F (x) G) # S = F S G
  Polynomial sharp(const Polynomial& s) const;

  /// (F (x) G)* = G* (x) F*
  Bioperator convolution(SymbolTable& symtab) const;

  /// Q_k extended over the left leg: Q_k(F (x) G) = Q_k(F) G.
  Polynomial q_k_leg(int k, SymbolTable& symtab, double q) const;

 private:
  TermMap terms_;
};

/// Piecewise-constant biprocess: disjoint grid-aligned intervals, one
/// bioperator per piece.
struct BiprocessPiece {
  Bioperator b;
  Interval iv;
};

struct SimpleBiprocess {
  std::vector<BiprocessPiece> pieces;

  void validate(const TimeGrid& grid) const;  // alignment + disjointness
};

enum class Adaptedness { Adapted, LeftAdapted, RightAdapted, None };
std::string adaptedness_name(Adaptedness a);

/// Cells on which a word's generators are supported (vectors and lambda
/// arguments; gammas and scalars have empty support).
std::vector<int> word_support_cells(const Word& w, const SymbolTable& symtab,
                                    double tol = 1e-12);

/// Strongest tag the biprocess satisfies: every generator used on a piece
/// must be supported before the piece starts (a piece constant on (t1, t2]
/// lies in the time-t algebra for almost all t in the piece iff its support
/// sits in (0, t1]).
Adaptedness check_adapted(const SimpleBiprocess& r, const TimeGrid& grid,
                          const SymbolTable& symtab);

/// Riemann-sum stochastic integral of a simple biprocess, as a symbolic
/// polynomial.  Adaptedness prerequisites: left-adapted for the creation
/// integrator, right-adapted for annihilation, adapted for gauge, none for
/// time.  Violations throw, naming the offending piece.
Polynomial integrate_symbolic(const SimpleBiprocess& r, const ProcessKind& kind,
                              const TimeGrid& grid, SymbolTable& symtab);

/// Dense evaluation of the integral.
FockOperator integrate(const SimpleBiprocess& r, const ProcessKind& kind,
                       const TimeGrid& grid, const TruncationConfig& cfg,
                       SymbolTable& symtab);

/// Seminorm controlling creation integrals:
///   sum_k ( c_k  int ||Q_k[R(t)]||^2 dt )^(1/2),
/// the time integral collapsing to a finite sum over pieces and k running
/// over the creator counts present.
double seminorm_creation(const SimpleBiprocess& r, const TimeGrid& grid,
                         const TruncationConfig& cfg, SymbolTable& symtab,
                         const QMetric& metric, const QConstants& constants);

/// ||R||_A = ||R*||_{A*}.
double seminorm_annihilation(const SimpleBiprocess& r, const TimeGrid& grid,
                             const TruncationConfig& cfg, SymbolTable& symtab,
                             const QMetric& metric, const QConstants& constants);

/// Gauge seminorm: sup over pieces and 1 <= n,m <= N of
/// sqrt(nm) ||R(t) # lambda_mu(Pi_(t, t_max])||_{n -> m}, the within-piece
/// supremum evaluated at the piece's left endpoint (cross-checked against
/// the right endpoint by tests via `at_right_endpoint`).
double seminorm_gauge(const SimpleBiprocess& r, Complex mu, const TimeGrid& grid,
                      const TruncationConfig& cfg, SymbolTable& symtab,
                      const QMetric& metric, bool at_right_endpoint = false);

/// ||R||_T = int ||R # 1|| dt.
double seminorm_time(const SimpleBiprocess& r, const TimeGrid& grid,
                     const TruncationConfig& cfg, SymbolTable& symtab,
                     const QMetric& metric);

}  // namespace qfock
