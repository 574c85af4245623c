#pragma once

#include "qfock/metric.hpp"
#include "qfock/symbols.hpp"
#include "qfock/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qfock {

/// Kinds are numbered in normal-order rank: creators, then lambdas, then the
/// single gamma, then annihilators.
enum class GenKind : std::uint8_t { Create = 0, Lambda = 1, Gamma = 2, Annihilate = 3 };

struct Generator {
  GenKind kind = GenKind::Gamma;
  std::string id;           // vector id (Create/Annihilate) or operator id (Lambda)
  Complex mu{1.0, 0.0};     // parameter of Lambda/Gamma
};

Generator make_create(std::string id);
Generator make_annihilate(std::string id);
Generator make_lambda(Complex mu, std::string id);  // enforces |mu| < 1
Generator make_gamma(Complex mu);                   // enforces |mu| <= 1

bool operator==(const Generator& a, const Generator& b);
bool generator_less(const Generator& a, const Generator& b);

using Word = std::vector<Generator>;

struct WordLess {
  bool operator()(const Word& a, const Word& b) const;
};

/// Finite linear combination of generator words; the empty word is the
/// identity.  Zero coefficients are pruned at a fixed absolute threshold so
/// floating dust does not accumulate through long rewrites.
class Polynomial {
 public:
  static constexpr double kPruneThreshold = 1e-14;
  using TermMap = std::map<Word, Complex, WordLess>;

  Polynomial() = default;
  static Polynomial zero() { return {}; }
  static Polynomial one() { return monomial(Word{}, 1.0); }
  static Polynomial monomial(Word w, Complex c = Complex(1.0, 0.0));
  static Polynomial generator(Generator g) { return monomial(Word{std::move(g)}); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Word& w, Complex c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(Complex a);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Complex a, Polynomial p) { return p *= a; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

 private:
  TermMap terms_;
};

int creator_count(const Word& w);
int annihilator_count(const Word& w);

/// Creator surplus k - l of a word.
inline int word_grade(const Word& w) {
  return creator_count(w) - annihilator_count(w);
}

/// Sub-polynomial of words with creator surplus n; the components sum back
/// to the original polynomial.
Polynomial grade_component(const Polynomial& p, int n);

/// Largest intermediate level increase seen when the word is applied to a
/// vector (generators act right to left).  Level L inputs stay artifact-free
/// iff L + this bound <= N.
int max_intermediate_upshift(const Word& w);
int max_intermediate_upshift(const Polynomial& p);

/// Word reversal with generator conjugation: the adjoint in the deformed
/// metric, computed symbolically.  Derived operator symbols (T^H) are
/// registered in the table.
Polynomial q_adjoint_symbolic(const Polynomial& p, SymbolTable& symtab);

/// Substitutes matrices for generators and multiplies.
FockOperator evaluate(const Polynomial& p, const TruncationConfig& cfg,
                      const SymbolTable& symtab);

FockOperator evaluate_generator(const Generator& g, const TruncationConfig& cfg,
                                const SymbolTable& symtab);

}  // namespace qfock
