#pragma once

#include "qfock/word.hpp"

#include <stdexcept>

namespace qfock {

struct RewriteBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Polynomial in which every word matches Create* Lambda* Gamma Annihilate*
/// with exactly one Gamma factor (gamma_1 when none survives rewriting).
class NormalForm {
 public:
  NormalForm() = default;
  explicit NormalForm(Polynomial p);  // validates the pattern

  const Polynomial& poly() const { return poly_; }
  static bool is_normal_word(const Word& w);

 private:
  Polynomial poly_;
};

/// Rewrites a polynomial to normal form by leftmost-innermost reduction of
/// the first disordered adjacent pair, using the commutation rule table
/// oriented left to right.  Adjacent gammas are fused; a gamma crossing a
/// lambda deposits its parameter into the lambda (the product of all lambda
/// and gamma parameters in a word is invariant, which is what the grading
/// maps consume).  The lambda-lambda exchange for commuting arguments is
/// never applied automatically.  Scalar products are resolved eagerly from
/// the symbol table.  Throws RewriteBudgetExceeded when `step_budget`
/// rewrites are exhausted.
NormalForm normal_order(const Polynomial& p, SymbolTable& symtab, double q,
                        std::size_t step_budget = 1000000);

/// Parameters of a normal word: creator count i, annihilator count j, lambda
/// count l, the product of lambda parameters, and the gamma parameter.
struct WordShape {
  int creators = 0;
  int annihilators = 0;
  int lambdas = 0;
  Complex lambda_product{1.0, 0.0};
  Complex gamma{1.0, 0.0};
};
WordShape word_shape(const Word& w);

/// Creator-count extraction: a normal monomial with i creators, j
/// annihilators, lambda parameters nu_1..nu_l and gamma parameter mu maps to
/// q^j nu_1..nu_l mu times itself when k = i, and to zero otherwise.
NormalForm q_k(const NormalForm& nf, int k, double q);

/// Middle-leg contraction of the product formula: scales each normal
/// monomial by q^(i+j) nu_1..nu_l mu.
NormalForm p_0(const NormalForm& nf, double q);

/// Explicit exchange of two adjacent lambdas (positions pos, pos+1 in the
/// word); valid only when the one-particle operators commute, which is
/// checked numerically.
Polynomial swap_adjacent_lambdas(const Word& w, std::size_t pos,
                                 const SymbolTable& symtab,
                                 double comm_tol = 1e-12);

/// Defect of the defining slot-insertion identity for q_k, computed with
/// explicit matrices on the space extended by one orthogonal direction.
/// Returns the maximum deformed-norm defect over the exact-region basis.
double q_k_vector_check(const NormalForm& nf, int k, const TruncationConfig& cfg,
                        const SymbolTable& symtab);

/// Analogous matrix-level check for p_0: compares a(phi) R a*(phi) with the
/// scaled operator on the extended space.
double p_0_vector_check(const NormalForm& nf, const TruncationConfig& cfg,
                        const SymbolTable& symtab);

}  // namespace qfock
