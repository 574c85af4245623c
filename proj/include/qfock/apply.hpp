#pragma once

#include "qfock/symbols.hpp"
#include "qfock/word.hpp"

#include <cstdint>

namespace qfock {

/// Matrix-free application of generator words, polynomials and the deformed
/// metric to Fock vectors.  This is the only path that scales to large
/// one-particle dimensions; the dense FockOperator path is for desk-scale
/// work and cross-validation.  Holds its own scratch buffers, so one
/// instance per thread.
class Applier {
 public:
  Applier(const TruncationConfig& cfg, const SymbolTable& symtab);

  const TruncationConfig& config() const { return cfg_; }

  /// out = g(in)
  void apply_generator(const Generator& g, const Vector& in, Vector& out) const;
  /// out = w(in), generators acting right to left
  void apply_word(const Word& w, const Vector& in, Vector& out);
  /// out = p(in)
  void apply_polynomial(const Polynomial& p, const Vector& in, Vector& out);
  /// out += scale * p(in)
  void accumulate_polynomial(const Polynomial& p, Complex scale, const Vector& in,
                             Vector& out);

  /// out = P in (blockwise symmetrizer), computed through the level
  /// recursion with cycle gathers.
  void apply_metric(const Vector& in, Vector& out) const;

  Complex inner(const Vector& a, const Vector& b) const;  // <a, P b>
  double norm(const Vector& a) const;

  Vector random_unit(std::uint64_t seed) const;

 private:
  TruncationConfig cfg_;
  const SymbolTable& symtab_;
  Vector w1_, w2_, w3_;
};

/// Largest deformed-metric singular value of the operator given by
/// polynomial `x` with symbolic adjoint `x_adj`, by Lanczos iteration on
/// x_adj x in the deformed inner product.  Deterministic for a fixed seed.
double lanczos_q_opnorm(Applier& applier, const Polynomial& x,
                        const Polynomial& x_adj, std::uint64_t seed,
                        int max_iter = 40, double rel_tol = 1e-4);

}  // namespace qfock
