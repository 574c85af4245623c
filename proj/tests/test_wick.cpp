#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfock/apply.hpp"
#include "qfock/fock.hpp"
#include "qfock/normal_order.hpp"
#include "qfock/operators.hpp"
#include "qfock/rng.hpp"

#include <set>

using namespace qfock;

namespace {

SymbolTable small_table(int d, std::uint64_t seed) {
  SymbolTable t(d);
  Rng rng(seed);
  t.set_vector("phi1", rng.complex_vector(d));
  t.set_vector("phi2", rng.complex_vector(d));
  t.set_vector("psi1", rng.complex_vector(d));
  t.set_operator("T1", OneParticleOp::from_dense(rng.complex_matrix(d, d)));
  t.set_operator("T2", OneParticleOp::from_diag(rng.complex_vector(d)));
  return t;
}

Word random_word(Rng& rng, int len) {
  static const char* vecs[] = {"phi1", "phi2", "psi1"};
  static const char* ops[] = {"T1", "T2"};
  Word w;
  for (int i = 0; i < len; ++i) {
    switch (rng.below(4)) {
      case 0: w.push_back(make_create(vecs[rng.below(3)])); break;
      case 1: w.push_back(make_annihilate(vecs[rng.below(3)])); break;
      case 2: w.push_back(make_lambda(rng.complex_in_disk(0.8), ops[rng.below(2)])); break;
      default: w.push_back(make_gamma(rng.complex_in_disk(1.0)));
    }
  }
  return w;
}

// residual of (p1 - p2) on random exact-region vectors, matrix-free
double equivalence_residual(const Polynomial& p1, const Polynomial& p2,
                            const TruncationConfig& cfg, const SymbolTable& symtab,
                            std::uint64_t seed, int n_vectors = 8) {
  Applier applier(cfg, symtab);
  const int shift =
      std::max(max_intermediate_upshift(p1), max_intermediate_upshift(p2));
  const int max_level = std::max(0, cfg.N - shift);
  const Index keep = cfg.level_offset(max_level) + cfg.level_dim(max_level);
  Rng rng(seed);
  Vector out1(cfg.total_dim()), out2(cfg.total_dim());
  double worst = 0.0;
  for (int i = 0; i < n_vectors; ++i) {
    Vector v = Vector::Zero(cfg.total_dim());
    v.head(keep) = rng.complex_vector(keep);
    v /= applier.norm(v);
    applier.apply_polynomial(p1, v, out1);
    applier.apply_polynomial(p2, v, out2);
    worst = std::max(worst, applier.norm(Vector(out1 - out2)));
  }
  return worst;
}

}  // namespace

TEST_CASE("annihilator past creator produces the exchange relation") {
  const double q = 0.45;
  SymbolTable symtab = small_table(2, 1);
  Polynomial p = Polynomial::monomial(
      Word{make_annihilate("phi1"), make_create("psi1")});
  NormalForm nf = normal_order(p, symtab, q);

  Word swapped{make_create("psi1"), make_gamma(Complex(1, 0)),
               make_annihilate("phi1")};
  Word scalar{make_gamma(Complex(1, 0))};
  REQUIRE(nf.poly().size() == 2);
  auto it = nf.poly().terms().find(swapped);
  REQUIRE(it != nf.poly().terms().end());
  CHECK(std::abs(it->second - Complex(q, 0)) < 1e-15);
  auto it2 = nf.poly().terms().find(scalar);
  REQUIRE(it2 != nf.poly().terms().end());
  CHECK(std::abs(it2->second - symtab.vec_inner("phi1", "psi1")) < 1e-15);
}

TEST_CASE("gammas fuse") {
  SymbolTable symtab = small_table(2, 2);
  Polynomial p = Polynomial::monomial(
      Word{make_gamma(Complex(0.5, 0)), make_gamma(Complex(0.5, 0))});
  NormalForm nf = normal_order(p, symtab, 0.3);
  REQUIRE(nf.poly().size() == 1);
  const Word expected{make_gamma(Complex(0.25, 0))};
  CHECK(nf.poly().terms().count(expected) == 1);
}

TEST_CASE("annihilator passes a lambda with the adjoint twist") {
  const double q = 0.2;
  const Complex mu(0.4, 0.1);
  SymbolTable symtab = small_table(2, 3);
  Polynomial p = Polynomial::monomial(
      Word{make_annihilate("phi1"), make_lambda(mu, "T1")});
  NormalForm nf = normal_order(p, symtab, q);

  const std::string derived = "T1^H.phi1";
  REQUIRE(symtab.has_vector(derived));
  Word first{make_lambda(mu, "T1"), make_gamma(Complex(1, 0)),
             make_annihilate("phi1")};
  Word second{make_gamma(mu), make_annihilate(derived)};
  REQUIRE(nf.poly().terms().count(first) == 1);
  REQUIRE(nf.poly().terms().count(second) == 1);
  CHECK(std::abs(nf.poly().terms().at(first) - mu) < 1e-15);
  CHECK(std::abs(nf.poly().terms().at(second) - mu) < 1e-15);
}

TEST_CASE("normal form pattern and single gamma") {
  SymbolTable symtab = small_table(2, 4);
  Rng rng(99);
  for (int it = 0; it < 40; ++it) {
    Word w = random_word(rng, 1 + static_cast<int>(rng.below(5)));
    NormalForm nf = normal_order(Polynomial::monomial(w), symtab, 0.5);
    for (const auto& [word, c] : nf.poly().terms())
      CHECK(NormalForm::is_normal_word(word));
  }
}

TEST_CASE("rewriting preserves the operator: random words") {
  Rng rng(7);
  for (int it = 0; it < 40; ++it) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const int len = 1 + static_cast<int>(rng.below(5));
    SymbolTable symtab = small_table(d, 1000 + it);
    const double q = rng.uniform(-0.8, 0.8);
    TruncationConfig cfg(d, len + 2, q);
    Word w = random_word(rng, len);
    Polynomial p = Polynomial::monomial(w);
    NormalForm nf = normal_order(p, symtab, q);
    CHECK(equivalence_residual(p, nf.poly(), cfg, symtab, 500 + it) <= 1e-9);
  }
}

TEST_CASE("rewriting matches dense evaluation") {
  const double q = -0.35;
  SymbolTable symtab = small_table(2, 5);
  TruncationConfig cfg(2, 5, q);
  Polynomial p = Polynomial::monomial(Word{
      make_annihilate("phi1"), make_lambda(Complex(0.5, 0.2), "T1"),
      make_create("psi1")});
  NormalForm nf = normal_order(p, symtab, q);
  const FockOperator direct = evaluate(p, cfg, symtab);
  const FockOperator ordered = evaluate(nf.poly(), cfg, symtab);
  const int shift = std::max(max_intermediate_upshift(p),
                             max_intermediate_upshift(nf.poly()));
  const Index keep =
      cfg.level_offset(cfg.N - shift) + cfg.level_dim(cfg.N - shift);
  CHECK((direct.mat - ordered.mat).leftCols(keep).norm() < 1e-12);
}

TEST_CASE("rewrite budget throws instead of spinning") {
  SymbolTable symtab = small_table(2, 6);
  Polynomial p = Polynomial::monomial(Word{
      make_annihilate("phi1"), make_annihilate("phi2"), make_create("psi1"),
      make_create("phi1"), make_annihilate("psi1"), make_create("phi2")});
  CHECK_THROWS_AS(normal_order(p, symtab, 0.5, 3), RewriteBudgetExceeded);
  // and a generous budget succeeds
  CHECK_NOTHROW(normal_order(p, symtab, 0.5));
}

TEST_CASE("empty polynomial and identity word") {
  SymbolTable symtab = small_table(2, 7);
  NormalForm nf = normal_order(Polynomial::one(), symtab, 0.5);
  REQUIRE(nf.poly().size() == 1);
  const Word gamma_one{make_gamma(Complex(1, 0))};
  CHECK(nf.poly().terms().count(gamma_one) == 1);
  CHECK(normal_order(Polynomial::zero(), symtab, 0.5).poly().is_zero());
}

TEST_CASE("creator count extraction") {
  const double q = 0.6;
  const Complex nu(0.5, 0.1), mu(0.8, 0);
  SymbolTable symtab = small_table(2, 8);

  // S = a*(phi1) lambda_nu(T1) gamma_mu a(psi1) a(phi2): Q_1(S) = q^2 nu mu S
  Word w{make_create("phi1"), make_lambda(nu, "T1"), make_gamma(mu),
         make_annihilate("psi1"), make_annihilate("phi2")};
  NormalForm nf{Polynomial::monomial(w)};
  NormalForm q1 = q_k(nf, 1, q);
  REQUIRE(q1.poly().size() == 1);
  CHECK(std::abs(q1.poly().terms().at(w) - q * q * nu * mu) < 1e-15);
  CHECK(q_k(nf, 0, q).poly().is_zero());
  CHECK(q_k(nf, 2, q).poly().is_zero());

  // identity word (single gamma_1): Q_0 = identity
  Word id_word{make_gamma(Complex(1, 0))};
  NormalForm nf_id{Polynomial::monomial(id_word)};
  NormalForm q0 = q_k(nf_id, 0, q);
  CHECK(std::abs(q0.poly().terms().at(id_word) - Complex(1, 0)) < 1e-15);

  // a single creator has no k = 2 component
  Word cre{make_create("phi1"), make_gamma(Complex(1, 0))};
  CHECK(q_k(NormalForm{Polynomial::monomial(cre)}, 2, q).poly().is_zero());
}

TEST_CASE("creator extraction against the extended-space identity") {
  Rng rng(13);
  for (int it = 0; it < 12; ++it) {
    SymbolTable symtab = small_table(2, 2000 + it);
    const double q = rng.uniform(-0.7, 0.7);
    TruncationConfig cfg(2, 5, q);
    Word w = random_word(rng, 1 + static_cast<int>(rng.below(4)));
    NormalForm nf = normal_order(Polynomial::monomial(w), symtab, q);
    if (nf.poly().is_zero()) continue;
    std::set<int> ks;
    for (const auto& [word, c] : nf.poly().terms())
      ks.insert(creator_count(word));
    ks.insert(3);  // a count that is usually absent: both sides vanish
    for (int k : ks) CHECK(q_k_vector_check(nf, k, cfg, symtab) <= 1e-10);
  }
}

TEST_CASE("gamma case of the extraction identity") {
  SymbolTable symtab = small_table(2, 9);
  const double q = 0.5;
  TruncationConfig cfg(2, 4, q);
  Word w{make_gamma(Complex(0.7, 0.1))};
  NormalForm nf{Polynomial::monomial(w)};
  CHECK(q_k_vector_check(nf, 0, cfg, symtab) <= 1e-12);
  CHECK(q_k_vector_check(nf, 3, cfg, symtab) <= 1e-12);  // both sides vanish
}

TEST_CASE("middle-leg contraction scalings") {
  const double q = 0.4;
  const Complex mu(0.6, 0), nu(0.3, 0.2);
  SymbolTable symtab = small_table(2, 10);

  Word id_word{make_gamma(Complex(1, 0))};
  NormalForm nf_id{Polynomial::monomial(id_word)};
  CHECK(std::abs(p_0(nf_id, q).poly().terms().at(id_word) - Complex(1, 0)) <
        1e-15);

  Word r{make_create("phi1"), make_gamma(mu), make_annihilate("psi1")};
  NormalForm nfr{Polynomial::monomial(r)};
  CHECK(std::abs(p_0(nfr, q).poly().terms().at(r) - q * q * mu) < 1e-15);

  Word lg{make_lambda(nu, "T1"), make_gamma(mu)};
  NormalForm nflg{Polynomial::monomial(lg)};
  CHECK(std::abs(p_0(nflg, q).poly().terms().at(lg) - nu * mu) < 1e-15);
}

TEST_CASE("middle-leg contraction against the extended-space identity") {
  Rng rng(19);
  for (int it = 0; it < 12; ++it) {
    SymbolTable symtab = small_table(2, 3000 + it);
    const double q = rng.uniform(-0.7, 0.7);
    TruncationConfig cfg(2, 5, q);
    Word w = random_word(rng, 1 + static_cast<int>(rng.below(4)));
    NormalForm nf = normal_order(Polynomial::monomial(w), symtab, q);
    if (nf.poly().is_zero()) continue;
    CHECK(p_0_vector_check(nf, cfg, symtab) <= 1e-10);
  }
}

TEST_CASE("grade components") {
  SymbolTable symtab = small_table(2, 11);
  const double q = 0.5;
  TruncationConfig cfg(2, 4, q);
  QMetric metric(cfg);

  Polynomial s = Polynomial::monomial(Word{make_create("phi1")});
  CHECK(grade_component(s, 1) == s);
  CHECK(grade_component(s, 0).is_zero());
  CHECK(grade_component(s, -1).is_zero());

  Polynomial p = Polynomial::monomial(
      Word{make_annihilate("phi1"), make_create("psi1")});
  CHECK(grade_component(p, 0) == p);

  // components sum back and satisfy the projection sandwich
  Polynomial mixed = s + p + Polynomial::monomial(Word{
      make_annihilate("phi1"), make_annihilate("phi2")});
  Polynomial back;
  for (int n = -3; n <= 3; ++n) back += grade_component(mixed, n);
  CHECK(back == mixed);

  Matrix sm = evaluate(mixed, cfg, symtab).mat;
  for (int n = -2; n <= 2; ++n) {
    Matrix comp = evaluate(grade_component(mixed, n), cfg, symtab).mat;
    Matrix sandwich = Matrix::Zero(sm.rows(), sm.cols());
    for (int i = 0; i <= cfg.N; ++i) {
      if (i + n < 0 || i + n > cfg.N) continue;
      sandwich += level_projection(cfg, i + n).mat * sm *
                  level_projection(cfg, i).mat;
    }
    CHECK((comp - sandwich).norm() < 1e-10);
    // grading never grows the norm
    CHECK(q_operator_norm(metric, FockOperator(comp, cfg.N, 0)) <=
          q_operator_norm(metric, FockOperator(sm, cfg.N, 0)) + 1e-10);
  }
}

TEST_CASE("symbolic adjoint") {
  SymbolTable symtab = small_table(2, 12);
  const double q = 0.55;
  TruncationConfig cfg(2, 4, q);
  QMetric metric(cfg);

  Polynomial astar = Polynomial::monomial(Word{make_create("phi1")});
  Polynomial a = q_adjoint_symbolic(astar, symtab);
  CHECK(a.terms().count(Word{make_annihilate("phi1")}) == 1);

  const Complex mu(0.3, 0.7);
  Polynomial g = Polynomial::monomial(Word{make_gamma(mu)});
  Polynomial gstar = q_adjoint_symbolic(g, symtab);
  CHECK(gstar.terms().count(Word{make_gamma(std::conj(mu))}) == 1);

  Rng rng(41);
  for (int it = 0; it < 10; ++it) {
    Word w = random_word(rng, 1 + static_cast<int>(rng.below(4)));
    Polynomial p = Polynomial::monomial(w, rng.complex_in_disk(2.0));
    CHECK(q_adjoint_symbolic(q_adjoint_symbolic(p, symtab), symtab) == p);

    // symbolic adjoint evaluates to the metric adjoint on the exact region
    FockOperator direct = q_adjoint(metric, evaluate(p, cfg, symtab));
    FockOperator symbolic = evaluate(q_adjoint_symbolic(p, symtab), cfg, symtab);
    const int shift = 1 + max_intermediate_upshift(p);
    const Index keep = cfg.level_offset(std::max(0, cfg.N - shift)) +
                       cfg.level_dim(std::max(0, cfg.N - shift));
    CHECK((direct.mat - symbolic.mat).leftCols(keep).norm() < 1e-9);
  }
}

TEST_CASE("explicit lambda exchange needs commuting arguments") {
  SymbolTable symtab(2);
  Rng rng(43);
  Matrix t1 = rng.complex_matrix(2, 2);
  symtab.set_operator("T1", OneParticleOp::from_dense(t1));
  symtab.set_operator("T1sq", OneParticleOp::from_dense(Matrix(t1 * t1)));
  symtab.set_operator("other", OneParticleOp::from_dense(rng.complex_matrix(2, 2)));

  Word ok{make_lambda(Complex(0.3, 0), "T1"), make_lambda(Complex(0.4, 0), "T1sq")};
  Polynomial swapped = swap_adjacent_lambdas(ok, 0, symtab);
  Word expect{make_lambda(Complex(0.4, 0), "T1sq"), make_lambda(Complex(0.3, 0), "T1")};
  CHECK(swapped.terms().count(expect) == 1);

  Word bad{make_lambda(Complex(0.3, 0), "T1"), make_lambda(Complex(0.4, 0), "other")};
  CHECK_THROWS_AS(swap_adjacent_lambdas(bad, 0, symtab), std::invalid_argument);
}

TEST_CASE("lambda and gamma parameter bounds") {
  CHECK_THROWS_AS(make_lambda(Complex(1.0, 0), "T1"), std::invalid_argument);
  CHECK_THROWS_AS(make_gamma(Complex(1.5, 0)), std::invalid_argument);
  CHECK_NOTHROW(make_gamma(Complex(1.0, 0)));
}
