#include "qfock/word.hpp"

#include "qfock/operators.hpp"

#include <cmath>

namespace qfock {

Generator make_create(std::string id) {
  return Generator{GenKind::Create, std::move(id), Complex(1, 0)};
}

Generator make_annihilate(std::string id) {
  return Generator{GenKind::Annihilate, std::move(id), Complex(1, 0)};
}

Generator make_lambda(Complex mu, std::string id) {
  if (!(std::abs(mu) < 1.0))
    throw std::invalid_argument("lambda generator needs |mu| < 1");
  return Generator{GenKind::Lambda, std::move(id), mu};
}

Generator make_gamma(Complex mu) {
  if (std::abs(mu) > 1.0 + 1e-15)
    throw std::invalid_argument("gamma generator needs |mu| <= 1");
  return Generator{GenKind::Gamma, std::string(), mu};
}

bool operator==(const Generator& a, const Generator& b) {
  return a.kind == b.kind && a.id == b.id && a.mu == b.mu;
}

bool generator_less(const Generator& a, const Generator& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.id != b.id) return a.id < b.id;
  if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
  return a.mu.imag() < b.mu.imag();
}

bool WordLess::operator()(const Word& a, const Word& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      generator_less);
}

Polynomial Polynomial::monomial(Word w, Complex c) {
  Polynomial p;
  p.add_term(std::move(w), c);
  return p;
}

void Polynomial::add_term(const Word& w, Complex c) {
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kPruneThreshold) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(Complex a) {
  if (std::abs(a) <= kPruneThreshold) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= a;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(std::move(w), ca * cb);
    }
  return out;
}

int creator_count(const Word& w) {
  int k = 0;
  for (const auto& g : w) k += (g.kind == GenKind::Create);
  return k;
}

int annihilator_count(const Word& w) {
  int l = 0;
  for (const auto& g : w) l += (g.kind == GenKind::Annihilate);
  return l;
}

Polynomial grade_component(const Polynomial& p, int n) {
  Polynomial out;
  for (const auto& [w, c] : p.terms())
    if (word_grade(w) == n) out.add_term(w, c);
  return out;
}

int max_intermediate_upshift(const Word& w) {
  int shift = 0, peak = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->kind == GenKind::Create) ++shift;
    if (it->kind == GenKind::Annihilate) --shift;
    peak = std::max(peak, shift);
  }
  return peak;
}

int max_intermediate_upshift(const Polynomial& p) {
  int peak = 0;
  for (const auto& [w, c] : p.terms())
    peak = std::max(peak, max_intermediate_upshift(w));
  return peak;
}

Polynomial q_adjoint_symbolic(const Polynomial& p, SymbolTable& symtab) {
  Polynomial out;
  for (const auto& [w, c] : p.terms()) {
    Word r;
    r.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      switch (it->kind) {
        case GenKind::Create:
          r.push_back(make_annihilate(it->id));
          break;
        case GenKind::Annihilate:
          r.push_back(make_create(it->id));
          break;
        case GenKind::Lambda:
          r.push_back(make_lambda(std::conj(it->mu), symtab.adjoint_op(it->id)));
          break;
        case GenKind::Gamma:
          r.push_back(make_gamma(std::conj(it->mu)));
          break;
      }
    }
    out.add_term(std::move(r), std::conj(c));
  }
  return out;
}

FockOperator evaluate_generator(const Generator& g, const TruncationConfig& cfg,
                                const SymbolTable& symtab) {
  switch (g.kind) {
    case GenKind::Create:
      return creation(cfg, symtab.vector(g.id));
    case GenKind::Annihilate:
      return annihilation(cfg, symtab.vector(g.id));
    case GenKind::Lambda:
      return gauge(cfg, g.mu, symtab.op(g.id).as_matrix());
    case GenKind::Gamma:
      return gamma_op(cfg, g.mu);
  }
  throw std::logic_error("evaluate_generator: bad kind");
}

FockOperator evaluate(const Polynomial& p, const TruncationConfig& cfg,
                      const SymbolTable& symtab) {
  const Index total = cfg.total_dim();
  FockOperator acc(Matrix::Zero(total, total), cfg.N, 0);
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    FockOperator prod = identity_operator(cfg);
    for (const auto& g : w) prod = prod * evaluate_generator(g, cfg, symtab);
    prod = c * prod;
    if (first) {
      acc = prod;
      first = false;
    } else {
      acc = acc + prod;
    }
  }
  return acc;
}

}  // namespace qfock
