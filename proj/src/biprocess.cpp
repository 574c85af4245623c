#include "qfock/biprocess.hpp"

#include "qfock/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qfock {

Bioperator Bioperator::one() {
  Bioperator b;
  b.add_term(Word{}, Word{}, Complex(1, 0));
  return b;
}

Bioperator Bioperator::simple(const Polynomial& f, const Polynomial& g) {
  Bioperator b;
  for (const auto& [wf, cf] : f.terms())
    for (const auto& [wg, cg] : g.terms()) b.add_term(wf, wg, cf * cg);
  return b;
}

void Bioperator::add_term(const Word& f, const Word& g, Complex c) {
  auto [it, inserted] = terms_.try_emplace({f, g}, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= Polynomial::kPruneThreshold) terms_.erase(it);
}

Bioperator& Bioperator::operator+=(const Bioperator& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

Bioperator operator*(Complex a, const Bioperator& b) {
  Bioperator out;
  for (const auto& [key, c] : b.terms()) out.add_term(key.first, key.second, a * c);
  return out;
}

Bioperator operator*(const Polynomial& s, const Bioperator& b) {
  Bioperator out;
  for (const auto& [ws, cs] : s.terms())
    for (const auto& [key, c] : b.terms()) {
      Word f = ws;
      f.insert(f.end(), key.first.begin(), key.first.end());
      out.add_term(f, key.second, cs * c);
    }
  return out;
}

Bioperator operator*(const Bioperator& b, const Polynomial& s) {
  Bioperator out;
  for (const auto& [key, c] : b.terms())
    for (const auto& [ws, cs] : s.terms()) {
      Word g = key.second;
      g.insert(g.end(), ws.begin(), ws.end());
      out.add_term(key.first, g, c * cs);
    }
  return out;
}

Polynomial Bioperator::sharp(const Polynomial& s) const {
  Polynomial out;
  for (const auto& [key, c] : terms_)
    for (const auto& [ws, cs] : s.terms()) {
      Word w = key.first;
      w.insert(w.end(), ws.begin(), ws.end());
      w.insert(w.end(), key.second.begin(), key.second.end());
      out.add_term(std::move(w), c * cs);
    }
  return out;
}

Bioperator Bioperator::convolution(SymbolTable& symtab) const {
  Bioperator out;
  for (const auto& [key, c] : terms_) {
    Polynomial fstar = q_adjoint_symbolic(Polynomial::monomial(key.first), symtab);
    Polynomial gstar = q_adjoint_symbolic(Polynomial::monomial(key.second), symtab);
    for (const auto& [wg, cg] : gstar.terms())
      for (const auto& [wf, cf] : fstar.terms())
        out.add_term(wg, wf, std::conj(c) * cg * cf);
  }
  return out;
}

Polynomial Bioperator::q_k_leg(int k, SymbolTable& symtab, double q) const {
  Polynomial out;
  for (const auto& [key, c] : terms_) {
    NormalForm nf = normal_order(Polynomial::monomial(key.first, c), symtab, q);
    Polynomial qk = q_k(nf, k, q).poly();
    if (qk.is_zero()) continue;
    out += qk * Polynomial::monomial(key.second);
  }
  return out;
}

void SimpleBiprocess::validate(const TimeGrid& grid) const {
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!grid_aligned(grid, pieces[i].iv))
      throw std::invalid_argument("biprocess piece " + std::to_string(i) +
                                  " is not aligned to the grid");
    auto [a1, b1] = cell_range(grid, pieces[i].iv);
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      auto [a2, b2] = cell_range(grid, pieces[j].iv);
      if (std::max(a1, a2) < std::min(b1, b2))
        throw std::invalid_argument("biprocess pieces " + std::to_string(i) +
                                    " and " + std::to_string(j) + " overlap");
    }
  }
}

std::string adaptedness_name(Adaptedness a) {
  switch (a) {
    case Adaptedness::Adapted: return "adapted";
    case Adaptedness::LeftAdapted: return "left-adapted";
    case Adaptedness::RightAdapted: return "right-adapted";
    case Adaptedness::None: return "none";
  }
  return "?";
}

std::vector<int> word_support_cells(const Word& w, const SymbolTable& symtab,
                                    double tol) {
  std::set<int> cells;
  for (const auto& g : w) {
    switch (g.kind) {
      case GenKind::Create:
      case GenKind::Annihilate: {
        const Vector& v = symtab.vector(g.id);
        for (Index i = 0; i < v.size(); ++i)
          if (std::abs(v[i]) > tol) cells.insert(static_cast<int>(i));
        break;
      }
      case GenKind::Lambda: {
        const OneParticleOp& t = symtab.op(g.id);
        if (t.diagonal) {
          for (Index i = 0; i < t.diag.size(); ++i)
            if (std::abs(t.diag[i]) > tol) cells.insert(static_cast<int>(i));
        } else {
          for (Index r = 0; r < t.dense.rows(); ++r)
            for (Index c = 0; c < t.dense.cols(); ++c)
              if (std::abs(t.dense(r, c)) > tol) {
                cells.insert(static_cast<int>(r));
                cells.insert(static_cast<int>(c));
              }
        }
        break;
      }
      case GenKind::Gamma:
        break;  // gammas generate every time algebra
    }
  }
  return {cells.begin(), cells.end()};
}

namespace {

bool leg_ok(const Word& w, int first_cell, const SymbolTable& symtab) {
  for (int c : word_support_cells(w, symtab))
    if (c >= first_cell) return false;
  return true;
}

}  // namespace

Adaptedness check_adapted(const SimpleBiprocess& r, const TimeGrid& grid,
                          const SymbolTable& symtab) {
  bool left = true, right = true;
  for (const auto& piece : r.pieces) {
    const int first_cell = cell_range(grid, piece.iv).first;
    for (const auto& [key, c] : piece.b.terms()) {
      if (!leg_ok(key.first, first_cell, symtab)) left = false;
      if (!leg_ok(key.second, first_cell, symtab)) right = false;
    }
  }
  if (left && right) return Adaptedness::Adapted;
  if (left) return Adaptedness::LeftAdapted;
  if (right) return Adaptedness::RightAdapted;
  return Adaptedness::None;
}

namespace {

void require_adaptedness(const SimpleBiprocess& r, const ProcessKind& kind,
                         const TimeGrid& grid, const SymbolTable& symtab) {
  bool need_left = kind.type == ProcessKind::Creation;
  bool need_right = kind.type == ProcessKind::Annihilation;
  bool need_both = kind.type == ProcessKind::Gauge;
  if (!(need_left || need_right || need_both)) return;
  for (std::size_t i = 0; i < r.pieces.size(); ++i) {
    const auto& piece = r.pieces[i];
    const int first_cell = cell_range(grid, piece.iv).first;
    for (const auto& [key, c] : piece.b.terms()) {
      const bool lo = leg_ok(key.first, first_cell, symtab);
      const bool ro = leg_ok(key.second, first_cell, symtab);
      const bool ok = need_both ? (lo && ro) : (need_left ? lo : ro);
      if (!ok)
        throw std::invalid_argument(
            "integrate: piece " + std::to_string(i) + " on (" +
            std::to_string(piece.iv.t1) + ", " + std::to_string(piece.iv.t2) +
            "] violates the " +
            (need_both ? "adaptedness" : (need_left ? "left-adaptedness" : "right-adaptedness")) +
            " required for a d" + kind.name() + " integral");
    }
  }
}

}  // namespace

Polynomial integrate_symbolic(const SimpleBiprocess& r, const ProcessKind& kind,
                              const TimeGrid& grid, SymbolTable& symtab) {
  r.validate(grid);
  require_adaptedness(r, kind, grid, symtab);
  Polynomial out;
  for (const auto& piece : r.pieces)
    out += piece.b.sharp(basic_increment(kind, piece.iv, grid, symtab));
  return out;
}

FockOperator integrate(const SimpleBiprocess& r, const ProcessKind& kind,
                       const TimeGrid& grid, const TruncationConfig& cfg,
                       SymbolTable& symtab) {
  return evaluate(integrate_symbolic(r, kind, grid, symtab), cfg, symtab);
}

double seminorm_creation(const SimpleBiprocess& r, const TimeGrid& grid,
                         const TruncationConfig& cfg, SymbolTable& symtab,
                         const QMetric& metric, const QConstants& constants) {
  r.validate(grid);
  // creator counts present across the normal-ordered left legs
  std::set<int> ks;
  for (const auto& piece : r.pieces)
    for (const auto& [key, c] : piece.b.terms()) {
      NormalForm nf =
          normal_order(Polynomial::monomial(key.first), symtab, cfg.q);
      for (const auto& [w, cc] : nf.poly().terms())
        ks.insert(creator_count(w));
    }

  double total = 0.0;
  for (int k : ks) {
    if (static_cast<std::size_t>(k) >= constants.c.size())
      throw std::invalid_argument("seminorm_creation: constants table too short");
    double sq = 0.0;
    for (const auto& piece : r.pieces) {
      Polynomial qk = piece.b.q_k_leg(k, symtab, cfg.q);
      if (qk.is_zero()) continue;
      const double nrm = q_operator_norm(metric, evaluate(qk, cfg, symtab));
      sq += piece.iv.length() * nrm * nrm;
    }
    total += std::sqrt(constants.c[k] * sq);
  }
  return total;
}

double seminorm_annihilation(const SimpleBiprocess& r, const TimeGrid& grid,
                             const TruncationConfig& cfg, SymbolTable& symtab,
                             const QMetric& metric, const QConstants& constants) {
  SimpleBiprocess conv;
  conv.pieces.reserve(r.pieces.size());
  for (const auto& piece : r.pieces)
    conv.pieces.push_back({piece.b.convolution(symtab), piece.iv});
  return seminorm_creation(conv, grid, cfg, symtab, metric, constants);
}

double seminorm_gauge(const SimpleBiprocess& r, Complex mu, const TimeGrid& grid,
                      const TruncationConfig& cfg, SymbolTable& symtab,
                      const QMetric& metric, bool at_right_endpoint) {
  if (!(std::abs(mu) < 1.0))
    throw std::invalid_argument("seminorm_gauge: |mu| must be < 1");
  r.validate(grid);
  double best = 0.0;
  for (const auto& piece : r.pieces) {
    const double t = at_right_endpoint ? piece.iv.t2 : piece.iv.t1;
    Interval future{t, grid.t_max};
    if (future.length() <= 0.0) continue;
    Polynomial lam = Polynomial::generator(
        make_lambda(mu, projection_symbol(grid, future, symtab)));
    FockOperator x = evaluate(piece.b.sharp(lam), cfg, symtab);
    for (int n = 1; n <= cfg.N; ++n)
      for (int m = 1; m <= cfg.N; ++m) {
        const double b =
            std::sqrt(double(n) * double(m)) * q_block_norm(metric, x, n, m);
        best = std::max(best, b);
      }
  }
  return best;
}

double seminorm_time(const SimpleBiprocess& r, const TimeGrid& grid,
                     const TruncationConfig& cfg, SymbolTable& symtab,
                     const QMetric& metric) {
  r.validate(grid);
  double total = 0.0;
  for (const auto& piece : r.pieces)
    total += piece.iv.length() *
             q_operator_norm(metric, evaluate(piece.b.sharp(Polynomial::one()),
                                              cfg, symtab));
  return total;
}

}  // namespace qfock
