#include "qfock/normal_order.hpp"

#include "qfock/metric.hpp"
#include "qfock/operators.hpp"

#include <cmath>

namespace qfock {

namespace {

inline int rank(GenKind k) { return static_cast<int>(k); }

// first adjacent pair violating the Create < Lambda < Gamma < Annihilate
// order; adjacent gammas also count (they must fuse)
std::ptrdiff_t first_disordered(const Word& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (rank(w[i].kind) > rank(w[i + 1].kind)) return static_cast<std::ptrdiff_t>(i);
    if (w[i].kind == GenKind::Gamma && w[i + 1].kind == GenKind::Gamma)
      return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

Word replace_pair(const Word& w, std::size_t i,
                  std::initializer_list<Generator> repl) {
  Word out;
  out.reserve(w.size() + repl.size() - 2);
  out.insert(out.end(), w.begin(), w.begin() + i);
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), w.begin() + i + 2, w.end());
  return out;
}

Word canonical_gamma(Word w) {
  // fixpoint words carry at most one gamma; words without one get gamma_1
  // in front of the annihilator block
  for (const auto& g : w)
    if (g.kind == GenKind::Gamma) return w;
  auto pos = w.begin();
  while (pos != w.end() && pos->kind != GenKind::Annihilate) ++pos;
  w.insert(pos, make_gamma(Complex(1, 0)));
  return w;
}

}  // namespace

bool NormalForm::is_normal_word(const Word& w) {
  int gammas = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].kind == GenKind::Gamma) ++gammas;
    if (i + 1 < w.size() && rank(w[i].kind) > rank(w[i + 1].kind)) return false;
  }
  return gammas == 1;
}

NormalForm::NormalForm(Polynomial p) : poly_(std::move(p)) {
  for (const auto& [w, c] : poly_.terms())
    if (!is_normal_word(w))
      throw std::invalid_argument("NormalForm: word does not match the pattern");
}

NormalForm normal_order(const Polynomial& p, SymbolTable& symtab, double q,
                        std::size_t step_budget) {
  Polynomial result;
  std::vector<std::pair<Word, Complex>> work(p.terms().begin(), p.terms().end());
  std::size_t steps = 0;

  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    if (std::abs(c) <= Polynomial::kPruneThreshold) continue;

    const std::ptrdiff_t i = first_disordered(w);
    if (i < 0) {
      result.add_term(canonical_gamma(std::move(w)), c);
      continue;
    }
    if (++steps > step_budget)
      throw RewriteBudgetExceeded("normal_order: rewrite budget exhausted");

    const Generator x = w[i];
    const Generator y = w[i + 1];

    if (x.kind == GenKind::Annihilate && y.kind == GenKind::Create) {
      // a(phi) a*(psi) = q a*(psi) a(phi) + <phi, psi>
      work.emplace_back(replace_pair(w, i, {y, x}), c * q);
      Word contracted;
      contracted.reserve(w.size() - 2);
      contracted.insert(contracted.end(), w.begin(), w.begin() + i);
      contracted.insert(contracted.end(), w.begin() + i + 2, w.end());
      work.emplace_back(std::move(contracted), c * symtab.vec_inner(x.id, y.id));
    } else if (x.kind == GenKind::Annihilate && y.kind == GenKind::Lambda) {
      // a(phi) lambda_mu(T) = mu lambda_mu(T) a(phi) + mu gamma_mu a(T^H phi)
      work.emplace_back(replace_pair(w, i, {y, x}), c * y.mu);
      std::string tphi = symtab.apply_op_to_vector(y.id, x.id, /*adjoint=*/true);
      work.emplace_back(
          replace_pair(w, i, {make_gamma(y.mu), make_annihilate(tphi)}),
          c * y.mu);
    } else if (x.kind == GenKind::Annihilate && y.kind == GenKind::Gamma) {
      // a(phi) gamma_mu = mu gamma_mu a(phi)
      work.emplace_back(replace_pair(w, i, {y, x}), c * y.mu);
    } else if (x.kind == GenKind::Lambda && y.kind == GenKind::Create) {
      // lambda_mu(T) a*(phi) = mu a*(phi) lambda_mu(T) + mu a*(T phi) gamma_mu
      work.emplace_back(replace_pair(w, i, {y, x}), c * x.mu);
      std::string tphi = symtab.apply_op_to_vector(x.id, y.id, /*adjoint=*/false);
      work.emplace_back(
          replace_pair(w, i, {make_create(tphi), make_gamma(x.mu)}), c * x.mu);
    } else if (x.kind == GenKind::Gamma && y.kind == GenKind::Create) {
      // gamma_mu a*(phi) = mu a*(phi) gamma_mu
      work.emplace_back(replace_pair(w, i, {y, x}), c * x.mu);
    } else if (x.kind == GenKind::Gamma && y.kind == GenKind::Lambda) {
      // gamma_mu lambda_nu(T) = lambda_{mu nu}(T); written lambda gamma_1 so
      // the word keeps its single gamma slot
      work.emplace_back(replace_pair(w, i, {make_lambda(x.mu * y.mu, y.id),
                                            make_gamma(Complex(1, 0))}),
                        c);
    } else if (x.kind == GenKind::Gamma && y.kind == GenKind::Gamma) {
      // gamma_mu gamma_nu = gamma_{mu nu}
      work.emplace_back(replace_pair(w, i, {make_gamma(x.mu * y.mu)}), c);
    } else {
      throw std::logic_error("normal_order: unexpected pair");
    }
  }
  return NormalForm(std::move(result));
}

WordShape word_shape(const Word& w) {
  if (!NormalForm::is_normal_word(w))
    throw std::invalid_argument("word_shape: word is not normal");
  WordShape s;
  for (const auto& g : w) {
    switch (g.kind) {
      case GenKind::Create: ++s.creators; break;
      case GenKind::Annihilate: ++s.annihilators; break;
      case GenKind::Lambda:
        ++s.lambdas;
        s.lambda_product *= g.mu;
        break;
      case GenKind::Gamma: s.gamma = g.mu; break;
    }
  }
  return s;
}

NormalForm q_k(const NormalForm& nf, int k, double q) {
  Polynomial out;
  for (const auto& [w, c] : nf.poly().terms()) {
    const WordShape s = word_shape(w);
    if (s.creators != k) continue;
    const Complex scale =
        std::pow(q, s.annihilators) * s.lambda_product * s.gamma;
    out.add_term(w, c * scale);
  }
  return NormalForm(std::move(out));
}

NormalForm p_0(const NormalForm& nf, double q) {
  Polynomial out;
  for (const auto& [w, c] : nf.poly().terms()) {
    const WordShape s = word_shape(w);
    const Complex scale =
        std::pow(q, s.creators + s.annihilators) * s.lambda_product * s.gamma;
    out.add_term(w, c * scale);
  }
  return NormalForm(std::move(out));
}

Polynomial swap_adjacent_lambdas(const Word& w, std::size_t pos,
                                 const SymbolTable& symtab, double comm_tol) {
  if (pos + 1 >= w.size() || w[pos].kind != GenKind::Lambda ||
      w[pos + 1].kind != GenKind::Lambda)
    throw std::invalid_argument("swap_adjacent_lambdas: not a lambda pair");
  const Matrix t1 = symtab.op(w[pos].id).as_matrix();
  const Matrix t2 = symtab.op(w[pos + 1].id).as_matrix();
  if ((t1 * t2 - t2 * t1).norm() > comm_tol)
    throw std::invalid_argument(
        "swap_adjacent_lambdas: operators do not commute");
  Word out = w;
  std::swap(out[pos], out[pos + 1]);
  return Polynomial::monomial(std::move(out));
}

namespace {

// embeds symbols of a d-dimensional table into d+1 dimensions (extra
// orthogonal direction appended)
SymbolTable extend_table(const SymbolTable& symtab) {
  SymbolTable ext(symtab.dim() + 1);
  for (const auto& [id, v] : symtab.vectors()) {
    Vector w(v.size() + 1);
    w << v, Complex(0, 0);
    ext.set_vector(id, std::move(w));
  }
  for (const auto& [id, op] : symtab.operators()) {
    if (op.diagonal) {
      Vector w(op.diag.size() + 1);
      w << op.diag, Complex(0, 0);
      ext.set_operator(id, OneParticleOp::from_diag(std::move(w)));
    } else {
      Matrix m = Matrix::Zero(op.dense.rows() + 1, op.dense.cols() + 1);
      m.topLeftCorner(op.dense.rows(), op.dense.cols()) = op.dense;
      ext.set_operator(id, OneParticleOp::from_dense(std::move(m)));
    }
  }
  return ext;
}

// basis indices of the extended truncation whose digits avoid the new
// direction, i.e. the embedded copy of the original space
std::vector<Index> embedded_indices(const TruncationConfig& small,
                                    const TruncationConfig& ext, int max_level) {
  std::vector<Index> idx;
  for (int n = 0; n <= max_level; ++n) {
    const Index dim = small.level_dim(n);
    for (Index r = 0; r < dim; ++r) {
      Index e = 0, rr = r;
      std::vector<int> digits(n);
      for (int s = n - 1; s >= 0; --s) {
        digits[s] = static_cast<int>(rr % small.d);
        rr /= small.d;
      }
      for (int s = 0; s < n; ++s) e = e * ext.d + digits[s];
      idx.push_back(ext.level_offset(n) + e);
    }
  }
  return idx;
}

// slot-insertion operator: puts the new basis direction into slot k
// (0-based), level n -> n+1, zero on levels < k
Matrix insertion_operator(const TruncationConfig& ext, int k) {
  const Index total = ext.total_dim();
  Matrix m = Matrix::Zero(total, total);
  const int phi_digit = ext.d - 1;
  for (int n = k; n + 1 <= ext.N; ++n) {
    const Index dim = ext.level_dim(n);
    Index tail = 1;
    for (int i = 0; i < n - k; ++i) tail *= ext.d;
    for (Index c = 0; c < dim; ++c) {
      const Index prefix = c / tail, suffix = c % tail;
      const Index r = (prefix * ext.d + phi_digit) * tail + suffix;
      m(ext.level_offset(n + 1) + r, ext.level_offset(n) + c) = 1.0;
    }
  }
  return m;
}

// projection onto the new direction in slot k: zero on levels <= k
Matrix slot_projection(const TruncationConfig& ext, int k) {
  const Index total = ext.total_dim();
  Matrix m = Matrix::Zero(total, total);
  const int phi_digit = ext.d - 1;
  for (int n = k + 1; n <= ext.N; ++n) {
    const Index dim = ext.level_dim(n);
    for (Index c = 0; c < dim; ++c)
      if (slot_digit(c, k, n, ext.d) == phi_digit)
        m(ext.level_offset(n) + c, ext.level_offset(n) + c) = 1.0;
  }
  return m;
}

}  // namespace

double q_k_vector_check(const NormalForm& nf, int k, const TruncationConfig& cfg,
                        const SymbolTable& symtab) {
  TruncationConfig ext(cfg.d + 1, cfg.N, cfg.q);
  SymbolTable table = extend_table(symtab);
  QMetric metric(ext);

  Vector phi = Vector::Zero(ext.d);
  phi[ext.d - 1] = 1.0;

  const Matrix s_ext = evaluate(nf.poly(), ext, table).mat;
  const Matrix qk_ext = evaluate(q_k(nf, k, cfg.q).poly(), ext, table).mat;
  const Matrix lhs = insertion_operator(ext, k) * qk_ext;
  const Matrix rhs = slot_projection(ext, k) * s_ext * creation(ext, phi).mat;

  const int headroom = 1 + max_intermediate_upshift(nf.poly());
  const int max_level = std::max(0, cfg.N - headroom);
  double worst = 0.0;
  for (Index col : embedded_indices(cfg, ext, max_level)) {
    Vector defect = lhs.col(col) - rhs.col(col);
    worst = std::max(worst, metric.norm(defect));
  }
  return worst;
}

double p_0_vector_check(const NormalForm& nf, const TruncationConfig& cfg,
                        const SymbolTable& symtab) {
  TruncationConfig ext(cfg.d + 1, cfg.N, cfg.q);
  SymbolTable table = extend_table(symtab);
  QMetric metric(ext);

  Vector phi = Vector::Zero(ext.d);
  phi[ext.d - 1] = 1.0;

  const Matrix r_ext = evaluate(nf.poly(), ext, table).mat;
  const Matrix p0_ext = evaluate(p_0(nf, cfg.q).poly(), ext, table).mat;
  const Matrix rhs = annihilation(ext, phi).mat * r_ext * creation(ext, phi).mat;

  const int headroom = 1 + max_intermediate_upshift(nf.poly());
  const int max_level = std::max(0, cfg.N - headroom);
  double worst = 0.0;
  for (Index col : embedded_indices(cfg, ext, max_level)) {
    Vector defect = p0_ext.col(col) - rhs.col(col);
    worst = std::max(worst, metric.norm(defect));
  }
  return worst;
}

}  // namespace qfock
