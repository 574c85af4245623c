#include "qfock/apply.hpp"

#include "qfock/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qfock {

namespace {

// digits of the leading k positions of the j-digit window rotate right;
// trailing digits untouched (see the symmetrizer recursion)
inline Index cycle_source(Index r, int k, int j, Index d) {
  Index tail_size = 1;
  for (int i = 0; i < j - k; ++i) tail_size *= d;
  const Index head = r / tail_size;
  const Index tail = r % tail_size;
  const Index last = head % d;
  Index head_size_over_d = 1;
  for (int i = 0; i < k - 1; ++i) head_size_over_d *= d;
  return (last * head_size_over_d + head / d) * tail_size + tail;
}

}  // namespace

Applier::Applier(const TruncationConfig& cfg, const SymbolTable& symtab)
    : cfg_(cfg), symtab_(symtab) {
  if (symtab.dim() != cfg.d)
    throw std::invalid_argument("Applier: symbol table dimension mismatch");
  const Index total = cfg.total_dim();
  w1_.resize(total);
  w2_.resize(total);
  w3_.resize(total);
}

void Applier::apply_generator(const Generator& g, const Vector& in,
                              Vector& out) const {
  const Index total = cfg_.total_dim();
  const Index d = cfg_.d;
  out.setZero(total);

  switch (g.kind) {
    case GenKind::Create: {
      const Vector& phi = symtab_.vector(g.id);
      for (int n = 0; n + 1 <= cfg_.N; ++n) {
        const Index dim = cfg_.level_dim(n);
        const Index off_in = cfg_.level_offset(n);
        const Index off_out = cfg_.level_offset(n + 1);
        for (Index j0 = 0; j0 < d; ++j0) {
          if (phi[j0] == Complex(0, 0)) continue;
          out.segment(off_out + j0 * dim, dim) += phi[j0] * in.segment(off_in, dim);
        }
      }
      break;
    }
    case GenKind::Annihilate: {
      const Vector& phi = symtab_.vector(g.id);
      for (int n = 1; n <= cfg_.N; ++n) {
        const Index off_in = cfg_.level_offset(n);
        const Index off_out = cfg_.level_offset(n - 1);
        Index tail = cfg_.level_dim(n - 1);
        double w = 1.0;
        for (int s = 1; s <= n; ++s, w *= cfg_.q) {
          if (s > 1) tail /= d;
          const Index heads = cfg_.level_dim(n) / (tail * d);
          for (Index a = 0; a < heads; ++a)
            for (Index digit = 0; digit < d; ++digit) {
              const Complex coeff = w * std::conj(phi[digit]);
              if (coeff == Complex(0, 0)) continue;
              out.segment(off_out + a * tail, tail) +=
                  coeff * in.segment(off_in + (a * d + digit) * tail, tail);
            }
        }
      }
      break;
    }
    case GenKind::Lambda: {
      const OneParticleOp& t = symtab_.op(g.id);
      if (t.diagonal) {
        const Vector& diag = t.diag;
        Complex mun = 1.0;
        for (int n = 1; n <= cfg_.N; ++n) {
          mun *= g.mu;
          const Index off = cfg_.level_offset(n);
          const Index dim = cfg_.level_dim(n);
          const Complex* src = in.data() + off;
          Complex* dst = out.data() + off;
#pragma omp parallel for schedule(static)
          for (Index idx = 0; idx < dim; ++idx) {
            Complex wsum(0, 0);
            Index rest = idx;
            for (int s = 0; s < n; ++s) {
              wsum += diag[rest % d];
              rest /= d;
            }
            dst[idx] = mun * wsum * src[idx];
          }
        }
      } else {
        const Matrix& t_dense = t.dense;
        Complex mun = 1.0;
        for (int n = 1; n <= cfg_.N; ++n) {
          mun *= g.mu;
          const Index off = cfg_.level_offset(n);
          Index tail = cfg_.level_dim(n) / d;
          for (int s = 1; s <= n; ++s) {
            const Index heads = cfg_.level_dim(n) / (tail * d);
            for (Index a = 0; a < heads; ++a) {
              using Map = Eigen::Map<const Matrix>;
              using MutMap = Eigen::Map<Matrix>;
              Map block_in(in.data() + off + a * d * tail, tail, d);
              MutMap block_out(out.data() + off + a * d * tail, tail, d);
              block_out.noalias() += mun * block_in * t_dense.transpose();
            }
            tail /= d;
          }
        }
      }
      break;
    }
    case GenKind::Gamma: {
      Complex mun = 1.0;
      for (int n = 0; n <= cfg_.N; ++n) {
        const Index off = cfg_.level_offset(n);
        const Index dim = cfg_.level_dim(n);
        out.segment(off, dim) = mun * in.segment(off, dim);
        mun *= g.mu;
      }
      break;
    }
  }
}

void Applier::apply_word(const Word& w, const Vector& in, Vector& out) {
  if (w.empty()) {
    out = in;
    return;
  }
  // generators act right to left
  const Vector* cur = &in;
  Vector* ping = &w1_;
  Vector* pong = &w2_;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    apply_generator(*it, *cur, *ping);
    cur = ping;
    std::swap(ping, pong);
  }
  out = *cur;
}

void Applier::apply_polynomial(const Polynomial& p, const Vector& in, Vector& out) {
  out.setZero(cfg_.total_dim());
  accumulate_polynomial(p, Complex(1, 0), in, out);
}

void Applier::accumulate_polynomial(const Polynomial& p, Complex scale,
                                    const Vector& in, Vector& out) {
  for (const auto& [w, c] : p.terms()) {
    apply_word(w, in, w3_);
    out += (scale * c) * w3_;
  }
}

void Applier::apply_metric(const Vector& in, Vector& out) const {
  const Index d = cfg_.d;
  const double q = cfg_.q;
  out = in;
  Vector scratch;
  for (int n = 2; n <= cfg_.N; ++n) {
    const Index off = cfg_.level_offset(n);
    const Index dim = cfg_.level_dim(n);
    scratch.resize(dim);
    // P^(n) = D_n (1 (x) D_{n-1}) ... (1^(n-2) (x) D_2), applied right to left
    for (int j = 2; j <= n; ++j) {
      const Complex* src = out.data() + off;
      Complex* dst = scratch.data();
      Index window = 1;
      for (int i = 0; i < j; ++i) window *= d;
#pragma omp parallel for schedule(static)
      for (Index idx = 0; idx < dim; ++idx) {
        const Index prefix = idx / window;
        const Index w = idx % window;
        Complex acc = src[idx];  // k = 1 cycle is the identity
        double qs = 1.0;
        for (int k = 2; k <= j; ++k) {
          qs *= q;
          acc += qs * src[prefix * window + cycle_source(w, k, j, d)];
        }
        dst[idx] = acc;
      }
      out.segment(off, dim) = scratch;
    }
  }
}

Complex Applier::inner(const Vector& a, const Vector& b) const {
  Vector pb(b.size());
  apply_metric(b, pb);
  return a.dot(pb);
}

double Applier::norm(const Vector& a) const {
  const double s = std::real(inner(a, a));
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

Vector Applier::random_unit(std::uint64_t seed) const {
  Rng rng(seed);
  Vector v = rng.complex_vector(cfg_.total_dim());
  const double n = norm(v);
  if (n == 0.0) throw std::runtime_error("random_unit: degenerate draw");
  return v / n;
}

double lanczos_q_opnorm(Applier& applier, const Polynomial& x,
                        const Polynomial& x_adj, std::uint64_t seed,
                        int max_iter, double rel_tol) {
  if (x.is_zero()) return 0.0;
  const Index total = applier.config().total_dim();

  Vector v = applier.random_unit(seed);
  Vector pv(total);
  applier.apply_metric(v, pv);
  Vector v_prev = Vector::Zero(total);
  Vector pv_prev = Vector::Zero(total);
  Vector w(total), pw(total), tmp(total);

  std::vector<double> alpha, beta;
  double lam_prev = -1.0;

  for (int it = 0; it < max_iter; ++it) {
    applier.apply_polynomial(x, v, tmp);
    applier.apply_polynomial(x_adj, tmp, w);
    applier.apply_metric(w, pw);

    const double a = std::real(v.dot(pw));
    alpha.push_back(a);
    const double b_prev = beta.empty() ? 0.0 : beta.back();
    w -= a * v + b_prev * v_prev;
    pw -= a * pv + b_prev * pv_prev;

    // one extra orthogonalization pass against the current pair keeps the
    // three-term recurrence honest at this scale
    const Complex c1 = v.dot(pw);
    w -= c1 * v;
    pw -= c1 * pv;

    const double b = [&] {
      const double s = std::real(w.dot(pw));
      return s > 0.0 ? std::sqrt(s) : 0.0;
    }();

    // Ritz value of the current tridiagonal
    const int m = static_cast<int>(alpha.size());
    RealMatrix tri = RealMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(tri, Eigen::EigenvaluesOnly);
    const double lam = std::max(0.0, es.eigenvalues().maxCoeff());

    if (b <= 1e-13 * std::max(1.0, std::abs(a))) return std::sqrt(lam);
    if (it >= 4 && std::abs(lam - lam_prev) <= rel_tol * std::max(lam, 1e-300))
      return std::sqrt(lam);
    lam_prev = lam;

    beta.push_back(b);
    v_prev = v;
    pv_prev = pv;
    v = w / b;
    pv = pw / b;
  }
  return std::sqrt(std::max(0.0, lam_prev));
}

}  // namespace qfock
