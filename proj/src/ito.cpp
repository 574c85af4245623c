#include "qfock/ito.hpp"

#include "qfock/grammar.hpp"
#include "qfock/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace qfock {

namespace {

Interval overlap_of(const Interval& a, const Interval& b) {
  return {std::max(a.t1, b.t1), std::min(a.t2, b.t2)};
}

Polynomial gamma_poly(Complex mu) {
  return Polynomial::generator(make_gamma(mu));
}

}  // namespace

Polynomial pair_correction(const ProcessKind& s1, const ProcessKind& s2,
                           const Bioperator& b1, const Bioperator& b2,
                           const Interval& overlap, const TimeGrid& grid,
                           SymbolTable& symtab, double q) {
  Polynomial out;
  if (overlap.length() <= 0.0) return out;

  const bool a1 = s1.type == ProcessKind::Annihilation;
  const bool l1 = s1.type == ProcessKind::Gauge;
  const bool c2 = s2.type == ProcessKind::Creation;
  const bool l2 = s2.type == ProcessKind::Gauge;

  if (a1 && c2) {
    // |I| (1 (x) P0 (x) 1)(B1 B2): middle legs G F' are normal-ordered and
    // contracted by P0, outer legs multiply back
    for (const auto& [k1, cc1] : b1.terms())
      for (const auto& [k2, cc2] : b2.terms()) {
        Word middle = k1.second;
        middle.insert(middle.end(), k2.first.begin(), k2.first.end());
        NormalForm nf = normal_order(Polynomial::monomial(middle), symtab, q);
        Polynomial contracted = p_0(nf, q).poly();
        if (contracted.is_zero()) continue;
        Polynomial term = Polynomial::monomial(k1.first) * contracted *
                          Polynomial::monomial(k2.second);
        out += (cc1 * cc2 * overlap.length()) * term;
      }
    return out;
  }
  if (l1 && c2) {
    // [B1 # gamma_mu] B2 # dA*(I)
    Polynomial x = b1.sharp(gamma_poly(s1.mu));
    Bioperator dressed = x * b2;
    return dressed.sharp(
        basic_increment(ProcessKind::creation(), overlap, grid, symtab));
  }
  if (a1 && l2) {
    // [B1 (B2 # gamma_nu)] # dA(I)
    Polynomial x = b2.sharp(gamma_poly(s2.mu));
    Bioperator dressed = b1 * x;
    return dressed.sharp(
        basic_increment(ProcessKind::annihilation(), overlap, grid, symtab));
  }
  if (l1 && l2) {
    // [B1 # 1] B2 # dLambda_{mu nu}(I)
    Polynomial x = b1.sharp(Polynomial::one());
    Bioperator dressed = x * b2;
    return dressed.sharp(basic_increment(ProcessKind::gauge(s1.mu * s2.mu),
                                         overlap, grid, symtab));
  }
  return out;  // every other pair contributes nothing
}

Polynomial ito_correction(const ProcessKind& s1, const ProcessKind& s2,
                          const SimpleBiprocess& r1, const SimpleBiprocess& r2,
                          const TimeGrid& grid, SymbolTable& symtab, double q) {
  Polynomial out;
  for (const auto& p1 : r1.pieces)
    for (const auto& p2 : r2.pieces) {
      Interval ov = overlap_of(p1.iv, p2.iv);
      if (ov.length() > 1e-15)
        out += pair_correction(s1, s2, p1.b, p2.b, ov, grid, symtab, q);
    }
  return out;
}

ResidualTopology topology_for(const ProcessKind& s1, const ProcessKind& s2) {
  using T = ProcessKind;
  if (s1.type == T::Time || s2.type == T::Time) return ResidualTopology::OperatorNorm;
  if (s1.type == T::Creation &&
      (s2.type == T::Creation || s2.type == T::Annihilation))
    return ResidualTopology::OperatorNorm;
  if (s2.type == T::Annihilation) return ResidualTopology::MatrixElement;
  return ResidualTopology::VectorNorm;
}

std::string topology_name(ResidualTopology t) {
  switch (t) {
    case ResidualTopology::OperatorNorm: return "operator-norm";
    case ResidualTopology::VectorNorm: return "vector-norm";
    case ResidualTopology::MatrixElement: return "matrix-element";
  }
  return "?";
}

ItoBiprocessDecl ItoBiprocessDecl::constant_one(double t1, double t2) {
  ItoBiprocessDecl d;
  d.pieces.push_back({{t1, t2}, {{"1", "1", Complex(1, 0)}}});
  return d;
}

void register_spec_symbols(const std::vector<ItoSymbolDecl>& decls,
                           const TimeGrid& grid, SymbolTable& symtab) {
  for (const auto& s : decls) {
    if (s.projection)
      symtab.set_operator(s.name,
                          OneParticleOp::from_diag(projection_diag(grid, s.iv)));
    else
      symtab.set_vector(s.name, indicator_coeffs(grid, s.iv));
  }
}

SimpleBiprocess instantiate_biprocess(const ItoBiprocessDecl& decl,
                                      const TimeGrid& grid, SymbolTable& symtab) {
  SimpleBiprocess r;
  for (const auto& piece : decl.pieces) {
    Bioperator b;
    for (const auto& term : piece.terms) {
      Polynomial f = parse_polynomial(term.left);
      Polynomial g = parse_polynomial(term.right);
      b += term.coeff * Bioperator::simple(f, g);
    }
    r.pieces.push_back({std::move(b), piece.iv});
  }
  r.validate(grid);
  (void)symtab;
  return r;
}

namespace {

bool satisfies(Adaptedness tag, Adaptedness need) {
  if (need == Adaptedness::None) return true;
  if (tag == Adaptedness::Adapted) return true;
  return tag == need;
}

Adaptedness required_for(const ProcessKind& k) {
  switch (k.type) {
    case ProcessKind::Creation: return Adaptedness::LeftAdapted;
    case ProcessKind::Annihilation: return Adaptedness::RightAdapted;
    case ProcessKind::Gauge: return Adaptedness::Adapted;
    case ProcessKind::Time: return Adaptedness::None;
  }
  return Adaptedness::None;
}

int max_abs_grade(const Polynomial& p) {
  int j = 0;
  for (const auto& [w, c] : p.terms()) j = std::max(j, std::abs(word_grade(w)));
  return j;
}

int max_annihilators(const Polynomial& p, SymbolTable& symtab, double q) {
  int j = 0;
  NormalForm nf = normal_order(p, symtab, q);
  for (const auto& [w, c] : nf.poly().terms())
    j = std::max(j, annihilator_count(w));
  return j;
}

int max_creators(const Polynomial& p, SymbolTable& symtab, double q) {
  int j = 0;
  NormalForm nf = normal_order(p, symtab, q);
  for (const auto& [w, c] : nf.poly().terms()) j = std::max(j, creator_count(w));
  return j;
}

}  // namespace

std::string check_ito_hypotheses(const ItoSpec& spec) {
  if (spec.meshes.empty())
    throw std::invalid_argument("ito spec: empty mesh sequence");
  for (std::size_t i = 1; i < spec.meshes.size(); ++i)
    if (spec.meshes[i] <= spec.meshes[i - 1])
      throw std::invalid_argument("ito spec: meshes must increase");

  // alignment at every mesh
  for (int m : spec.meshes) {
    TimeGrid grid(spec.t_max, m);
    for (const auto* decl : {&spec.r1, &spec.r2})
      for (const auto& piece : decl->pieces)
        if (!grid_aligned(grid, piece.iv))
          throw std::invalid_argument(
              "ito spec: piece boundaries must be aligned to every mesh");
    for (const auto& s : spec.symbols)
      if (!grid_aligned(grid, s.iv))
        throw std::invalid_argument(
            "ito spec: symbol intervals must be aligned to every mesh");
  }

  const int m0 = spec.meshes.front();
  TimeGrid grid(spec.t_max, m0);
  SymbolTable symtab(m0);
  register_spec_symbols(spec.symbols, grid, symtab);
  SimpleBiprocess r1 = instantiate_biprocess(spec.r1, grid, symtab);
  SimpleBiprocess r2 = instantiate_biprocess(spec.r2, grid, symtab);

  const Adaptedness tag1 = check_adapted(r1, grid, symtab);
  const Adaptedness tag2 = check_adapted(r2, grid, symtab);
  if (!satisfies(tag1, required_for(spec.s1)))
    throw std::invalid_argument(
        "assumption 3 violated: R1 is " + adaptedness_name(tag1) +
        " but a d" + spec.s1.name() + " integral needs a " +
        adaptedness_name(required_for(spec.s1)) + " integrand");
  if (!satisfies(tag2, required_for(spec.s2)))
    throw std::invalid_argument(
        "assumption 3 violated: R2 is " + adaptedness_name(tag2) +
        " but a d" + spec.s2.name() + " integral needs a " +
        adaptedness_name(required_for(spec.s2)) + " integrand");

  // grading bounds of assumptions 4-7; finite by construction for simple
  // biprocesses, recorded for the report echo
  Polynomial int1 = integrate_symbolic(r1, spec.s1, grid, symtab);
  Polynomial int2 = integrate_symbolic(r2, spec.s2, grid, symtab);
  std::string echo = "R1 " + adaptedness_name(tag1) + ", R2 " +
                     adaptedness_name(tag2);
  if (spec.s1.type == ProcessKind::Gauge)
    echo += "; j4=" + std::to_string(max_abs_grade(int2));
  if (spec.s1.type == ProcessKind::Annihilation) {
    int j = max_annihilators(int2, symtab, spec.q);
    for (const auto& piece : r1.pieces)
      for (const auto& [key, c] : piece.b.terms())
        j = std::max(j, max_annihilators(Polynomial::monomial(key.second),
                                         symtab, spec.q));
    echo += "; j5=" + std::to_string(j);
  }
  if (spec.s2.type == ProcessKind::Gauge)
    echo += "; j6=" + std::to_string(max_abs_grade(int1));
  if (spec.s2.type == ProcessKind::Creation) {
    int j = max_creators(int1, symtab, spec.q);
    for (const auto& piece : r2.pieces)
      for (const auto& [key, c] : piece.b.terms())
        j = std::max(j, max_creators(Polynomial::monomial(key.first), symtab,
                                     spec.q));
    echo += "; j7=" + std::to_string(j);
  }
  return echo;
}

namespace {

struct MeshStudy {
  TimeGrid grid;
  TruncationConfig cfg;
  SymbolTable symtab;
  std::vector<Polynomial> xs, ys;  // per-cell sharp terms
  Polynomial corr;
  Polynomial x_total, y_total;

  MeshStudy(const ItoSpec& spec, int m)
      : grid(spec.t_max, m), cfg(grid.config(spec.q, spec.levels)), symtab(m) {
    register_spec_symbols(spec.symbols, grid, symtab);
    SimpleBiprocess r1 = instantiate_biprocess(spec.r1, grid, symtab);
    SimpleBiprocess r2 = instantiate_biprocess(spec.r2, grid, symtab);

    std::vector<const Bioperator*> cover1(m, nullptr), cover2(m, nullptr);
    for (const auto& piece : r1.pieces) {
      auto [a, b] = cell_range(grid, piece.iv);
      for (int i = a; i < b; ++i) cover1[i] = &piece.b;
    }
    for (const auto& piece : r2.pieces) {
      auto [a, b] = cell_range(grid, piece.iv);
      for (int i = a; i < b; ++i) cover2[i] = &piece.b;
    }

    const double h = grid.cell_width();
    xs.resize(m);
    ys.resize(m);
    for (int i = 0; i < m; ++i) {
      Interval cell{i * h, (i + 1) * h};
      if (cover1[i])
        xs[i] = cover1[i]->sharp(basic_increment(spec.s1, cell, grid, symtab));
      if (cover2[i])
        ys[i] = cover2[i]->sharp(basic_increment(spec.s2, cell, grid, symtab));
      x_total += xs[i];
      y_total += ys[i];
    }
    corr = ito_correction(spec.s1, spec.s2, r1, r2, grid, symtab, spec.q);
  }

  Polynomial diagonal_poly() const {
    Polynomial d;
    for (std::size_t i = 0; i < xs.size(); ++i) d += xs[i] * ys[i];
    return d;
  }
};

double fit_slope(const std::vector<int>& meshes, const std::vector<double>& res) {
  // least squares on log-log, positive residuals only
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (!(res[i] > 1e-15)) continue;
    const double x = std::log(static_cast<double>(meshes[i]));
    const double y = std::log(res[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

}  // namespace

ItoReport verify_ito(const ItoSpec& spec) {
  const auto t_start = std::chrono::steady_clock::now();
  ItoReport rep;
  rep.spec_name = spec.name;
  rep.s1 = spec.s1.name();
  rep.s2 = spec.s2.name();
  const ResidualTopology topo = topology_for(spec.s1, spec.s2);
  rep.topology = topology_name(topo);
  rep.tolerance = spec.tolerance;
  rep.assumptions = check_ito_hypotheses(spec);
  rep.meshes = spec.meshes;

  for (int m : spec.meshes) {
    MeshStudy study(spec, m);
    Applier applier(study.cfg, study.symtab);

    Polynomial resid = study.diagonal_poly();
    resid -= study.corr;

    // test vectors, fresh per mesh (the space changes with the grid)
    std::vector<Vector> vs;
    for (int t = 0; t < spec.test_vectors; ++t)
      vs.push_back(applier.random_unit(
          spec.seed * 6364136223846793005ULL + 1000003ULL * m + t));

    const Index total = study.cfg.total_dim();
    Vector rv(total), prv(total);
    std::vector<double> vec_res;
    double me_res = 0.0;
    for (int b = 0; b < spec.test_vectors; ++b) {
      applier.apply_polynomial(resid, vs[b], rv);
      applier.apply_metric(rv, prv);
      const double nn = std::real(rv.dot(prv));
      vec_res.push_back(nn > 0.0 ? std::sqrt(nn) : 0.0);
      if (topo == ResidualTopology::MatrixElement)
        for (int a = 0; a < spec.test_vectors; ++a) {
          if (a == b) continue;
          me_res = std::max(me_res, std::abs(vs[a].dot(prv)));
        }
    }
    rep.residual_vec.push_back(vec_res);

    double op_res = std::numeric_limits<double>::quiet_NaN();
    if (topo == ResidualTopology::OperatorNorm) {
      Polynomial resid_adj = q_adjoint_symbolic(resid, study.symtab);
      op_res = lanczos_q_opnorm(applier, resid, resid_adj,
                                spec.seed * 0x9E3779B97F4A7C15ULL + m, 40, 1e-3);
    }
    rep.residual_opnorm.push_back(op_res);

    double primary = 0.0;
    switch (topo) {
      case ResidualTopology::OperatorNorm: primary = op_res; break;
      case ResidualTopology::VectorNorm:
        primary = *std::max_element(vec_res.begin(), vec_res.end());
        break;
      case ResidualTopology::MatrixElement: primary = me_res; break;
    }
    rep.residual_primary.push_back(primary);

    // product = diagonal + both off-diagonal sums, checked on one vector
    {
      const Vector& v = vs.front();
      Vector lhs(total), tmp(total);
      applier.apply_polynomial(study.y_total, v, tmp);
      applier.apply_polynomial(study.x_total, tmp, lhs);

      Vector rhs = Vector::Zero(total);
      for (std::size_t i = 0; i < study.xs.size(); ++i) {
        applier.apply_polynomial(study.ys[i], v, tmp);
        applier.accumulate_polynomial(study.xs[i], Complex(1, 0), tmp, rhs);
      }
      // off-diagonal i > j
      Vector z = Vector::Zero(total);
      for (std::size_t i = 0; i < study.xs.size(); ++i) {
        if (i > 0) applier.accumulate_polynomial(study.ys[i - 1], Complex(1, 0), v, z);
        applier.accumulate_polynomial(study.xs[i], Complex(1, 0), z, rhs);
      }
      // off-diagonal j > i
      Vector sw = Vector::Zero(total);
      for (std::ptrdiff_t i = study.xs.size() - 2; i >= 0; --i) {
        applier.accumulate_polynomial(study.ys[i + 1], Complex(1, 0), v, sw);
        applier.accumulate_polynomial(study.xs[i], Complex(1, 0), sw, rhs);
      }
      rep.identity_defect.push_back(applier.norm(Vector(lhs - rhs)));
    }
  }

  rep.slope = fit_slope(rep.meshes, rep.residual_primary);
  bool ok = rep.residual_primary.back() < spec.tolerance;
  for (std::size_t i = 0; i + 1 < rep.residual_primary.size(); ++i)
    if (rep.residual_primary[i + 1] > 2.0 * rep.residual_primary[i] + 1e-15)
      ok = false;
  rep.verdict = ok;
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rep;
}

CompositeProcess CompositeProcess::poisson(Complex mu, double intensity) {
  if (!(std::abs(mu) < 1.0) || mu == Complex(0, 0))
    throw std::invalid_argument("poisson process needs 0 < |mu| < 1");
  if (!(intensity > 0.0))
    throw std::invalid_argument("poisson process needs intensity > 0");
  return {Poisson, mu, intensity};
}

std::vector<std::pair<ProcessKind, Bioperator>> composite_parts(
    const CompositeProcess& c) {
  std::vector<std::pair<ProcessKind, Bioperator>> parts;
  if (c.type == CompositeProcess::Brownian) {
    parts.push_back({ProcessKind::annihilation(), Bioperator::one()});
    parts.push_back({ProcessKind::creation(), Bioperator::one()});
    return parts;
  }
  const double rl = std::sqrt(c.intensity);
  Polynomial g = gamma_poly(c.mu);
  parts.push_back({ProcessKind::annihilation(),
                   Complex(rl, 0) * Bioperator::simple(g, Polynomial::one())});
  parts.push_back({ProcessKind::creation(),
                   Complex(rl, 0) * Bioperator::simple(Polynomial::one(), g)});
  parts.push_back({ProcessKind::gauge(c.mu),
                   (Complex(1, 0) / c.mu) * Bioperator::one()});
  parts.push_back({ProcessKind::time(),
                   Complex(c.intensity, 0) *
                       Bioperator::simple(g, Polynomial::one())});
  return parts;
}

Polynomial composite_increment(const CompositeProcess& c, const Interval& iv,
                               const TimeGrid& grid, SymbolTable& symtab) {
  Polynomial out;
  for (const auto& [kind, dress] : composite_parts(c))
    out += dress.sharp(basic_increment(kind, iv, grid, symtab));
  return out;
}

std::vector<double> iterated_delay_study(const ItoSpec& spec, int fixed_mesh,
                                         const std::vector<int>& delays) {
  MeshStudy study(spec, fixed_mesh);
  Applier applier(study.cfg, study.symtab);
  const Index total = study.cfg.total_dim();
  Vector v = applier.random_unit(spec.seed + 17);

  // off-diagonal sum with the inner integral delayed by `lag` cells
  auto delayed = [&](int lag) {
    Vector acc = Vector::Zero(total);
    Vector z = Vector::Zero(total);
    Vector tmp(total);
    const int m = fixed_mesh;
    for (int i = 0; i < m; ++i) {
      const int newest = i - lag;  // cells j < newest are integrated
      if (newest >= 1) {
        applier.apply_polynomial(study.ys[newest - 1], v, tmp);
        z += tmp;
      }
      applier.accumulate_polynomial(study.xs[i], Complex(1, 0), z, acc);
    }
    return acc;
  };

  Vector reference = delayed(1);  // the straight i > j split
  std::vector<double> out;
  for (int d : delays) {
    if (d <= 0 || fixed_mesh % d != 0)
      throw std::invalid_argument("iterated_delay_study: delay must divide the mesh");
    const int lag = fixed_mesh / d;
    out.push_back(applier.norm(Vector(delayed(lag) - reference)));
  }
  return out;
}

}  // namespace qfock
