#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfock/fock.hpp"
#include "qfock/operators.hpp"
#include "qfock/rng.hpp"

using namespace qfock;

namespace {

Vector basis_vec(int d, int i) {
  Vector v = Vector::Zero(d);
  v[i] = 1.0;
  return v;
}

// columns restricted to input levels <= max_level
double restricted(const TruncationConfig& cfg, const Matrix& x, int max_level) {
  return x.leftCols(cfg.level_offset(max_level) + cfg.level_dim(max_level)).norm();
}

}  // namespace

TEST_CASE("creation acts by left tensoring") {
  TruncationConfig cfg(2, 3, 0.4);
  FockOperator astar1 = creation(cfg, basis_vec(2, 0));
  FockVector omega = vacuum_vector(cfg);
  Vector v = astar1.mat * omega.coeffs;
  CHECK(std::abs(v[cfg.level_offset(1) + 0] - Complex(1, 0)) < 1e-15);

  // a*(e2) e1 = e2 (x) e1
  FockOperator astar2 = creation(cfg, basis_vec(2, 1));
  FockVector e1(cfg);
  e1.level(1)[0] = 1.0;
  Vector w = astar2.mat * e1.coeffs;
  CHECK(std::abs(w[cfg.level_offset(2) + 2] - Complex(1, 0)) < 1e-15);  // (1,0)
  CHECK(w.norm() == doctest::Approx(1.0));
  CHECK(astar2.exactness == cfg.N - 1);
}

TEST_CASE("annihilation kills the vacuum and contracts with q weights") {
  const double q = 0.3;
  TruncationConfig cfg(2, 3, q);
  FockOperator a1 = annihilation(cfg, basis_vec(2, 0));
  FockVector omega = vacuum_vector(cfg);
  CHECK((a1.mat * omega.coeffs).norm() < 1e-15);

  // a(e1)(e1 (x) e1) = (1 + q) e1
  FockVector psi(cfg);
  psi.level(2)[0] = 1.0;  // (0,0)
  Vector v = a1.mat * psi.coeffs;
  CHECK(std::abs(v[cfg.level_offset(1) + 0] - Complex(1 + q, 0)) < 1e-14);
}

TEST_CASE("creation and annihilation are adjoint in the deformed metric") {
  const double q = -0.6;
  TruncationConfig cfg(2, 4, q);
  QMetric metric(cfg);
  Rng rng(3);
  const Vector phi = rng.complex_vector(2);
  FockOperator astar = creation(cfg, phi);
  FockOperator a = annihilation(cfg, phi);

  // <a*(phi) Psi, Phi> = <Psi, a(phi) Phi> on the exact region
  for (int it = 0; it < 5; ++it) {
    Vector psi = rng.complex_vector(cfg.total_dim());
    psi.segment(cfg.level_offset(cfg.N), cfg.level_dim(cfg.N)).setZero();
    Vector xphi = rng.complex_vector(cfg.total_dim());
    const Complex lhs = metric.inner(astar.mat * psi, xphi);
    const Complex rhs = metric.inner(psi, a.mat * xphi);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }

  FockOperator adj = q_adjoint(metric, astar);
  CHECK(restricted(cfg, adj.mat - a.mat, cfg.N - 1) < 1e-12);
}

TEST_CASE("gauge operator on simple tensors") {
  const Complex mu(0.5, 0.2);
  TruncationConfig cfg(2, 3, 0.5);
  FockOperator lambda = gauge(cfg, mu, Matrix::Identity(2, 2));
  FockVector omega = vacuum_vector(cfg);
  CHECK((lambda.mat * omega.coeffs).norm() < 1e-15);  // empty slot sum

  FockVector psi(cfg);
  psi.level(2)[1] = 1.0;  // e1 (x) e2
  Vector v = lambda.mat * psi.coeffs;
  CHECK(std::abs(v[cfg.level_offset(2) + 1] - 2.0 * mu * mu) < 1e-14);
}

TEST_CASE("gauge rejects modulus one") {
  TruncationConfig cfg(2, 3, 0.5);
  CHECK_THROWS_AS(gauge(cfg, Complex(1, 0), Matrix::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("deformed identity") {
  const Complex mu(0.3, 0.4);
  TruncationConfig cfg(2, 3, 0.5);
  QMetric metric(cfg);
  FockOperator g1 = gamma_op(cfg, Complex(1, 0));
  CHECK((g1.mat - Matrix::Identity(cfg.total_dim(), cfg.total_dim())).norm() <
        1e-15);

  FockOperator g = gamma_op(cfg, mu);
  FockVector psi(cfg);
  psi.level(2)[1] = 1.0;
  Vector v = g.mat * psi.coeffs;
  CHECK(std::abs(v[cfg.level_offset(2) + 1] - mu * mu) < 1e-15);

  // modulus-one parameter keeps norm one; smaller parameters contract
  FockOperator gu = gamma_op(cfg, Complex(0.6, 0.8));
  CHECK(q_operator_norm(metric, gu) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(q_operator_norm(metric, g) <= 1.0 + 1e-12);
  CHECK_THROWS_AS(gamma_op(cfg, Complex(1.2, 0)), std::invalid_argument);
}

TEST_CASE("adjoints of the generators") {
  TruncationConfig cfg(2, 3, 0.4);
  QMetric metric(cfg);
  Rng rng(9);
  const Complex mu(0.3, -0.5);
  const Matrix t = rng.complex_matrix(2, 2);

  FockOperator g_adj = q_adjoint(metric, gamma_op(cfg, mu));
  CHECK((g_adj.mat - gamma_op(cfg, std::conj(mu)).mat).norm() < 1e-12);

  FockOperator l_adj = q_adjoint(metric, gauge(cfg, mu, t));
  CHECK((l_adj.mat - gauge(cfg, std::conj(mu), t.adjoint()).mat).norm() < 1e-11);

  // involution on the exact region
  FockOperator x = creation(cfg, rng.complex_vector(2));
  FockOperator xadj2 = q_adjoint(metric, q_adjoint(metric, x));
  CHECK(restricted(cfg, xadj2.mat - x.mat, cfg.N - 1) < 1e-11);
}

TEST_CASE("operator norms in the deformed metric") {
  const double q = 0.5;
  TruncationConfig cfg(2, 4, q);
  QMetric metric(cfg);
  Rng rng(17);

  CHECK(q_operator_norm(metric, identity_operator(cfg)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // undeformed case: plain spectral norm
  TruncationConfig cfg0(2, 3, 0.0);
  QMetric metric0(cfg0);
  FockOperator x(rng.complex_matrix(cfg0.total_dim(), cfg0.total_dim()), cfg0.N, 0);
  CHECK(q_operator_norm(metric0, x) == doctest::Approx(spectral_norm(x.mat)));

  // a level-preserving operator commuting with the symmetrizers keeps its
  // free norm (deformed identity with real parameter)
  FockOperator g = gamma_op(cfg, Complex(0.7, 0));
  CHECK(q_operator_norm(metric, g) == doctest::Approx(spectral_norm(g.mat)));

  // norm bounds
  const Vector phi = rng.complex_vector(2);
  CHECK(q_operator_norm(metric, creation(cfg, phi)) <=
        phi.norm() / std::sqrt(1.0 - q) + 1e-12);
  const Complex mu(0.4, 0.3);
  const Matrix t = rng.complex_matrix(2, 2);
  CHECK(q_operator_norm(metric, gauge(cfg, mu, t)) <=
        spectral_norm(t) * gauge_norm_bound_factor(mu) + 1e-12);
}

TEST_CASE("creation norm approaches its bound from below as N grows") {
  const double q = 0.6;
  Vector phi = basis_vec(2, 0);
  double prev = 0.0;
  for (int levels = 2; levels <= 6; ++levels) {
    TruncationConfig cfg(2, levels, q);
    QMetric metric(cfg);
    const double nrm = q_operator_norm(metric, creation(cfg, phi));
    CHECK(nrm >= prev - 1e-12);
    CHECK(nrm <= 1.0 / std::sqrt(1.0 - q) + 1e-12);
    prev = nrm;
  }
}

TEST_CASE("block norms pick out single blocks") {
  TruncationConfig cfg(2, 3, 0.5);
  QMetric metric(cfg);
  Vector phi = basis_vec(2, 0);
  FockOperator astar = creation(cfg, phi);
  CHECK(q_block_norm(metric, astar, 0, 1) > 0.9);
  CHECK(q_block_norm(metric, astar, 1, 0) == doctest::Approx(0.0));
}

TEST_CASE("free relation at q = 0") {
  TruncationConfig cfg(3, 4, 0.0);
  Rng rng(21);
  const Vector phi = rng.complex_vector(3);
  const Vector psi = rng.complex_vector(3);
  Matrix lhs = annihilation(cfg, phi).mat * creation(cfg, psi).mat;
  Matrix rhs = phi.dot(psi) * Matrix::Identity(cfg.total_dim(), cfg.total_dim());
  CHECK(restricted(cfg, lhs - rhs, cfg.N - 1) < 1e-12);
}

TEST_CASE("second quantization") {
  TruncationConfig cfg(2, 3, 0.5);
  QMetric metric(cfg);

  SUBCASE("identity lifts to the identity") {
    Matrix g = second_quantization(cfg, cfg, Matrix::Identity(2, 2));
    CHECK((g - Matrix::Identity(cfg.total_dim(), cfg.total_dim())).norm() <
          1e-14);
  }

  SUBCASE("fixes the vacuum and preserves the deformed inner product") {
    TruncationConfig big(3, 3, 0.5);
    QMetric metric_big(big);
    Matrix u = Matrix::Zero(3, 2);  // inclusion of the first two directions
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    Matrix g = second_quantization(cfg, big, u);
    FockVector omega = vacuum_vector(cfg);
    Vector gomega = g * omega.coeffs;
    CHECK(std::abs(gomega[0] - Complex(1, 0)) < 1e-15);

    Rng rng(31);
    for (int it = 0; it < 5; ++it) {
      Vector a = rng.complex_vector(cfg.total_dim());
      Vector b = rng.complex_vector(cfg.total_dim());
      CHECK(std::abs(metric_big.inner(g * a, g * b) - metric.inner(a, b)) <
            1e-11);
    }
  }

  SUBCASE("conjugation extends the generators") {
    TruncationConfig big(3, 3, 0.5);
    QMetric metric_big(big);
    Matrix u = Matrix::Zero(3, 2);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    Matrix g = second_quantization(cfg, big, u);
    // q-adjoint of Gamma(U): P_small^{-1} Gamma(U)^H P_big, blockwise
    Matrix gstar = Matrix::Zero(cfg.total_dim(), big.total_dim());
    for (int n = 0; n <= cfg.N; ++n) {
      Matrix blk = g.block(big.level_offset(n), cfg.level_offset(n),
                           big.level_dim(n), cfg.level_dim(n));
      gstar.block(cfg.level_offset(n), big.level_offset(n), cfg.level_dim(n),
                  big.level_dim(n)) =
          metric.level_solve(n, Matrix(blk.adjoint() * metric_big.level_p(n)));
    }
    Rng rng(37);
    Vector phi = rng.complex_vector(2);
    Matrix lifted = g * creation(cfg, phi).mat * gstar;
    Matrix direct = creation(big, u * phi).mat;
    // compare on the image of Gamma(U) up to the exact region
    Matrix diff = (lifted - direct) * g;
    CHECK(diff.leftCols(cfg.level_offset(cfg.N - 1) + cfg.level_dim(cfg.N - 1))
              .norm() < 1e-11);
  }

  SUBCASE("non-isometries are rejected") {
    Matrix u = 2.0 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(second_quantization(cfg, cfg, u), std::invalid_argument);
  }
}

TEST_CASE("exactness bookkeeping composes") {
  TruncationConfig cfg(2, 3, 0.5);
  Vector phi = basis_vec(2, 0);
  FockOperator astar = creation(cfg, phi);
  FockOperator a = annihilation(cfg, phi);
  FockOperator aa = a * astar;  // a then a* reading right to left: a* first
  CHECK(aa.exactness == cfg.N - 1);
  CHECK(aa.upshift == 0);
  FockOperator num = astar * a;  // a first
  CHECK(num.exactness == cfg.N);
}
