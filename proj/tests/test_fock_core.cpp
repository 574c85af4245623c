#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfock/fock.hpp"
#include "qfock/operators.hpp"
#include "qfock/rng.hpp"

#include <Eigen/Eigenvalues>

using namespace qfock;

TEST_CASE("vacuum has unit norm") {
  TruncationConfig cfg(2, 3, 0.5);
  QMetric metric(cfg);
  FockVector omega = vacuum_vector(cfg);
  CHECK(std::abs(q_inner(metric, omega, omega) - Complex(1, 0)) < 1e-15);
}

TEST_CASE("undeformed case reduces to the free inner product") {
  TruncationConfig cfg(3, 3, 0.0);
  QMetric metric(cfg);
  Rng rng(11);
  FockVector a(cfg, rng.complex_vector(cfg.total_dim()));
  FockVector b(cfg, rng.complex_vector(cfg.total_dim()));
  CHECK(std::abs(q_inner(metric, a, b) - a.coeffs.dot(b.coeffs)) < 1e-12);
}

TEST_CASE("two identical one-dimensional factors have squared norm 1 + q") {
  const double q = 0.37;
  TruncationConfig cfg(1, 2, q);
  QMetric metric(cfg);
  FockVector psi(cfg);
  psi.level(2)[0] = 1.0;  // e (x) e
  CHECK(std::abs(q_inner(metric, psi, psi) - Complex(1 + q, 0)) < 1e-14);
}

TEST_CASE("inner product is conjugate-linear in the first argument") {
  TruncationConfig cfg(2, 3, -0.4);
  QMetric metric(cfg);
  Rng rng(5);
  FockVector a(cfg, rng.complex_vector(cfg.total_dim()));
  FockVector b(cfg, rng.complex_vector(cfg.total_dim()));
  const Complex alpha(0.3, -0.8);
  FockVector scaled(cfg, Vector(alpha * a.coeffs));
  CHECK(std::abs(q_inner(metric, scaled, b) -
                 std::conj(alpha) * q_inner(metric, a, b)) < 1e-12);
}

TEST_CASE("the deformed form is positive definite") {
  for (double q : {-0.9, -0.5, 0.5, 0.9}) {
    TruncationConfig cfg(2, 4, q);
    QMetric metric(cfg);
    Rng rng(23);
    for (int it = 0; it < 10; ++it) {
      Vector v = rng.complex_vector(cfg.total_dim());
      CHECK(std::real(metric.inner(v, v)) > 0.0);
    }
  }
}

TEST_CASE("dimension mismatch is rejected") {
  TruncationConfig cfg(2, 3, 0.5);
  QMetric metric(cfg);
  Vector small = Vector::Zero(3);
  CHECK_THROWS_AS(metric.inner(small, small), std::invalid_argument);
}

TEST_CASE("level projections") {
  const double q = 0.6;
  TruncationConfig cfg(2, 3, q);
  QMetric metric(cfg);

  SUBCASE("projection onto the vacuum fixes the vacuum") {
    FockOperator p0 = level_projection(cfg, 0);
    FockVector omega = vacuum_vector(cfg);
    CHECK((p0.mat * omega.coeffs - omega.coeffs).norm() < 1e-15);
  }

  SUBCASE("projections resolve the identity and are orthogonal") {
    Matrix sum = Matrix::Zero(cfg.total_dim(), cfg.total_dim());
    for (int j = 0; j <= cfg.N; ++j) sum += level_projection(cfg, j).mat;
    CHECK((sum - Matrix::Identity(cfg.total_dim(), cfg.total_dim())).norm() <
          1e-14);
    Matrix p1 = level_projection(cfg, 1).mat;
    Matrix p2 = level_projection(cfg, 2).mat;
    CHECK((p1 * p2).norm() < 1e-15);
    CHECK((p1 * p1 - p1).norm() < 1e-15);
  }

  SUBCASE("projections are self-adjoint in the deformed metric") {
    for (int j = 0; j <= cfg.N; ++j) {
      FockOperator pj = level_projection(cfg, j);
      FockOperator adj = q_adjoint(metric, pj);
      CHECK((pj.mat - adj.mat).norm() < 1e-12);
    }
  }

  SUBCASE("mixed vector splits correctly") {
    FockVector v(cfg);
    v.coeffs[0] = Complex(0.3, 0);  // alpha Omega
    v.level(1)[0] = Complex(0.7, 0);  // beta e1
    Vector p1v = level_projection(cfg, 1).mat * v.coeffs;
    CHECK(std::abs(p1v[0]) < 1e-15);
    CHECK(std::abs(p1v[cfg.level_offset(1)] - Complex(0.7, 0)) < 1e-15);
  }

  SUBCASE("out of range level") {
    CHECK_THROWS_AS(level_projection(cfg, 4), std::out_of_range);
  }
}

TEST_CASE("vacuum state") {
  const double q = 0.5;
  TruncationConfig cfg(2, 4, q);
  QMetric metric(cfg);

  CHECK(std::abs(vacuum_state(metric, identity_operator(cfg)) - Complex(1, 0)) <
        1e-15);

  Vector e1 = Vector::Zero(2);
  e1[0] = 1.0;
  CHECK(std::abs(vacuum_state(metric, creation(cfg, e1))) < 1e-15);

  // fourth moment of a(phi) + a*(phi) for a unit vector: 2 + q
  FockOperator b = creation(cfg, e1) + annihilation(cfg, e1);
  FockOperator b4 = b * b * b * b;
  CHECK(std::abs(vacuum_state(metric, b4) - Complex(2 + q, 0)) < 1e-13);
}
