#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sagdlab/linalg.hpp"
#include "sagdlab/rng.hpp"

using namespace sagdlab;

namespace {

Matrix random_sym(Eigen::Index n, RngStream& rng) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.next_gaussian();
  return 0.5 * (m + m.transpose());
}

Matrix random_spd(Eigen::Index n, RngStream& rng) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.next_gaussian();
  return m * m.transpose() + Matrix::Identity(n, n);
}

}  // namespace

TEST_CASE("eigendecomposition of identity and diagonal matrices") {
  const SymMatrix id = SymMatrix::identity(4);
  const EigDecomposition e = sym_eig(id);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(e.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-14));

  Vector d(3);
  d << 3.0, -1.0, 2.0;
  const EigDecomposition ed = sym_eig(SymMatrix::diagonal(d));
  CHECK(ed.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ed.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ed.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("2x2 eigenvalues match the quadratic formula") {
  // Oracle: for [[a, b], [b, c]] the eigenvalues are
  // (a+c)/2 +- sqrt(((a-c)/2)^2 + b^2).
  RngStream rng(11);
  for (int t = 0; t < 50; ++t) {
    const double a = rng.next_gaussian();
    const double b = rng.next_gaussian();
    const double c = rng.next_gaussian();
    Matrix m(2, 2);
    m << a, b, b, c;
    const EigDecomposition e = sym_eig(SymMatrix(m));
    const double mid = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    CHECK(e.eigenvalues[0] == doctest::Approx(mid - rad).epsilon(1e-12));
    CHECK(e.eigenvalues[1] == doctest::Approx(mid + rad).epsilon(1e-12));
  }
}

TEST_CASE("eigenvectors reconstruct the matrix") {
  RngStream rng(7);
  const Matrix m = random_sym(5, rng);
  const EigDecomposition e = sym_eig(SymMatrix(m));
  const Matrix recon =
      e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.transpose();
  CHECK((recon - m).norm() <= 1e-12 * (1.0 + m.norm()));
}

TEST_CASE("asymmetric input is rejected") {
  Matrix m(2, 2);
  m << 1.0, 2.0, -2.0, 1.0;
  CHECK_THROWS_AS(SymMatrix{m}, std::invalid_argument);
}

TEST_CASE("pencil_max with identity right-hand side is the top eigenvalue") {
  RngStream rng(3);
  const SymMatrix a(random_sym(4, rng));
  const double t = pencil_max(a, SymMatrix::identity(4));
  CHECK(t == doctest::Approx(sym_eig(a).eigenvalues.maxCoeff()).epsilon(1e-12));
}

TEST_CASE("pencil_max defines the least t with a <= t b") {
  RngStream rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix a(random_sym(3, rng));
    const SymMatrix b(random_spd(3, rng));
    const double t = pencil_max(a, b);
    // a <= t b holds, and fails with t shrunk slightly.
    CHECK(psd_leq(a, SymMatrix(t * b.mat()), 1e-10));
    const SymMatrix shrunk((t - 0.01 * (1.0 + std::abs(t))) * b.mat());
    CHECK_FALSE(psd_leq(a, shrunk, 1e-10));
  }
}

TEST_CASE("pencil_max is invariant under congruence") {
  // For any invertible C, the (A, B) pencil and the (C'AC, C'BC) pencil
  // share eigenvalues.
  RngStream rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix a(random_sym(3, rng));
    const SymMatrix b(random_spd(3, rng));
    Matrix c(3, 3);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) c(i, j) = rng.next_gaussian();
    c += 3.0 * Matrix::Identity(3, 3);
    const SymMatrix ac(c.transpose() * a.mat() * c);
    const SymMatrix bc(c.transpose() * b.mat() * c);
    CHECK(pencil_max(a, b) == doctest::Approx(pencil_max(ac, bc)).epsilon(1e-8));
  }
}

TEST_CASE("pencil_max rejects an indefinite right-hand side") {
  Vector d(2);
  d << 1.0, -1.0;
  CHECK_THROWS_AS(pencil_max(SymMatrix::identity(2), SymMatrix::diagonal(d)),
                  std::domain_error);
  CHECK_THROWS_AS(
      pencil_max(SymMatrix::identity(2), SymMatrix(Matrix::Zero(2, 2))),
      std::domain_error);
}

TEST_CASE("psd_leq basic cases") {
  const SymMatrix id = SymMatrix::identity(3);
  CHECK(psd_leq(id, SymMatrix(2.0 * Matrix::Identity(3, 3)), 0.0));
  CHECK_FALSE(psd_leq(SymMatrix(2.0 * Matrix::Identity(3, 3)), id, 1e-10));
  // Equality passes at zero tolerance.
  CHECK(psd_leq(id, id, 0.0));
}

TEST_CASE("inv_sqrt squares back to the inverse") {
  RngStream rng(13);
  const SymMatrix b(random_spd(4, rng));
  const Matrix s = inv_sqrt(b);
  const Matrix should_be_identity = s * b.mat() * s;
  CHECK((should_be_identity - Matrix::Identity(4, 4)).norm() <= 1e-10);
}
