#include "sagdlab/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace sagdlab {

namespace {
constexpr double kPdCutoff = 1e-12;
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("SymMatrix: matrix must be square and nonempty");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("SymMatrix: entries must be finite");
  }
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw std::invalid_argument("SymMatrix: input is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index dim) {
  return SymMatrix(Matrix::Identity(dim, dim));
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  return SymMatrix(Matrix(d.asDiagonal()));
}

EigDecomposition sym_eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eig: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double pencil_max(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("pencil_max: dimension mismatch");
  }
  const EigDecomposition db = sym_eig(b);
  if (db.eigenvalues.maxCoeff() <= 0.0 ||
      db.eigenvalues.minCoeff() <= kPdCutoff * db.eigenvalues.maxCoeff()) {
    throw std::domain_error("pencil_max: b is not positive definite");
  }
  // Cholesky route: A <= t B iff L^{-1} A L^{-T} <= t I for B = L L^T.
  Eigen::LLT<Matrix> llt(b.mat());
  Matrix transformed;
  if (llt.info() == Eigen::Success) {
    const Matrix l = llt.matrixL();
    Matrix half = l.triangularView<Eigen::Lower>().solve(a.mat());
    transformed = l.triangularView<Eigen::Lower>().solve(half.transpose());
  } else {
    // Fall back to B^{-1/2} A B^{-1/2} when Cholesky fails near the
    // positive-definite boundary.
    const Matrix s = inv_sqrt(b);
    transformed = s * a.mat() * s;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      0.5 * (transformed + transformed.transpose()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("pencil_max: eigensolver failed to converge");
  }
  return solver.eigenvalues().maxCoeff();
}

bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("psd_leq: dimension mismatch");
  }
  const SymMatrix diff(Matrix(b.mat() - a.mat()));
  const EigDecomposition db = sym_eig(b);
  const double spectral_b =
      std::max(std::abs(db.eigenvalues.minCoeff()), std::abs(db.eigenvalues.maxCoeff()));
  const EigDecomposition dd = sym_eig(diff);
  return dd.eigenvalues.minCoeff() >= -tol * (1.0 + spectral_b);
}

Matrix inv_sqrt(const SymMatrix& b) {
  const EigDecomposition d = sym_eig(b);
  const double lmax = d.eigenvalues.maxCoeff();
  if (lmax <= 0.0 || d.eigenvalues.minCoeff() <= kPdCutoff * lmax) {
    throw std::invalid_argument("inv_sqrt: matrix is not positive definite");
  }
  const Vector scaled = d.eigenvalues.array().rsqrt();
  return d.eigenvectors * scaled.asDiagonal() * d.eigenvectors.transpose();
}

}  // namespace sagdlab
