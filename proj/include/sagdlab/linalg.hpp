#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sagdlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Entries are stored exactly symmetric; the
/// constructor symmetrizes its input and rejects matrices whose asymmetry
/// exceeds a small relative tolerance.
class SymMatrix {
 public:
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Eigen::Index dim);
  static SymMatrix diagonal(const Vector& d);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

struct EigDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, same order
};

/// Full eigendecomposition of a symmetric matrix.
EigDecomposition sym_eig(const SymMatrix& a);

/// Largest eigenvalue of the pencil (A, B): the least t with A <= t B.
/// B must be positive definite.
double pencil_max(const SymMatrix& a, const SymMatrix& b);

/// True iff a <= b in the PSD order, up to a relative tolerance scaled by
/// the spectral norm of b.
bool psd_leq(const SymMatrix& a, const SymMatrix& b, double tol);

/// B^{-1/2} for positive definite B, via eigendecomposition.
Matrix inv_sqrt(const SymMatrix& b);

}  // namespace sagdlab
