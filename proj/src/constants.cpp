#include "sagdlab/constants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sagdlab {

namespace {

constexpr double kRankCutoff = 1e-10;
constexpr double kInterpolationTol = 1e-8;

Matrix restrict_to(const Matrix& basis, const Matrix& m) {
  return basis.transpose() * m * basis;
}

}  // namespace

ConstantsReport compute_constants(const FiniteSumQuadratic& p) {
  if (!check_interpolation(p, kInterpolationTol)) {
    throw std::domain_error(
        "compute_constants: problem is not interpolating, rho is undefined");
  }
  const Eigen::Index d = p.dim();
  Matrix h = Matrix::Zero(d, d);
  Matrix m = Matrix::Zero(d, d);
  double lmax = 0.0;
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    const Matrix outer = p.xs()[i] * p.xs()[i].transpose();
    const double xsq = p.xs()[i].squaredNorm();
    h += p.probs()[i] * outer;
    m += p.probs()[i] * xsq * outer;
    if (p.probs()[i] > 0.0) lmax = std::max(lmax, xsq);
  }
  const SymMatrix hessian(h);
  const EigDecomposition he = sym_eig(hessian);
  const double l = he.eigenvalues.maxCoeff();
  const double cutoff = kRankCutoff * std::max(l, 0.0);
  const bool rank_deficient = he.eigenvalues.minCoeff() <= cutoff;
  const double mu = rank_deficient ? 0.0 : he.eigenvalues.minCoeff();

  // Range-space basis of H. Interpolation puts every x_i in range(H), so
  // both quadratic forms vanish on null(H) and the pencils below are exact.
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (he.eigenvalues[j] > cutoff) ++rank;
  }
  if (rank == 0) {
    throw std::domain_error("compute_constants: zero Hessian");
  }
  const Matrix basis = he.eigenvectors.rightCols(rank);
  const Vector range_eigs = he.eigenvalues.tail(rank);

  const SymMatrix m_r(restrict_to(basis, m));
  const SymMatrix h_r(Matrix(range_eigs.asDiagonal()));
  const SymMatrix h2_r(Matrix(range_eigs.array().square().matrix().asDiagonal()));

  const double rho = pencil_max(m_r, h2_r);
  const double m_over_h = pencil_max(m_r, h_r);
  const double alpha_wg = m_over_h / l;
  const double kappa = mu > 0.0 ? m_over_h / mu
                                : std::numeric_limits<double>::infinity();

  // M-tilde uses ||x||^2 in the H pseudo-inverse norm.
  Matrix m_tilde = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    const Vector coeffs = basis.transpose() * p.xs()[i];
    const double hinv_sq = (coeffs.array().square() / range_eigs.array()).sum();
    m_tilde += p.probs()[i] * hinv_sq * p.xs()[i] * p.xs()[i].transpose();
  }
  const double kappa_tilde =
      pencil_max(SymMatrix(restrict_to(basis, m_tilde)), h_r);

  return {l, lmax, mu, rho, alpha_wg, kappa, kappa_tilde, hessian, rank_deficient};
}

double estimate_rho_empirical(const FiniteSumQuadratic& p, int trials,
                              RngStream& rng) {
  if (trials < 1) {
    throw std::invalid_argument("estimate_rho_empirical: trials must be >= 1");
  }
  constexpr double radii[] = {0.1, 1.0, 10.0};
  double best = -1.0;
  for (int t = 0; t < trials; ++t) {
    Vector u(p.dim());
    for (Eigen::Index j = 0; j < p.dim(); ++j) u[j] = rng.next_gaussian();
    const double norm = u.norm();
    if (norm == 0.0) continue;
    const Vector w = p.minimizer() + (radii[t % 3] / norm) * u;
    const double grad_sq = full_grad(p, w).squaredNorm();
    if (grad_sq <= 1e-24) continue;
    best = std::max(best, exact_sgrad_second_moment(p, w) / grad_sq);
  }
  if (best < 0.0) {
    throw std::domain_error(
        "estimate_rho_empirical: every sampled gradient vanished");
  }
  return best;
}

MatrixConstantsReport matrix_constants(const FiniteSumQuadratic& p,
                                       const SymMatrix& d) {
  if (d.dim() != p.dim()) {
    throw std::invalid_argument("matrix_constants: dimension mismatch");
  }
  const Matrix s = inv_sqrt(d);  // throws if d is not positive definite
  std::vector<Vector> xs;
  xs.reserve(p.num_points());
  for (const Vector& x : p.xs()) xs.push_back(s * x);
  // Congruence w -> D^{1/2} w: the transformed problem has the same labels
  // and planted minimizer D^{1/2} w*.
  const Matrix sqrt_d = inv_sqrt(SymMatrix(s * s));
  FiniteSumQuadratic transformed(std::move(xs), p.ys(), p.probs(),
                                 Vector(sqrt_d * p.minimizer()));
  const ConstantsReport r = compute_constants(transformed);
  return {r.smoothness, r.strong_convexity, r.strong_growth, d};
}

}  // namespace sagdlab
