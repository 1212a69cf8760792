#include "sagdlab/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace sagdlab {

namespace {

Vector normal_equations_minimizer(const std::vector<Vector>& xs,
                                  const std::vector<double>& ys,
                                  const std::vector<double>& probs,
                                  Eigen::Index dim) {
  Matrix h = Matrix::Zero(dim, dim);
  Vector b = Vector::Zero(dim);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    h += probs[i] * xs[i] * xs[i].transpose();
    b += probs[i] * ys[i] * xs[i];
  }
  const EigDecomposition d = sym_eig(SymMatrix(h));
  const double cutoff = 1e-10 * std::max(d.eigenvalues.maxCoeff(), 0.0);
  Vector coeffs = d.eigenvectors.transpose() * b;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    coeffs[j] = d.eigenvalues[j] > cutoff ? coeffs[j] / d.eigenvalues[j] : 0.0;
  }
  return d.eigenvectors * coeffs;
}

}  // namespace

FiniteSumQuadratic::FiniteSumQuadratic(std::vector<Vector> xs,
                                       std::vector<double> ys,
                                       std::vector<double> probs,
                                       std::optional<Vector> minimizer)
    : xs_(std::move(xs)), ys_(std::move(ys)), probs_(std::move(probs)) {
  if (xs_.empty()) {
    throw std::invalid_argument("FiniteSumQuadratic: at least one point required");
  }
  if (ys_.size() != xs_.size() || probs_.size() != xs_.size()) {
    throw std::invalid_argument(
        "FiniteSumQuadratic: points, labels, and probs must have equal length");
  }
  dim_ = xs_.front().size();
  double total = 0.0;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (xs_[i].size() != dim_) {
      throw std::invalid_argument("FiniteSumQuadratic: inconsistent point dimension");
    }
    if (!xs_[i].allFinite() || !std::isfinite(ys_[i])) {
      throw std::invalid_argument("FiniteSumQuadratic: non-finite data");
    }
    if (probs_[i] < 0.0) {
      throw std::invalid_argument("FiniteSumQuadratic: probs must be nonnegative");
    }
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("FiniteSumQuadratic: probs must sum to 1");
  }
  if (minimizer.has_value()) {
    if (minimizer->size() != dim_) {
      throw std::invalid_argument("FiniteSumQuadratic: minimizer dimension mismatch");
    }
    minimizer_ = std::move(*minimizer);
  } else {
    minimizer_ = normal_equations_minimizer(xs_, ys_, probs_, dim_);
  }
  optimal_value_ = full_value(*this, minimizer_);
}

FiniteSumQuadratic make_uniform_basis(int n) {
  if (n < 1) throw std::invalid_argument("make_uniform_basis: n must be >= 1");
  std::vector<Vector> xs;
  xs.reserve(n);
  for (int i = 0; i < n; ++i) {
    xs.push_back(Vector::Unit(n, i));
  }
  return FiniteSumQuadratic(std::move(xs), std::vector<double>(n, 0.0),
                            std::vector<double>(n, 1.0 / n), Vector::Zero(n));
}

FiniteSumQuadratic make_two_point(int n) {
  if (n < 2) throw std::invalid_argument("make_two_point: n must be >= 2");
  std::vector<Vector> xs = {Vector::Unit(2, 0), Vector::Unit(2, 1)};
  return FiniteSumQuadratic(std::move(xs), {0.0, 0.0},
                            {1.0 - 1.0 / n, 1.0 / n}, Vector::Zero(2));
}

FiniteSumQuadratic make_random_interpolating(int n, int d, RngStream& rng) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("make_random_interpolating: n, d must be >= 1");
  }
  Vector planted(d);
  for (int j = 0; j < d; ++j) planted[j] = rng.next_gaussian();
  std::vector<Vector> xs;
  std::vector<double> ys;
  xs.reserve(n);
  ys.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector x(d);
    for (int j = 0; j < d; ++j) x[j] = rng.next_gaussian();
    ys.push_back(x.dot(planted));
    xs.push_back(std::move(x));
  }
  return FiniteSumQuadratic(std::move(xs), std::move(ys),
                            std::vector<double>(n, 1.0 / n), std::move(planted));
}

double full_value(const FiniteSumQuadratic& p, const Vector& w) {
  if (w.size() != p.dim()) {
    throw std::invalid_argument("full_value: dimension mismatch");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    const double r = p.xs()[i].dot(w) - p.ys()[i];
    value += 0.5 * p.probs()[i] * r * r;
  }
  return value;
}

Vector full_grad(const FiniteSumQuadratic& p, const Vector& w) {
  if (w.size() != p.dim()) {
    throw std::invalid_argument("full_grad: dimension mismatch");
  }
  Vector g = Vector::Zero(p.dim());
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    g += p.probs()[i] * (p.xs()[i].dot(w) - p.ys()[i]) * p.xs()[i];
  }
  return g;
}

OracleSample component_sample(const FiniteSumQuadratic& p, const Vector& w,
                              std::size_t index) {
  const double r = p.xs()[index].dot(w) - p.ys()[index];
  return {index, 0.5 * r * r, r * p.xs()[index]};
}

OracleSample sample_grad(const FiniteSumQuadratic& p, const Vector& w,
                         RngStream& rng) {
  if (w.size() != p.dim()) {
    throw std::invalid_argument("sample_grad: dimension mismatch");
  }
  return component_sample(p, w, rng.next_index(p.probs()));
}

double exact_sgrad_second_moment(const FiniteSumQuadratic& p, const Vector& w,
                                 const SymMatrix* precond_inv) {
  if (w.size() != p.dim()) {
    throw std::invalid_argument("exact_sgrad_second_moment: dimension mismatch");
  }
  if (precond_inv != nullptr) {
    const EigDecomposition d = sym_eig(*precond_inv);
    if (d.eigenvalues.minCoeff() <= 1e-12 * d.eigenvalues.maxCoeff()) {
      throw std::domain_error(
          "exact_sgrad_second_moment: preconditioner is not positive definite");
    }
  }
  double moment = 0.0;
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    const double r = p.xs()[i].dot(w) - p.ys()[i];
    const double xsq = precond_inv == nullptr
                           ? p.xs()[i].squaredNorm()
                           : p.xs()[i].dot(precond_inv->mat() * p.xs()[i]);
    moment += p.probs()[i] * r * r * xsq;
  }
  return moment;
}

bool check_interpolation(const FiniteSumQuadratic& p, double tol) {
  const Vector& w = p.minimizer();
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    const double r = p.xs()[i].dot(w) - p.ys()[i];
    if (std::abs(r) * p.xs()[i].norm() > tol) return false;
  }
  return true;
}

}  // namespace sagdlab
