#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sagdlab/linalg.hpp"
#include "sagdlab/rng.hpp"

namespace sagdlab {

/// One stochastic-oracle draw: the sampled component index, its function
/// value, and its gradient.
struct OracleSample {
  std::size_t index;
  double value;
  Vector grad;
};

/// Finite-support least-squares problem: data points (x_i, y_i) with
/// sampling probabilities p_i. Expectations over the component index are
/// exact finite sums, so every in-expectation quantity has an exact value.
///
/// The full objective is f(w) = sum_i p_i * (x_i' w - y_i)^2 / 2 and the
/// stochastic components are f(w, i) = (x_i' w - y_i)^2 / 2.
class FiniteSumQuadratic {
 public:
  /// Validates invariants and fixes a reference minimizer: the planted one
  /// when given, otherwise the least-norm normal-equations solution with
  /// eigenvalue cutoff 1e-10 * lambda_max.
  FiniteSumQuadratic(std::vector<Vector> xs, std::vector<double> ys,
                     std::vector<double> probs,
                     std::optional<Vector> minimizer = std::nullopt);

  Eigen::Index dim() const { return dim_; }
  std::size_t num_points() const { return xs_.size(); }
  const std::vector<Vector>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  const std::vector<double>& probs() const { return probs_; }
  const Vector& minimizer() const { return minimizer_; }
  double optimal_value() const { return optimal_value_; }

 private:
  std::vector<Vector> xs_;
  std::vector<double> ys_;
  std::vector<double> probs_;
  Eigen::Index dim_;
  Vector minimizer_;
  double optimal_value_;
};

/// x ~ Uniform(e_1, ..., e_n), y = 0. Full objective ||w||^2 / 2n.
FiniteSumQuadratic make_uniform_basis(int n);

/// P(x = e_1) = 1 - 1/n, P(x = e_2) = 1/n, y = 0, in dimension 2.
FiniteSumQuadratic make_two_point(int n);

/// Random interpolating instance: spherical Gaussian x_i, planted w*,
/// labels y_i = x_i' w*, uniform probabilities.
FiniteSumQuadratic make_random_interpolating(int n, int d, RngStream& rng);

double full_value(const FiniteSumQuadratic& p, const Vector& w);
Vector full_grad(const FiniteSumQuadratic& p, const Vector& w);

/// Value and gradient of one component at w.
OracleSample component_sample(const FiniteSumQuadratic& p, const Vector& w,
                              std::size_t index);

/// Draws a component index by inverse CDF and evaluates it at w.
OracleSample sample_grad(const FiniteSumQuadratic& p, const Vector& w,
                         RngStream& rng);

/// Exact E ||grad f(w, z)||^2, or the D^{-1}-norm version when precond_inv
/// (the inverse preconditioner D^{-1}) is given.
double exact_sgrad_second_moment(const FiniteSumQuadratic& p, const Vector& w,
                                 const SymMatrix* precond_inv = nullptr);

/// True iff every component gradient vanishes (norm <= tol) at the
/// reference minimizer.
bool check_interpolation(const FiniteSumQuadratic& p, double tol);

}  // namespace sagdlab
