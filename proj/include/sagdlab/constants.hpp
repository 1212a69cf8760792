#pragma once

#include "sagdlab/linalg.hpp"
#include "sagdlab/problems.hpp"
#include "sagdlab/rng.hpp"

namespace sagdlab {

/// Exact problem constants for a finite-support interpolating quadratic.
/// All pencil values are exact eigenvalue computations, not estimates.
struct ConstantsReport {
  double smoothness;        // L = lambda_max(H)
  double max_smoothness;    // L_max = max_i ||x_i||^2
  double strong_convexity;  // mu = lambda_min(H), 0 when rank deficient
  double strong_growth;     // rho
  double weak_growth;       // alpha from the weak growth condition
  double kappa;             // condition-number-style constant, inf when mu = 0
  double kappa_tilde;       // statistical condition number
  SymMatrix hessian;
  bool rank_deficient;      // constants computed on range(H) only
};

/// Constants of the problem in the ||.||_D geometry.
struct MatrixConstantsReport {
  double smoothness;        // L_D
  double strong_convexity;  // mu_D
  double strong_growth;     // rho_D
  SymMatrix preconditioner;
};

/// Computes every constant exactly. Requires an interpolating problem; for
/// interpolating quadratics both sides of the strong growth inequality are
/// quadratic forms in w - w*, so rho is a maximal pencil eigenvalue.
ConstantsReport compute_constants(const FiniteSumQuadratic& p);

/// Empirical lower bound on rho: max of the exact second moment over the
/// squared full-gradient norm at random points around the minimizer.
/// Directions are uniform on the sphere at radii {0.1, 1, 10}; by
/// homogeneity the ratio is radius-invariant for quadratics.
double estimate_rho_empirical(const FiniteSumQuadratic& p, int trials,
                              RngStream& rng);

/// Constants of the problem after the congruence w -> D^{1/2} w, i.e. on
/// the transformed data x_i -> D^{-1/2} x_i.
MatrixConstantsReport matrix_constants(const FiniteSumQuadratic& p,
                                       const SymMatrix& d);

}  // namespace sagdlab
