#pragma once

#include "sagdlab/linalg.hpp"

namespace sagdlab {

/// State of the quadratic estimating sequence in canonical form:
/// phi_k(w) = phi_star + (gamma/2) ||w - v||^2, with the product weight
/// lambda_k and the mixing weight alpha solved for the current step.
///
/// The recursion is pure: ledger_step maps old state to new state and the
/// caller supplies the gradient used in the v-update, so one recursion
/// serves the deterministic, semi-stochastic, and fully stochastic modes.
struct EsLedger {
  double gamma;     // curvature of phi_k
  double lambda;    // product of (1 - alpha_i), in (0, 1]
  double alpha;     // mixing weight solved for the current step
  double mu;        // strong convexity constant, >= 0
  Vector v;         // minimizer of phi_k
  double phi_star;  // minimum value of phi_k
  int k;            // iteration index
};

/// Fresh ledger at iterate w0: phi_0(w) = f(w0) + (gamma0/2) ||w - w0||^2.
EsLedger make_ledger(const Vector& w0, double f_w0, double gamma0, double mu);

/// Root in (0, 1) of (1/eta) a^2 + (gamma - mu) a - gamma = 0, computed with
/// the cancellation-free quadratic formula. Requires eta < 1/mu (with the
/// convention 1/0 = inf).
double solve_alpha(double gamma, double mu, double eta);

/// Extrapolated query point for the step about to be taken; ledger.alpha
/// must hold the alpha solved for this step.
Vector y_from(const EsLedger& ledger, const Vector& w);

/// Advances gamma, lambda, v, phi_star by one step. g_for_v is the gradient
/// used everywhere the recursion reads grad f(y_k): the full gradient in
/// semi-stochastic mode, the sampled one in fully stochastic mode.
EsLedger ledger_step(const EsLedger& ledger, double eta, const Vector& y,
                     const Vector& g_for_v, double f_y);

/// Closed-form upper bound on lambda_k: (1 - sqrt(eta_min mu))^k when
/// gamma0 = mu > 0, else 4 / (eta_min (gamma0 - mu) (k+1)^2) when gamma0 is
/// in (mu, mu + 3/eta_min).
double lambda_bound(int k, double eta_min, double mu, double gamma0);

/// Slack of the estimating-sequence inequality at one test point:
/// (1 - lambda_k) f(w) + lambda_k phi_0(w) - phi_k(w). Nonnegative for
/// valid estimating sequences.
double estimating_inequality_check(const EsLedger& ledger, double phi0_at,
                                   double f_at, double phi_k_at);

}  // namespace sagdlab
