#include "sagdlab/estimating.hpp"

#include <cmath>
#include <stdexcept>

namespace sagdlab {

EsLedger make_ledger(const Vector& w0, double f_w0, double gamma0, double mu) {
  if (gamma0 <= 0.0) {
    throw std::invalid_argument("make_ledger: gamma0 must be positive");
  }
  if (mu < 0.0) {
    throw std::invalid_argument("make_ledger: mu must be nonnegative");
  }
  return {gamma0, 1.0, 0.0, mu, w0, f_w0, 0};
}

double solve_alpha(double gamma, double mu, double eta) {
  if (eta <= 0.0 || gamma <= 0.0) {
    throw std::invalid_argument("solve_alpha: eta and gamma must be positive");
  }
  if (mu > 0.0 && eta >= 1.0 / mu) {
    throw std::domain_error("solve_alpha: eta >= 1/mu, alpha would reach 1");
  }
  // (1/eta) a^2 + (gamma - mu) a - gamma = 0. The constant term is negative,
  // so the roots have opposite signs; pick the positive one via the
  // cancellation-free branch.
  const double a = 1.0 / eta;
  const double b = gamma - mu;
  const double c = -gamma;
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  const double q = -0.5 * (b + (b >= 0.0 ? disc : -disc));
  const double alpha = b >= 0.0 ? c / q : q / a;
  return alpha;
}

Vector y_from(const EsLedger& ledger, const Vector& w) {
  const double alpha = ledger.alpha;
  const double gamma_next = (1.0 - alpha) * ledger.gamma + alpha * ledger.mu;
  return (alpha * ledger.gamma * ledger.v + gamma_next * w) /
         (ledger.gamma + alpha * ledger.mu);
}

EsLedger ledger_step(const EsLedger& ledger, double eta, const Vector& y,
                     const Vector& g_for_v, double f_y) {
  const double alpha = solve_alpha(ledger.gamma, ledger.mu, eta);
  const double gamma_next = (1.0 - alpha) * ledger.gamma + alpha * ledger.mu;
  const double lambda_next = (1.0 - alpha) * ledger.lambda;
  const Vector v_next = ((1.0 - alpha) * ledger.gamma * ledger.v +
                         alpha * ledger.mu * y - alpha * g_for_v) /
                        gamma_next;
  const Vector y_minus_v = y - ledger.v;
  const double phi_star_next =
      (1.0 - alpha) * ledger.phi_star + alpha * f_y -
      (alpha * alpha / (2.0 * gamma_next)) * g_for_v.squaredNorm() +
      (alpha * (1.0 - alpha) * ledger.gamma / gamma_next) *
          (0.5 * ledger.mu * y_minus_v.squaredNorm() - g_for_v.dot(y_minus_v));
  return {gamma_next, lambda_next, alpha,   ledger.mu,
          v_next,     phi_star_next, ledger.k + 1};
}

double lambda_bound(int k, double eta_min, double mu, double gamma0) {
  if (k < 0 || eta_min <= 0.0) {
    throw std::invalid_argument("lambda_bound: invalid inputs");
  }
  if (mu > 0.0 && std::abs(gamma0 - mu) <= 1e-12 * mu) {
    return std::pow(1.0 - std::sqrt(eta_min * mu), k);
  }
  if (gamma0 > mu && gamma0 < mu + 3.0 / eta_min) {
    return 4.0 / (eta_min * (gamma0 - mu) * (k + 1.0) * (k + 1.0));
  }
  throw std::invalid_argument("lambda_bound: gamma0 outside both regimes");
}

double estimating_inequality_check(const EsLedger& ledger, double phi0_at,
                                   double f_at, double phi_k_at) {
  return (1.0 - ledger.lambda) * f_at + ledger.lambda * phi0_at - phi_k_at;
}

}  // namespace sagdlab
