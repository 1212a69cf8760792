#include "sagdlab/verify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sagdlab {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::flagged: return "flagged";
  }
  return "unknown";
}

namespace {

constexpr double kExactTol = 1e-10;

double exact_expected_value_after_step(const FiniteSumQuadratic& p,
                                       const Vector& y, double eta,
                                       const Matrix* d_inv) {
  double expected = 0.0;
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    const Vector g = component_sample(p, y, i).grad;
    const Vector w_next = d_inv == nullptr ? Vector(y - eta * g)
                                           : Vector(y - eta * (*d_inv * g));
    expected += p.probs()[i] * full_value(p, w_next);
  }
  return expected;
}

}  // namespace

CheckReport check_descent_lemma(const FiniteSumQuadratic& p, const Vector& y,
                                double eta, double rho, double smoothness) {
  if (eta <= 0.0) {
    throw std::invalid_argument("check_descent_lemma: eta must be positive");
  }
  const double f_y = full_value(p, y);
  const double grad_sq = full_grad(p, y).squaredNorm();
  const double expected = exact_expected_value_after_step(p, y, eta, nullptr);

  CheckReport report{"descent-lemma", CheckStatus::pass, 0.0, {}};
  const double descent_slack =
      f_y - eta * (1.0 - 0.5 * eta * rho * smoothness) * grad_sq - expected;
  report.details.push_back({"descent_slack", descent_slack});
  report.worst_slack = descent_slack;
  if (eta <= 1.0 / (rho * smoothness) + 1e-15) {
    const double progress_slack = f_y - 0.5 * eta * grad_sq - expected;
    report.details.push_back({"progress_slack", progress_slack});
    report.worst_slack = std::min(report.worst_slack, progress_slack);
  }
  report.status =
      report.worst_slack >= -kExactTol ? CheckStatus::pass : CheckStatus::fail;
  return report;
}

CheckReport check_local_upper_bound(const FiniteSumQuadratic& p,
                                    const RunSpec& base, int replicates) {
  if (!is_es_scheme(base.scheme)) {
    throw std::invalid_argument(
        "check_local_upper_bound: scheme must maintain an estimating sequence");
  }
  if (replicates < 1) {
    throw std::invalid_argument("check_local_upper_bound: replicates must be >= 1");
  }
  const bool deterministic = base.scheme == "agd-es-det";
  const int reps = deterministic ? 1 : replicates;
  const double fstar = p.optimal_value();

  std::vector<double> sum(base.iters + 1, 0.0);
  std::vector<double> sum_sq(base.iters + 1, 0.0);
  bool any_diverged = false;
  for (int r = 0; r < reps; ++r) {
    RunSpec spec = base;
    spec.seed = RngStream::derived(base.seed, r).seed();
    const Trace trace = run(p, spec);
    if (trace.status == RunStatus::diverged) {
      any_diverged = true;
      continue;
    }
    for (const TraceRow& row : trace.rows) {
      const double diff = (row.f_gap + fstar) - row.phi_star;
      sum[row.k] += diff;
      sum_sq[row.k] += diff * diff;
    }
  }

  CheckReport report{"local-upper-bound", CheckStatus::pass,
                     std::numeric_limits<double>::infinity(), {}};
  for (int k = 0; k <= base.iters; ++k) {
    const double mean = sum[k] / reps;
    double allowance = kExactTol;
    if (!deterministic && reps > 1) {
      const double var =
          std::max(0.0, (sum_sq[k] - reps * mean * mean) / (reps - 1.0));
      allowance = 3.0 * std::sqrt(var / reps);
    }
    const double slack = allowance - mean;
    report.worst_slack = std::min(report.worst_slack, slack);
    if (slack < 0.0) {
      report.status = CheckStatus::fail;
      report.details.push_back({"violated_at_k_" + std::to_string(k), slack});
    }
  }
  if (any_diverged && report.status == CheckStatus::pass) {
    report.status = CheckStatus::flagged;
    report.details.push_back({"diverged_replicates", 1.0});
  }
  return report;
}

CheckReport check_equivalence(const FiniteSumQuadratic& p, int iters,
                              std::uint64_t seed, EquivalenceMode mode,
                              const StepSchedule& schedule, double gamma0) {
  const ConstantsReport constants = compute_constants(p);
  const double mu = constants.strong_convexity;
  const Vector w0 =
      p.minimizer() + Vector::Ones(p.dim()) / std::sqrt(double(p.dim()));

  if (mode == EquivalenceMode::deterministic) {
    RngStream rng(seed);  // never drawn from in deterministic mode
    EsState es = make_es_state(p, w0, gamma0, mu, EsMode::deterministic);
    MomentumState mom = make_momentum_state(w0, gamma0, mu, schedule.eta(0));
    double worst = 0.0;
    for (int k = 0; k < iters; ++k) {
      es = generalized_agd_step(es, p, schedule.eta(k), rng);
      mom = momentum_agd_step(mom, p, schedule, mu, rng, /*stochastic=*/false);
      const double rel = (es.w - mom.w).norm() / (1.0 + es.w.norm());
      worst = std::max(worst, rel);
    }
    CheckReport report{"equivalence-deterministic", CheckStatus::pass,
                       1e-8 - worst, {{"max_relative_discrepancy", worst}}};
    report.status = worst <= 1e-8 ? CheckStatus::pass : CheckStatus::fail;
    return report;
  }

  // Shared-stream mode: run the semi-stochastic scheme and verify at each
  // step that its v-update is the momentum reconstruction plus the exact
  // error term (eta/alpha)(grad f(y,z) - grad f(y)). A momentum run on an
  // identical index stream provides the raw divergence figure.
  RngStream rng_es(seed);
  RngStream rng_mom(seed);
  EsState es = make_es_state(p, w0, gamma0, mu, EsMode::semi_stochastic);
  MomentumState mom = make_momentum_state(w0, gamma0, mu, schedule.eta(0));
  double worst_residual = 0.0;
  double raw_discrepancy = 0.0;
  bool alpha_in_range = true;
  for (int k = 0; k < iters; ++k) {
    const double eta = schedule.eta(k);
    EsLedger ledger = es.ledger;
    ledger.alpha = solve_alpha(ledger.gamma, mu, eta);
    if (!(ledger.alpha > 0.0 && ledger.alpha < 1.0)) alpha_in_range = false;
    const double alpha = ledger.alpha;
    const Vector y = y_from(ledger, es.w);
    const Vector g_det = full_grad(p, y);
    const Vector g_stoch = sample_grad(p, y, rng_es).grad;
    const Vector w_next = y - eta * g_stoch;
    const EsLedger next = ledger_step(ledger, eta, y, g_det, full_value(p, y));
    const Vector reconstruction = es.w + (w_next - es.w) / alpha +
                                  (eta / alpha) * (g_stoch - g_det);
    worst_residual = std::max(worst_residual, (next.v - reconstruction).norm());
    es.ledger = next;
    es.w = w_next;
    es.y = y;
    mom = momentum_agd_step(mom, p, schedule, mu, rng_mom);
    raw_discrepancy = std::max(raw_discrepancy, (mom.w - es.w).norm());
  }
  CheckReport report{"equivalence-shared-stream", CheckStatus::pass,
                     1e-10 - worst_residual,
                     {{"worst_residual", worst_residual},
                      {"raw_scheme_divergence", raw_discrepancy}}};
  if (!alpha_in_range) {
    report.status = CheckStatus::flagged;
  } else {
    report.status =
        worst_residual <= 1e-10 ? CheckStatus::pass : CheckStatus::fail;
  }
  return report;
}

RateFit fit_rate(const std::vector<TraceRow>& mean_rows,
                 const std::string& model, const ConstantsReport& constants,
                 double gamma0, double eta_min) {
  if (mean_rows.empty()) {
    throw std::invalid_argument("fit_rate: empty trace");
  }
  const double gap0 = mean_rows.front().f_gap;
  const int n = static_cast<int>(mean_rows.size());
  // Truncate at the numerical floor first, then skip the initial 10% of the
  // usable region so the window never collapses on long traces that converge
  // early.
  int end = n;
  for (int k = 1; k < n; ++k) {
    if (!(mean_rows[k].f_gap > 1e-14 * gap0)) {
      end = k;
      break;
    }
  }
  const int begin = static_cast<int>(std::ceil(0.1 * (end - 1)));

  RateFit fit;
  fit.model = model;
  fit.window_begin = begin;
  fit.window_end = end;
  fit.flagged = (end - begin) < 20;
  fit.envelope_ok = true;

  // Least squares of log(gap) against k (linear) or log(k+1) (sublinear).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  const int count = std::max(end - begin, 0);
  for (int k = begin; k < end; ++k) {
    const double x = model == "linear" ? double(k) : std::log(k + 1.0);
    const double yv = std::log(mean_rows[k].f_gap);
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    syy += yv * yv;
  }
  double slope = 0.0;
  double r2 = 0.0;
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    slope = (count * sxy - sx * sy) / denom;
    const double ss_tot = syy - sy * sy / count;
    const double ss_res = ss_tot - slope * (sxy - sx * sy / count);
    r2 = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  }
  fit.r_squared = r2;

  if (model == "linear") {
    fit.fitted_rate = std::exp(slope);
    fit.theoretical_rate =
        1.0 - std::sqrt(eta_min * constants.strong_convexity);
  } else if (model == "sublinear") {
    fit.fitted_rate = slope;
    fit.theoretical_rate = -2.0;
    for (const TraceRow& row : mean_rows) {
      if (std::isfinite(row.bound) && row.f_gap > 1.05 * row.bound) {
        fit.envelope_ok = false;
        break;
      }
    }
  } else {
    throw std::invalid_argument("fit_rate: unknown model " + model);
  }
  return fit;
}

CheckReport check_lambda_bounds(double gamma0, double mu,
                                const StepSchedule& schedule, int k_max) {
  CheckReport report{"lambda-bounds", CheckStatus::pass,
                     std::numeric_limits<double>::infinity(), {}};
  const bool sc_regime = mu > 0.0 && gamma0 == mu;
  double gamma = gamma0;
  double lambda = 1.0;
  double product = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    const double bound = lambda_bound(k, schedule.eta_min(), mu, gamma0);
    const double slack = bound + 1e-12 - lambda;
    report.worst_slack = std::min(report.worst_slack, slack);
    if (slack < 0.0) {
      report.status = CheckStatus::fail;
      report.details.push_back({"bound_violated_at_k_" + std::to_string(k), slack});
    }
    if (sc_regime && lambda != product) {
      report.status = CheckStatus::fail;
      report.details.push_back(
          {"product_mismatch_at_k_" + std::to_string(k), lambda - product});
    }
    if (k == k_max) break;
    const double eta = schedule.eta(k);
    const double alpha = solve_alpha(gamma, mu, eta);
    gamma = (1.0 - alpha) * gamma + alpha * mu;
    lambda *= 1.0 - alpha;
    product *= 1.0 - std::sqrt(eta * mu);
  }
  return report;
}

CheckReport check_matrix_descent(const FiniteSumQuadratic& p,
                                 const SymMatrix& d, const Vector& y,
                                 double eta,
                                 const MatrixConstantsReport& report_d) {
  const EigDecomposition de = sym_eig(d);
  if (de.eigenvalues.minCoeff() <= 1e-12 * std::abs(de.eigenvalues.maxCoeff()) ||
      !psd_leq(d, SymMatrix::identity(d.dim()), 1e-10)) {
    throw std::domain_error("check_matrix_descent: requires 0 < D <= I");
  }
  const double eta_cap = 1.0 / (report_d.strong_growth * report_d.smoothness);
  if (eta > eta_cap + 1e-15) {
    throw std::invalid_argument(
        "check_matrix_descent: eta exceeds 1/(rho_D L_D)");
  }
  const Matrix s = inv_sqrt(d);
  const Matrix d_inv = s * s;
  const double expected = exact_expected_value_after_step(p, y, eta, &d_inv);
  const double slack = full_value(p, y) -
                       0.5 * eta * full_grad(p, y).squaredNorm() - expected;
  CheckReport report{"matrix-descent", CheckStatus::pass, slack,
                     {{"progress_slack", slack}}};
  report.status = slack >= -kExactTol ? CheckStatus::pass : CheckStatus::fail;
  return report;
}

}  // namespace sagdlab
