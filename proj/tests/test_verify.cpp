#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sagdlab/verify.hpp"

using namespace sagdlab;

namespace {

ConstantsReport dummy_constants(double mu) {
  return {0.0, 0.0, mu, 0.0, 0.0, 0.0, 0.0, SymMatrix::identity(1), false};
}

RunSpec base_spec(const FiniteSumQuadratic& p) {
  const ConstantsReport c = compute_constants(p);
  RunSpec spec;
  spec.scheme = "agd-es-semi";
  spec.iters = 80;
  spec.schedule = StepSchedule::constant(1.0 / (c.strong_growth * c.smoothness));
  spec.gamma0 = c.strong_convexity;
  spec.seed = 11;
  return spec;
}

}  // namespace

TEST_CASE("descent lemma holds with exact expectations") {
  const FiniteSumQuadratic p = make_two_point(10);
  const ConstantsReport c = compute_constants(p);
  const double eta = 1.0 / (c.strong_growth * c.smoothness);
  RngStream rng(4);
  for (int t = 0; t < 50; ++t) {
    Vector y(2);
    y << 3.0 * rng.next_gaussian(), 3.0 * rng.next_gaussian();
    const CheckReport r =
        check_descent_lemma(p, y, eta, c.strong_growth, c.smoothness);
    CHECK(r.status == CheckStatus::pass);
    CHECK(r.worst_slack >= -1e-10);
  }
}

TEST_CASE("descent lemma at the minimizer has zero slack") {
  const FiniteSumQuadratic p = make_two_point(10);
  const ConstantsReport c = compute_constants(p);
  const CheckReport r = check_descent_lemma(
      p, p.minimizer(), 1.0 / (c.strong_growth * c.smoothness),
      c.strong_growth, c.smoothness);
  CHECK(r.status == CheckStatus::pass);
  CHECK(std::abs(r.worst_slack) <= 1e-15);
}

TEST_CASE("descent lemma with understated growth constant fails") {
  // Substituting rho = 1 for a problem whose true constant is 10 makes the
  // claimed bound too strong; exact expectations expose it.
  const FiniteSumQuadratic p = make_uniform_basis(10);
  const ConstantsReport c = compute_constants(p);
  Vector y = Vector::Ones(10);
  const CheckReport r = check_descent_lemma(p, y, 1.0 / c.smoothness, 1.0,
                                            c.smoothness);
  CHECK(r.status == CheckStatus::fail);
}

TEST_CASE("local upper bound: deterministic scheme, pointwise") {
  const FiniteSumQuadratic p = make_two_point(10);
  RunSpec spec = base_spec(p);
  spec.scheme = "agd-es-det";
  const CheckReport r = check_local_upper_bound(p, spec, 1);
  CHECK(r.status == CheckStatus::pass);
}

TEST_CASE("local upper bound: equality at k = 0") {
  // phi_0(w_0) = f(w_0), so the k = 0 difference is exactly zero and the
  // worst slack over a deterministic run is at most the k = 0 allowance.
  const FiniteSumQuadratic p = make_two_point(10);
  RunSpec spec = base_spec(p);
  spec.scheme = "agd-es-det";
  spec.iters = 0;
  const CheckReport r = check_local_upper_bound(p, spec, 1);
  CHECK(r.status == CheckStatus::pass);
  CHECK(r.worst_slack == doctest::Approx(1e-10).epsilon(1e-12));
}

TEST_CASE("local upper bound: stochastic scheme within Monte Carlo error") {
  const FiniteSumQuadratic p = make_two_point(10);
  const CheckReport r = check_local_upper_bound(p, base_spec(p), 200);
  CHECK(r.status == CheckStatus::pass);
}

TEST_CASE("deterministic equivalence of the two forms") {
  const FiniteSumQuadratic p = make_two_point(10);
  const RunSpec spec = base_spec(p);
  const CheckReport r = check_equivalence(p, 100, 0,
                                          EquivalenceMode::deterministic,
                                          spec.schedule, spec.gamma0);
  CHECK(r.status == CheckStatus::pass);
}

TEST_CASE("shared-stream reconstruction passes while iterates diverge") {
  const FiniteSumQuadratic p = make_two_point(10);
  const RunSpec spec = base_spec(p);
  const CheckReport r = check_equivalence(
      p, 100, 21, EquivalenceMode::shared_stream_stochastic, spec.schedule,
      spec.gamma0);
  CHECK(r.status == CheckStatus::pass);
  REQUIRE(r.details.size() == 2);
  CHECK(r.details[0].label == "worst_residual");
  CHECK(r.details[0].value <= 1e-10);
  CHECK(r.details[1].label == "raw_scheme_divergence");
  CHECK(r.details[1].value > 1e-3);
}

TEST_CASE("lambda bound check passes in both regimes") {
  const StepSchedule schedule = StepSchedule::constant(0.8);
  CHECK(check_lambda_bounds(0.25, 0.25, schedule, 5000).status ==
        CheckStatus::pass);
  CHECK(check_lambda_bounds(1.5, 0.0, schedule, 5000).status ==
        CheckStatus::pass);
}

TEST_CASE("lambda product is tracked exactly when gamma0 = mu") {
  // alpha = sqrt(eta mu) = 0.5 exactly for eta = 1, mu = 0.25, so the
  // recursion and the closed-form product agree bit for bit.
  const CheckReport r =
      check_lambda_bounds(0.25, 0.25, StepSchedule::constant(1.0), 60);
  CHECK(r.status == CheckStatus::pass);
  CHECK(r.details.empty());
}

TEST_CASE("rate fit: synthetic linear decay recovers the contraction") {
  std::vector<TraceRow> rows;
  const double rate = 0.93;
  double gap = 1.0;
  for (int k = 0; k <= 300; ++k) {
    TraceRow row{};
    row.k = k;
    row.f_gap = gap;
    row.bound = std::nan("");
    rows.push_back(row);
    gap *= rate;
  }
  const ConstantsReport c = dummy_constants(0.1);
  const RateFit fit = fit_rate(rows, "linear", c, 0.1, 0.49);
  CHECK(fit.fitted_rate == doctest::Approx(rate).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.theoretical_rate ==
        doctest::Approx(1.0 - std::sqrt(0.49 * 0.1)).epsilon(1e-12));
  CHECK_FALSE(fit.flagged);
}

TEST_CASE("rate fit: synthetic 1/k^2 decay recovers slope -2") {
  std::vector<TraceRow> rows;
  for (int k = 0; k <= 300; ++k) {
    TraceRow row{};
    row.k = k;
    row.f_gap = 1.0 / ((k + 1.0) * (k + 1.0));
    row.bound = 4.0 / ((k + 1.0) * (k + 1.0));  // generous envelope
    rows.push_back(row);
  }
  const ConstantsReport c = dummy_constants(0.0);
  const RateFit fit = fit_rate(rows, "sublinear", c, 1.0, 1.0);
  CHECK(fit.fitted_rate == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(fit.envelope_ok);
  CHECK(fit.theoretical_rate == -2.0);
}

TEST_CASE("rate fit: envelope violations are reported") {
  std::vector<TraceRow> rows;
  for (int k = 0; k <= 100; ++k) {
    TraceRow row{};
    row.k = k;
    row.f_gap = 1.0 / (k + 1.0);              // too slow
    row.bound = 1.0 / ((k + 1.0) * (k + 1.0));
    rows.push_back(row);
  }
  const ConstantsReport c = dummy_constants(0.0);
  const RateFit fit = fit_rate(rows, "sublinear", c, 1.0, 1.0);
  CHECK_FALSE(fit.envelope_ok);
}

TEST_CASE("rate fit: short windows are flagged") {
  std::vector<TraceRow> rows;
  for (int k = 0; k <= 10; ++k) {
    TraceRow row{};
    row.k = k;
    row.f_gap = std::pow(0.5, k);
    row.bound = std::nan("");
    rows.push_back(row);
  }
  const ConstantsReport c = dummy_constants(1.0);
  CHECK(fit_rate(rows, "linear", c, 1.0, 0.25).flagged);
}

TEST_CASE("matrix descent: D = I reduces to the scalar progress condition") {
  const FiniteSumQuadratic p = make_two_point(10);
  const MatrixConstantsReport mc = matrix_constants(p, SymMatrix::identity(2));
  const double eta = 1.0 / (mc.strong_growth * mc.smoothness);
  RngStream rng(8);
  for (int t = 0; t < 20; ++t) {
    Vector y(2);
    y << rng.next_gaussian(), rng.next_gaussian();
    const CheckReport r =
        check_matrix_descent(p, SymMatrix::identity(2), y, eta, mc);
    CHECK(r.status == CheckStatus::pass);
  }
}

TEST_CASE("matrix descent: nontrivial diagonal preconditioner") {
  const FiniteSumQuadratic p = make_two_point(10);
  Vector diag(2);
  diag << 1.0, 0.25;  // 0 < D <= I
  const SymMatrix d = SymMatrix::diagonal(diag);
  const MatrixConstantsReport mc = matrix_constants(p, d);
  const double eta = 1.0 / (mc.strong_growth * mc.smoothness);
  RngStream rng(9);
  for (int t = 0; t < 20; ++t) {
    Vector y(2);
    y << rng.next_gaussian(), rng.next_gaussian();
    const CheckReport r = check_matrix_descent(p, d, y, eta, mc);
    CHECK(r.status == CheckStatus::pass);
  }
}

TEST_CASE("matrix descent rejects invalid preconditioners and step sizes") {
  const FiniteSumQuadratic p = make_two_point(10);
  Vector big(2);
  big << 2.0, 1.0;  // not <= I
  const MatrixConstantsReport mc = matrix_constants(p, SymMatrix::identity(2));
  CHECK_THROWS_AS(check_matrix_descent(p, SymMatrix::diagonal(big),
                                       p.minimizer(), 0.1, mc),
                  std::domain_error);
  const double eta_cap = 1.0 / (mc.strong_growth * mc.smoothness);
  CHECK_THROWS_AS(check_matrix_descent(p, SymMatrix::identity(2),
                                       p.minimizer(), 2.0 * eta_cap, mc),
                  std::invalid_argument);
}
