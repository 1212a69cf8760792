#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sagdlab/constants.hpp"
#include "sagdlab/optimizers.hpp"

using namespace sagdlab;

TEST_CASE("sgd_step and preconditioned_sgd_step basics") {
  Vector w(2), g(2);
  w << 1.0, 2.0;
  g << 0.5, -1.0;
  const Vector next = sgd_step(w, g, 0.2);
  CHECK(next[0] == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(next[1] == doctest::Approx(2.2).epsilon(1e-15));
  CHECK_THROWS_AS(sgd_step(w, g, 0.0), std::invalid_argument);

  Vector diag(2);
  diag << 2.0, 0.5;
  const Vector pnext = preconditioned_sgd_step(w, SymMatrix::diagonal(diag), g, 0.2);
  CHECK(pnext[0] == doctest::Approx(1.0 - 0.2 * 2.0 * 0.5).epsilon(1e-15));
  CHECK(pnext[1] == doctest::Approx(2.0 - 0.2 * 0.5 * -1.0).epsilon(1e-15));
  Vector bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(preconditioned_sgd_step(w, SymMatrix::diagonal(bad), g, 0.2),
                  std::domain_error);
}

TEST_CASE("momentum and estimating-sequence forms agree deterministically") {
  const FiniteSumQuadratic p = make_two_point(10);
  const ConstantsReport c = compute_constants(p);
  const double mu = c.strong_convexity;
  const double eta = 1.0 / (c.strong_growth * c.smoothness);
  const StepSchedule schedule = StepSchedule::constant(eta);

  Vector w0(2);
  w0 << 1.0, -1.0;
  MomentumState mom = make_momentum_state(w0, mu, mu, eta);
  EsState es = make_es_state(p, w0, mu, mu, EsMode::deterministic);
  RngStream unused_a(0), unused_b(0);
  for (int k = 0; k < 100; ++k) {
    mom = momentum_agd_step(mom, p, schedule, mu, unused_a, false);
    es = generalized_agd_step(es, p, eta, unused_b);
    const double scale = std::max(1.0, es.w.norm());
    CHECK((mom.w - es.w).norm() / scale <= 1e-12);
  }
}

TEST_CASE("shared stream: v-update reconstruction identity, schemes diverge") {
  // With one component-index stream shared between the momentum and
  // semi-stochastic forms, the per-step identity
  //   v_{k+1} = w_k + (w_{k+1} - w_k)/alpha + (eta/alpha)(g_z - g)
  // holds exactly, while the raw iterates of the two schemes separate.
  const FiniteSumQuadratic p = make_two_point(10);
  const ConstantsReport c = compute_constants(p);
  const double mu = c.strong_convexity;
  const double eta = 1.0 / (c.strong_growth * c.smoothness);

  Vector w0(2);
  w0 << 1.0, -1.0;
  EsState es = make_es_state(p, w0, mu, mu, EsMode::semi_stochastic);
  MomentumState mom = make_momentum_state(w0, mu, mu, eta);
  RngStream rng_es(7), rng_mom(7);
  const StepSchedule schedule = StepSchedule::constant(eta);

  double max_sep = 0.0;
  for (int k = 0; k < 60; ++k) {
    EsLedger before = es.ledger;
    before.alpha = solve_alpha(before.gamma, mu, eta);
    const Vector y = y_from(before, es.w);
    // Replay the step's sample on a copy of the stream to know g_z.
    RngStream replay = rng_es;
    const Vector g_z = sample_grad(p, y, replay).grad;
    const Vector g = full_grad(p, y);

    const EsState next = generalized_agd_step(es, p, eta, rng_es);
    const Vector reconstructed =
        es.w + (next.w - es.w) / before.alpha + (eta / before.alpha) * (g_z - g);
    CHECK((next.ledger.v - reconstructed).norm() <= 1e-10);

    mom = momentum_agd_step(mom, p, schedule, mu, rng_mom);
    es = next;
    max_sep = std::max(max_sep, (mom.w - es.w).norm());
  }
  CHECK(max_sep > 1e-3);
}

TEST_CASE("every scheme fixes the minimizer") {
  const FiniteSumQuadratic p = make_two_point(10);
  Vector diag(2);
  diag << 1.0, 0.5;
  for (const std::string scheme :
       {"sgd", "agd-momentum", "agd-es-det", "agd-es-semi", "agd-es-full",
        "psgd", "pagd-es-semi"}) {
    RunSpec spec;
    spec.scheme = scheme;
    spec.iters = 25;
    spec.schedule = StepSchedule::constant(0.9);
    spec.gamma0 = 0.1;
    spec.seed = 5;
    spec.w0 = p.minimizer();
    spec.preconditioner = SymMatrix::diagonal(diag);
    const Trace t = run(p, spec);
    REQUIRE(t.rows.size() == 26);
    for (const TraceRow& row : t.rows) {
      CHECK(row.f_gap <= 1e-15);
      CHECK(row.grad_norm_sq <= 1e-15);
    }
  }
}

TEST_CASE("momentum extrapolation coefficient follows the alpha recursion") {
  const FiniteSumQuadratic p = make_two_point(10);
  const double mu = 0.1;
  const double eta = 1.0;
  const StepSchedule schedule = StepSchedule::constant(eta);
  Vector w0(2);
  w0 << 2.0, 1.0;
  MomentumState s = make_momentum_state(w0, mu, mu, eta);
  RngStream rng(1);
  for (int k = 0; k < 20; ++k) {
    const MomentumState next = momentum_agd_step(s, p, schedule, mu, rng);
    const double coef =
        s.alpha * (1.0 - s.alpha) / (s.alpha * s.alpha + next.alpha);
    const Vector expected_y = next.w + coef * (next.w - s.w);
    CHECK((next.y - expected_y).norm() <= 1e-14);
    // alpha_{k+1}^2 = (1 - alpha_{k+1}) alpha_k^2 + eta alpha_{k+1} mu
    // for a constant schedule.
    CHECK(next.alpha * next.alpha ==
          doctest::Approx((1.0 - next.alpha) * s.alpha * s.alpha +
                          eta * next.alpha * mu)
              .epsilon(1e-12));
    s = next;
  }
}

TEST_CASE("preconditioning by the Hessian solves a quadratic in one step") {
  // Newton oracle: w - H^{-1} grad f(w) hits the minimizer of a strongly
  // convex quadratic exactly. The preconditioned deterministic scheme with
  // D = H and eta = 1 reproduces it on the first primal update.
  const FiniteSumQuadratic p = make_two_point(10);
  const ConstantsReport c = compute_constants(p);
  Vector w0(2);
  w0 << 3.0, -4.0;
  const Matrix s = inv_sqrt(c.hessian);
  EsState es = make_es_state(p, w0, c.strong_convexity, c.strong_convexity,
                             EsMode::deterministic,
                             preconditioned_primal_map(SymMatrix(s * s)));
  RngStream rng(0);
  // At k = 0, v = w, so y = w0 regardless of alpha.
  const EsState next = generalized_agd_step(es, p, 1.0, rng);
  CHECK((next.w - p.minimizer()).norm() <= 1e-12);
}

TEST_CASE("run records ledger columns and the theorem envelope") {
  const FiniteSumQuadratic p = make_two_point(10);
  const ConstantsReport c = compute_constants(p);
  RunSpec spec;
  spec.scheme = "agd-es-semi";
  spec.iters = 50;
  spec.schedule = StepSchedule::constant(1.0 / (c.strong_growth * c.smoothness));
  spec.gamma0 = c.strong_convexity;
  spec.seed = 3;
  const Trace t = run(p, spec);
  REQUIRE(t.rows.size() == 51);
  CHECK(t.status == RunStatus::ok);
  CHECK(t.rows[0].lambda == 1.0);
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
    const TraceRow& r = t.rows[i];
    const TraceRow& next = t.rows[i + 1];
    CHECK(std::isfinite(r.bound));
    // gamma_{k+1} eta_k = alpha_k^2 across consecutive rows.
    CHECK(next.gamma * spec.schedule.eta(r.k) ==
          doctest::Approx(r.alpha * r.alpha).epsilon(1e-12));
    CHECK(next.lambda ==
          doctest::Approx((1.0 - r.alpha) * r.lambda).epsilon(1e-12));
  }
  // Envelope decays at the strongly convex rate from C0.
  const double eta_min = spec.schedule.eta_min();
  const double c0 = t.rows[0].bound;
  CHECK(t.rows[10].bound ==
        doctest::Approx(c0 * std::pow(1.0 - std::sqrt(eta_min * c.strong_convexity), 10))
            .epsilon(1e-12));
}

TEST_CASE("sgd rows leave ledger columns unset") {
  const FiniteSumQuadratic p = make_two_point(10);
  RunSpec spec;
  spec.scheme = "sgd";
  spec.iters = 5;
  spec.schedule = StepSchedule::constant(0.5);
  spec.gamma0 = 0.1;
  spec.seed = 1;
  const Trace t = run(p, spec);
  REQUIRE(t.rows.size() == 6);
  for (const TraceRow& r : t.rows) {
    CHECK(std::isnan(r.lambda));
    CHECK(std::isnan(r.gamma));
    CHECK(std::isnan(r.alpha));
    CHECK(std::isnan(r.phi_star));
    CHECK(std::isnan(r.bound));
  }
}

TEST_CASE("divergent step sizes are detected and flagged") {
  const FiniteSumQuadratic p = make_two_point(10);
  RunSpec spec;
  spec.scheme = "sgd";
  spec.iters = 100000;
  spec.schedule = StepSchedule::constant(25.0);  // far above 2/L_max
  spec.gamma0 = 0.1;
  spec.seed = 1;
  const Trace t = run(p, spec);
  CHECK(t.status == RunStatus::diverged);
  CHECK(t.rows.size() < 100000);
}

TEST_CASE("identical seeds give identical traces") {
  const FiniteSumQuadratic p = make_two_point(10);
  RunSpec spec;
  spec.scheme = "agd-es-full";
  spec.iters = 30;
  spec.schedule = StepSchedule::constant(0.5);
  spec.gamma0 = 0.1;
  spec.seed = 77;
  const Trace a = run(p, spec);
  const Trace b = run(p, spec);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].f_gap == b.rows[i].f_gap);
    CHECK(a.rows[i].phi_star == b.rows[i].phi_star);
  }
}
