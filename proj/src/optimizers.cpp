#include "sagdlab/optimizers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sagdlab/constants.hpp"

namespace sagdlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDivergenceFactor = 1e12;
}  // namespace

StepSchedule StepSchedule::constant(double eta) {
  if (eta <= 0.0) throw std::invalid_argument("StepSchedule: eta must be positive");
  StepSchedule s;
  s.etas_ = {eta};
  s.eta_min_ = eta;
  return s;
}

StepSchedule StepSchedule::sequence(std::vector<double> etas) {
  if (etas.empty()) throw std::invalid_argument("StepSchedule: empty sequence");
  StepSchedule s;
  s.eta_min_ = etas.front();
  for (double e : etas) {
    if (e <= 0.0) throw std::invalid_argument("StepSchedule: eta must be positive");
    s.eta_min_ = std::min(s.eta_min_, e);
  }
  s.etas_ = std::move(etas);
  return s;
}

double StepSchedule::eta(int k) const {
  if (k < 0) throw std::invalid_argument("StepSchedule: negative index");
  const std::size_t i = std::min<std::size_t>(k, etas_.size() - 1);
  return etas_[i];
}

PrimalMap gradient_primal_map() {
  return [](double eta, const Vector& y, const Vector& g) -> Vector {
    return y - eta * g;
  };
}

PrimalMap preconditioned_primal_map(const SymMatrix& d_inv) {
  const Matrix m = d_inv.mat();
  return [m](double eta, const Vector& y, const Vector& g) -> Vector {
    return y - eta * (m * g);
  };
}

Vector sgd_step(const Vector& w, const Vector& g, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("sgd_step: eta must be positive");
  return w - eta * g;
}

Vector preconditioned_sgd_step(const Vector& w, const SymMatrix& d_inv,
                               const Vector& g, double eta) {
  if (eta <= 0.0) {
    throw std::invalid_argument("preconditioned_sgd_step: eta must be positive");
  }
  const EigDecomposition e = sym_eig(d_inv);
  if (e.eigenvalues.minCoeff() <= 1e-12 * e.eigenvalues.maxCoeff()) {
    throw std::domain_error(
        "preconditioned_sgd_step: preconditioner is not positive definite");
  }
  return w - eta * (d_inv.mat() * g);
}

MomentumState make_momentum_state(const Vector& w0, double gamma0, double mu,
                                  double eta0) {
  const double alpha0 = solve_alpha(gamma0, mu, eta0);
  return {w0, w0, w0, alpha0, alpha0, eta0, 0};
}

MomentumState momentum_agd_step(const MomentumState& state,
                                const FiniteSumQuadratic& p,
                                const StepSchedule& schedule, double mu,
                                RngStream& rng, bool stochastic) {
  const Vector g = stochastic ? sample_grad(p, state.y, rng).grad
                              : full_grad(p, state.y);
  const Vector w_next = state.y - state.eta * g;
  const double eta_next = schedule.eta(state.k + 1);
  // alpha_{k+1}^2 = (1 - alpha_{k+1}) alpha_k^2 (eta_{k+1}/eta_k)
  //                 + eta_{k+1} alpha_{k+1} mu,
  // i.e. solve_alpha at gamma_{k+1} = alpha_k^2 / eta_k.
  const double gamma_next = state.alpha * state.alpha / state.eta;
  const double alpha_next = solve_alpha(gamma_next, mu, eta_next);
  const double coef = state.alpha * (1.0 - state.alpha) /
                      (state.alpha * state.alpha + alpha_next);
  const Vector y_next = w_next + coef * (w_next - state.w);
  return {w_next, state.w, y_next, alpha_next, state.alpha, eta_next,
          state.k + 1};
}

EsState make_es_state(const FiniteSumQuadratic& p, const Vector& w0,
                      double gamma0, double mu, EsMode mode,
                      PrimalMap primal_map) {
  EsLedger ledger = make_ledger(w0, full_value(p, w0), gamma0, mu);
  return {w0, w0, std::move(ledger), mode, std::move(primal_map)};
}

EsState generalized_agd_step(const EsState& state, const FiniteSumQuadratic& p,
                             double eta, RngStream& rng) {
  EsLedger ledger = state.ledger;
  ledger.alpha = solve_alpha(ledger.gamma, ledger.mu, eta);
  const Vector y = y_from(ledger, state.w);
  Vector g_sampled;
  if (state.mode != EsMode::deterministic) {
    g_sampled = sample_grad(p, y, rng).grad;
  }
  const Vector g_full = state.mode == EsMode::fully_stochastic
                            ? Vector()
                            : full_grad(p, y);
  const Vector& g_w =
      state.mode == EsMode::deterministic ? g_full : g_sampled;
  const Vector& g_v =
      state.mode == EsMode::fully_stochastic ? g_sampled : g_full;
  const Vector w_next = state.primal_map(eta, y, g_w);
  EsLedger next = ledger_step(ledger, eta, y, g_v, full_value(p, y));
  return {w_next, y, std::move(next), state.mode, state.primal_map};
}

bool is_es_scheme(const std::string& scheme) {
  return scheme == "agd-es-det" || scheme == "agd-es-semi" ||
         scheme == "agd-es-full" || scheme == "pagd-es-semi";
}

namespace {

EsMode mode_of(const std::string& scheme) {
  if (scheme == "agd-es-det") return EsMode::deterministic;
  if (scheme == "agd-es-semi" || scheme == "pagd-es-semi") {
    return EsMode::semi_stochastic;
  }
  return EsMode::fully_stochastic;
}

}  // namespace

Trace run(const FiniteSumQuadratic& p, const RunSpec& spec) {
  if (spec.iters < 0) throw std::invalid_argument("run: iters must be >= 0");
  const bool preconditioned = spec.scheme == "psgd" || spec.scheme == "pagd-es-semi";
  if (preconditioned && !spec.preconditioner.has_value()) {
    throw std::invalid_argument("run: scheme requires a preconditioner");
  }
  const ConstantsReport constants = compute_constants(p);
  const double mu = constants.strong_convexity;
  const double fstar = p.optimal_value();
  const Vector w0 = spec.w0.has_value()
                        ? *spec.w0
                        : Vector(p.minimizer() +
                                 Vector::Ones(p.dim()) / std::sqrt(double(p.dim())));
  const double gap0 = full_value(p, w0) - fstar;

  // Theorem envelope constant phi_0(w*) - f*; the envelope itself is only
  // defined for estimating-sequence schemes in a valid gamma0 regime.
  const double envelope_c0 =
      gap0 + 0.5 * spec.gamma0 * (w0 - p.minimizer()).squaredNorm();
  const bool sc_regime = mu > 0.0 && std::abs(spec.gamma0 - mu) <= 1e-12 * mu;
  const bool cv_regime = spec.gamma0 > mu &&
                         spec.gamma0 < mu + 3.0 / spec.schedule.eta_min();
  const bool has_envelope = is_es_scheme(spec.scheme) && (sc_regime || cv_regime);

  std::optional<Matrix> d_inv_mat;
  if (preconditioned) {
    const Matrix s = inv_sqrt(*spec.preconditioner);
    d_inv_mat = s * s;
  }

  RngStream rng(spec.seed);
  Trace trace;
  trace.rows.reserve(spec.iters + 1);

  auto push_row = [&](int k, const Vector& w, const Vector& y, double lambda,
                      double gamma, double alpha, double phi_star) {
    const double gap = full_value(p, w) - fstar;
    const double bound =
        has_envelope
            ? lambda_bound(k, spec.schedule.eta_min(), mu, spec.gamma0) * envelope_c0
            : kNaN;
    trace.rows.push_back({k, gap, full_grad(p, y).squaredNorm(),
                          exact_sgrad_second_moment(p, y), lambda, gamma,
                          alpha, phi_star, bound});
    return gap;
  };

  if (spec.scheme == "sgd" || spec.scheme == "psgd") {
    Vector w = w0;
    for (int k = 0;; ++k) {
      const double gap = push_row(k, w, w, kNaN, kNaN, kNaN, kNaN);
      if (gap > kDivergenceFactor * gap0) {
        trace.status = RunStatus::diverged;
        break;
      }
      if (k == spec.iters) break;
      const Vector g = sample_grad(p, w, rng).grad;
      w = preconditioned ? Vector(w - spec.schedule.eta(k) * (*d_inv_mat * g))
                         : Vector(w - spec.schedule.eta(k) * g);
    }
    return trace;
  }

  if (spec.scheme == "agd-momentum") {
    MomentumState state = make_momentum_state(w0, spec.gamma0, mu,
                                              spec.schedule.eta(0));
    for (int k = 0;; ++k) {
      const double gap =
          push_row(k, state.w, state.y, kNaN, kNaN, kNaN, kNaN);
      if (gap > kDivergenceFactor * gap0) {
        trace.status = RunStatus::diverged;
        break;
      }
      if (k == spec.iters) break;
      state = momentum_agd_step(state, p, spec.schedule, mu, rng);
    }
    return trace;
  }

  if (!is_es_scheme(spec.scheme)) {
    throw std::invalid_argument("run: unknown scheme " + spec.scheme);
  }

  PrimalMap map = preconditioned
                      ? preconditioned_primal_map(SymMatrix(*d_inv_mat))
                      : gradient_primal_map();
  EsState state = make_es_state(p, w0, spec.gamma0, mu, mode_of(spec.scheme),
                                std::move(map));
  for (int k = 0;; ++k) {
    const double eta = spec.schedule.eta(k);
    state.ledger.alpha = solve_alpha(state.ledger.gamma, mu, eta);
    const Vector y = y_from(state.ledger, state.w);
    const double gap = push_row(k, state.w, y, state.ledger.lambda,
                                state.ledger.gamma, state.ledger.alpha,
                                state.ledger.phi_star);
    if (gap > kDivergenceFactor * gap0) {
      trace.status = RunStatus::diverged;
      break;
    }
    if (k == spec.iters) break;
    state = generalized_agd_step(state, p, eta, rng);
  }
  return trace;
}

}  // namespace sagdlab
