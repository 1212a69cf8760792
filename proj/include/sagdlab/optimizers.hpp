#pragma once

#include <functional>
#include <optional>
#include <string>

#include "sagdlab/estimating.hpp"
#include "sagdlab/problems.hpp"
#include "sagdlab/trace.hpp"

namespace sagdlab {

/// Step-size schedule: constant or an explicit sequence (clamped to its
/// last entry past the end). Every eta must satisfy eta_min <= eta < 1/mu.
class StepSchedule {
 public:
  static StepSchedule constant(double eta);
  static StepSchedule sequence(std::vector<double> etas);

  double eta(int k) const;
  double eta_min() const { return eta_min_; }

 private:
  std::vector<double> etas_;
  double eta_min_;
};

/// Primal update m(eta, y, g) for the generalized scheme. The default is a
/// gradient step from y; the preconditioned variant applies D^{-1} first.
using PrimalMap = std::function<Vector(double eta, const Vector& y, const Vector& g)>;

PrimalMap gradient_primal_map();
PrimalMap preconditioned_primal_map(const SymMatrix& d_inv);

enum class EsMode { deterministic, semi_stochastic, fully_stochastic };

/// Momentum form of stochastic AGD: explicit (w_{k+1} - w_k) extrapolation,
/// no ledger. alpha is the weight for the upcoming step k.
struct MomentumState {
  Vector w;
  Vector w_prev;
  Vector y;
  double alpha;
  double alpha_prev;
  double eta;  // eta_k for the upcoming step
  int k;
};

/// Estimating-sequence form: primal iterate plus the full ledger.
struct EsState {
  Vector w;
  Vector y;  // query point of the step that produced w (w itself at k = 0)
  EsLedger ledger;
  EsMode mode;
  PrimalMap primal_map;
};

Vector sgd_step(const Vector& w, const Vector& g, double eta);
Vector preconditioned_sgd_step(const Vector& w, const SymMatrix& d_inv,
                               const Vector& g, double eta);

MomentumState make_momentum_state(const Vector& w0, double gamma0, double mu,
                                  double eta0);

/// One momentum step: gradient at y_k (sampled unless stochastic = false),
/// w_{k+1} = y_k - eta_k g, then the alpha recursion and extrapolation.
MomentumState momentum_agd_step(const MomentumState& state,
                                const FiniteSumQuadratic& p,
                                const StepSchedule& schedule, double mu,
                                RngStream& rng, bool stochastic = true);

EsState make_es_state(const FiniteSumQuadratic& p, const Vector& w0,
                      double gamma0, double mu, EsMode mode,
                      PrimalMap primal_map = gradient_primal_map());

/// One generalized step: solve alpha, form y, take the primal step with the
/// mode's w-gradient, and advance the ledger with the mode's v-gradient.
EsState generalized_agd_step(const EsState& state, const FiniteSumQuadratic& p,
                             double eta, RngStream& rng);

/// Steppers selectable by name: sgd, agd-momentum, agd-es-det, agd-es-semi,
/// agd-es-full, psgd, pagd-es-semi.
struct RunSpec {
  std::string scheme;
  int iters;
  StepSchedule schedule;
  double gamma0;
  std::uint64_t seed;
  std::optional<Vector> w0;                // default: w* + ones/sqrt(d)
  std::optional<SymMatrix> preconditioner; // required by psgd / pagd-es-semi
};

/// Runs one replicate and records the full trace, including the theorem
/// envelope for estimating-sequence schemes. Aborts with diverged status
/// when the gap exceeds 1e12 times its initial value.
Trace run(const FiniteSumQuadratic& p, const RunSpec& spec);

bool is_es_scheme(const std::string& scheme);

}  // namespace sagdlab
