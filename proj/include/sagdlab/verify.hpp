#pragma once

#include <string>
#include <vector>

#include "sagdlab/constants.hpp"
#include "sagdlab/optimizers.hpp"

namespace sagdlab {

enum class CheckStatus { pass, fail, flagged };

struct CheckDetail {
  std::string label;
  double value;
};

struct CheckReport {
  std::string name;
  CheckStatus status;
  double worst_slack;  // most negative margin observed
  std::vector<CheckDetail> details;
};

const char* to_string(CheckStatus s);

/// Exact-expectation descent lemma at one point: verifies
///   E_z f(y - eta grad f(y,z)) <= f(y) - eta (1 - eta rho L / 2) ||grad f(y)||^2
/// and, when eta <= 1/(rho L), the expected progress condition
///   E_z f(y - eta grad f(y,z)) <= f(y) - (eta/2) ||grad f(y)||^2.
CheckReport check_descent_lemma(const FiniteSumQuadratic& p, const Vector& y,
                                double eta, double rho, double smoothness);

/// Monte Carlo check of E f(w_k) <= E phi*_k across replicates of an
/// estimating-sequence run. Deterministic mode is checked pointwise with no
/// statistical slack; stochastic modes pass at 3 standard errors.
CheckReport check_local_upper_bound(const FiniteSumQuadratic& p,
                                    const RunSpec& base, int replicates);

enum class EquivalenceMode { deterministic, shared_stream_stochastic };

/// Deterministic mode: the estimating-sequence and momentum forms must
/// produce identical iterates (relative discrepancy <= 1e-8).
/// Shared-stream mode: with a common component-index stream, the
/// semi-stochastic scheme's v-update must be explained exactly by the
/// reconstruction w_k + (1/alpha)(w_{k+1} - w_k) plus the error term
/// (eta/alpha)(grad f(y,z) - grad f(y)); the raw discrepancy between the
/// two schemes is reported alongside as evidence that they diverge.
CheckReport check_equivalence(const FiniteSumQuadratic& p, int iters,
                              std::uint64_t seed, EquivalenceMode mode,
                              const StepSchedule& schedule, double gamma0);

struct RateFit {
  std::string model;        // "linear" or "sublinear"
  double fitted_rate;       // per-step contraction, or log-log slope
  double theoretical_rate;  // 1 - sqrt(eta_min mu), or -2
  int window_begin;
  int window_end;           // exclusive
  double r_squared;
  bool envelope_ok;         // sublinear only: gap_k <= 1.05 * bound_k
  bool flagged;             // window shorter than 20 points
};

/// Fits the Monte Carlo mean gap curve against the theorem envelope. The
/// window starts after the first 10% of iterations and stops at the first
/// numerical-floor hit (gap < 1e-14 * initial gap).
RateFit fit_rate(const std::vector<TraceRow>& mean_rows,
                 const std::string& model, const ConstantsReport& constants,
                 double gamma0, double eta_min);

/// Exact ledger recursion vs the closed-form lambda bounds, plus exact
/// product tracking in the gamma0 = mu regime.
CheckReport check_lambda_bounds(double gamma0, double mu,
                                const StepSchedule& schedule, int k_max);

/// Exact-expectation preconditioned progress: for 0 < D <= I and
/// eta <= 1/(rho_D L_D),
///   E_z f(y - eta D^{-1} grad f(y,z)) <= f(y) - (eta/2) ||grad f(y)||_2^2.
CheckReport check_matrix_descent(const FiniteSumQuadratic& p,
                                 const SymMatrix& d, const Vector& y,
                                 double eta, const MatrixConstantsReport& report);

}  // namespace sagdlab
