#pragma once

#include <string>
#include <vector>

namespace sagdlab {

/// One per-iteration record. Ledger fields (lambda, gamma, alpha, phi_star)
/// and the theorem envelope are NaN for schemes that do not maintain them;
/// they serialize as empty columns.
struct TraceRow {
  int k;
  double f_gap;                 // f(w_k) - f*
  double grad_norm_sq;          // ||grad f(y_k)||^2
  double sgrad_second_moment;   // exact E ||grad f(y_k, z)||^2
  double lambda;
  double gamma;
  double alpha;                 // alpha solved at step k
  double phi_star;
  double bound;                 // theorem envelope at k
};

enum class RunStatus { ok, diverged };

struct Trace {
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::ok;
};

/// Fixed column order shared by the CSV writer and its readers.
inline constexpr const char* kTraceHeader =
    "k,f_gap,grad_norm_sq,sgrad_second_moment,lambda,gamma,alpha,phi_star,bound";

}  // namespace sagdlab
