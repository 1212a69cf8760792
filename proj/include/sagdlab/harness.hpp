#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sagdlab/constants.hpp"
#include "sagdlab/optimizers.hpp"
#include "sagdlab/trace.hpp"
#include "sagdlab/verify.hpp"

namespace sagdlab {

/// Problem documents are JSON: {"dim": d, "points": [{"x": [...], "y": r,
/// "prob": p}, ...], "minimizer": [...] (optional)}.
FiniteSumQuadratic load_problem(const std::filesystem::path& file);
FiniteSumQuadratic problem_from_json_text(const std::string& text);
std::string problem_to_json_text(const FiniteSumQuadratic& p);
void save_problem(const FiniteSumQuadratic& p, const std::filesystem::path& file);

/// Trace files are delimited text with a fixed column order and floats at
/// 17 significant digits; NaN fields serialize as empty columns.
std::string trace_to_csv(const Trace& trace);
void save_trace(const Trace& trace, const std::filesystem::path& file);

std::string constants_to_json_text(const ConstantsReport& r);
std::string check_report_to_text(const CheckReport& r);

/// Experiment configuration, one JSON document. The problem is either a
/// file reference {"file": "..."} or a generator spec {"generator":
/// "uniform_basis"|"two_point"|"random_interpolating", "n": .., "d": ..,
/// "seed": ..}.
struct RunConfig {
  std::string problem_file;            // empty when generated
  std::string generator;               // empty when loaded from file
  int gen_n = 0;
  int gen_d = 0;
  std::uint64_t gen_seed = 0;
  std::string scheme = "agd-es-semi";
  int iters = 100;
  std::vector<double> etas;            // empty: default 1/(rho L)
  std::optional<double> gamma0;        // default: mu when mu > 0, else 1
  std::uint64_t seed = 0;
  int replicates = 1;
  std::string out_dir = ".";
  std::vector<std::string> checks;     // for the verify subcommand
  std::optional<std::vector<double>> precond_diag;
  std::vector<int> sweep_ns;           // for the sweep subcommand
  std::vector<std::string> sweep_schemes;
};

RunConfig load_config(const std::filesystem::path& file);
RunConfig config_from_json_text(const std::string& text);

FiniteSumQuadratic resolve_problem(const RunConfig& config,
                                   const std::filesystem::path& base_dir);

/// Resolved run parameters: defaults filled in from the problem constants.
RunSpec make_run_spec(const RunConfig& config, const FiniteSumQuadratic& p);

/// Row-wise mean of replicate traces (all must share the same length).
std::vector<TraceRow> mean_trace(const std::vector<Trace>& traces);

/// First k at which the mean gap drops to eps * initial gap, or -1.
int iterations_to(const std::vector<TraceRow>& mean_rows, double eps);

struct RunOutcome {
  std::vector<Trace> traces;
  std::vector<TraceRow> mean_rows;
  bool any_diverged;
};

/// Runs all replicates with derived seeds and aggregates the mean trace.
RunOutcome run_replicates(const FiniteSumQuadratic& p, const RunSpec& base,
                          int replicates);

}  // namespace sagdlab
