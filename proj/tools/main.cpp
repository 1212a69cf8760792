// Command-line front-end: problem constants, experiment runs, verification
// suites, and scheme/size sweeps over finite-support least-squares problems.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sagdlab/harness.hpp"

namespace fs = std::filesystem;
using namespace sagdlab;

namespace {

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<int> iters;
  std::optional<double> eta;
  std::optional<double> gamma0;
  std::optional<std::string> scheme;
  std::optional<std::string> out_dir;
  double tol = 1e-10;
};

void apply_overrides(RunConfig& config, const CliOverrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.replicates) config.replicates = *o.replicates;
  if (o.iters) config.iters = *o.iters;
  if (o.eta) config.etas = {*o.eta};
  if (o.gamma0) config.gamma0 = *o.gamma0;
  if (o.scheme) config.scheme = *o.scheme;
  if (o.out_dir) config.out_dir = *o.out_dir;
}

int cmd_constants(const std::string& problem_file,
                  const std::string& out_file) {
  const FiniteSumQuadratic p = load_problem(problem_file);
  const ConstantsReport report = compute_constants(p);
  const std::string text = constants_to_json_text(report);
  std::cout << text;
  if (!out_file.empty()) {
    std::ofstream(out_file) << text;
  }
  return 0;
}

void write_summary(const fs::path& out_dir, const FiniteSumQuadratic& p,
                   const RunConfig& config, const RunSpec& spec,
                   const RunOutcome& outcome) {
  const ConstantsReport constants = compute_constants(p);
  std::ostringstream summary;
  summary << "scheme: " << spec.scheme << "\n"
          << "iters: " << spec.iters << "\n"
          << "replicates: " << config.replicates << "\n"
          << "eta_min: " << spec.schedule.eta_min() << "\n"
          << "gamma0: " << spec.gamma0 << "\n";
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    summary << "iterations_to_" << eps << ": "
            << iterations_to(outcome.mean_rows, eps) << "\n";
  }
  if (is_es_scheme(spec.scheme) && !outcome.mean_rows.empty()) {
    const std::string model =
        constants.strong_convexity > 0.0 &&
                std::abs(spec.gamma0 - constants.strong_convexity) <=
                    1e-12 * constants.strong_convexity
            ? "linear"
            : "sublinear";
    const RateFit fit = fit_rate(outcome.mean_rows, model, constants,
                                 spec.gamma0, spec.schedule.eta_min());
    summary << "fit_model: " << fit.model << "\n"
            << "fitted_rate: " << fit.fitted_rate << "\n"
            << "theoretical_rate: " << fit.theoretical_rate << "\n"
            << "r_squared: " << fit.r_squared << "\n";
  }
  std::ofstream(out_dir / "summary.txt") << summary.str();
  std::cout << summary.str();
}

int cmd_run(const std::string& config_file, const CliOverrides& o) {
  RunConfig config = load_config(config_file);
  apply_overrides(config, o);
  const fs::path base_dir = fs::path(config_file).parent_path();
  const FiniteSumQuadratic p = resolve_problem(config, base_dir);
  const RunSpec spec = make_run_spec(config, p);
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);

  const RunOutcome outcome = run_replicates(p, spec, config.replicates);
  for (std::size_t r = 0; r < outcome.traces.size(); ++r) {
    save_trace(outcome.traces[r],
               out_dir / ("trace_" + std::to_string(r) + ".csv"));
  }
  if (outcome.any_diverged) {
    std::cerr << "run diverged; partial traces kept in " << out_dir << "\n";
    return 2;
  }
  Trace mean;
  mean.rows = outcome.mean_rows;
  save_trace(mean, out_dir / "trace_mean.csv");
  write_summary(out_dir, p, config, spec, outcome);
  return 0;
}

int cmd_verify(const std::string& config_file, const CliOverrides& o) {
  RunConfig config = load_config(config_file);
  apply_overrides(config, o);
  if (o.tol < 0.0) {
    throw CLI::ValidationError("--tol", "tolerance must be nonnegative");
  }
  const fs::path base_dir = fs::path(config_file).parent_path();
  const FiniteSumQuadratic p = resolve_problem(config, base_dir);
  const ConstantsReport constants = compute_constants(p);
  const RunSpec spec = make_run_spec(config, p);

  std::vector<std::string> checks = config.checks;
  if (checks.empty()) {
    checks = {"descent", "lambda", "local_upper_bound", "equivalence",
              "equivalence_shared_stream"};
  }

  bool all_pass = true;
  fs::create_directories(config.out_dir);
  std::ofstream report_file(fs::path(config.out_dir) / "checks.txt");
  RngStream rng(config.seed);
  for (const std::string& check : checks) {
    CheckReport report;
    if (check == "descent") {
      report = CheckReport{"descent-lemma", CheckStatus::pass, 0.0, {}};
      for (int t = 0; t < 50; ++t) {
        Vector y(p.dim());
        for (Eigen::Index j = 0; j < p.dim(); ++j) y[j] = rng.next_gaussian();
        const CheckReport one = check_descent_lemma(
            p, y, spec.schedule.eta(0), constants.strong_growth,
            constants.smoothness);
        report.worst_slack = std::min(report.worst_slack, one.worst_slack);
        if (one.status == CheckStatus::fail) report.status = CheckStatus::fail;
      }
    } else if (check == "lambda") {
      report = check_lambda_bounds(spec.gamma0, constants.strong_convexity,
                                   spec.schedule, std::max(spec.iters, 100));
    } else if (check == "local_upper_bound") {
      report = check_local_upper_bound(p, spec, std::max(config.replicates, 100));
    } else if (check == "equivalence") {
      report = check_equivalence(p, spec.iters, config.seed,
                                 EquivalenceMode::deterministic, spec.schedule,
                                 spec.gamma0);
    } else if (check == "equivalence_shared_stream") {
      report = check_equivalence(p, spec.iters, config.seed,
                                 EquivalenceMode::shared_stream_stochastic,
                                 spec.schedule, spec.gamma0);
      if (report.status == CheckStatus::pass) {
        std::cout << "flagged: schemes diverge (raw divergence reported below)\n";
      }
    } else if (check == "matrix_descent") {
      if (!spec.preconditioner.has_value()) {
        throw CLI::ValidationError("checks", "matrix_descent needs a preconditioner");
      }
      const MatrixConstantsReport mc = matrix_constants(p, *spec.preconditioner);
      const CheckReport probe = check_matrix_descent(
          p, *spec.preconditioner, p.minimizer(),
          1.0 / (mc.strong_growth * mc.smoothness), mc);
      report = probe;
      for (int t = 0; t < 20; ++t) {
        Vector y(p.dim());
        for (Eigen::Index j = 0; j < p.dim(); ++j) y[j] = rng.next_gaussian();
        const CheckReport one = check_matrix_descent(
            p, *spec.preconditioner, y,
            1.0 / (mc.strong_growth * mc.smoothness), mc);
        report.worst_slack = std::min(report.worst_slack, one.worst_slack);
        if (one.status == CheckStatus::fail) report.status = CheckStatus::fail;
      }
    } else {
      throw CLI::ValidationError("checks", "unknown check '" + check + "'");
    }
    const std::string text = check_report_to_text(report);
    std::cout << text;
    report_file << text;
    if (report.status == CheckStatus::fail) all_pass = false;
  }
  return all_pass ? 0 : 1;
}

int cmd_sweep(const std::string& config_file, const CliOverrides& o) {
  RunConfig config = load_config(config_file);
  apply_overrides(config, o);
  if (config.sweep_ns.empty() || config.sweep_schemes.empty()) {
    std::cout << "n,scheme,fitted_rate,iters_to_1e-2,iters_to_1e-4,iters_to_1e-6,"
                 "theorem_rate\n";
    return 0;
  }
  fs::create_directories(config.out_dir);
  std::ostringstream table;
  table << "n,scheme,fitted_rate,iters_to_1e-2,iters_to_1e-4,iters_to_1e-6,"
           "theorem_rate\n";
  for (int n : config.sweep_ns) {
    RunConfig instance = config;
    instance.gen_n = n;
    const FiniteSumQuadratic p = resolve_problem(instance, fs::path(config_file).parent_path());
    const ConstantsReport constants = compute_constants(p);
    for (const std::string& scheme : config.sweep_schemes) {
      instance.scheme = scheme;
      if (scheme == "sgd") {
        instance.etas = {0.5 / constants.max_smoothness};
      } else {
        instance.etas.clear();  // default 1/(rho L)
      }
      const RunSpec spec = make_run_spec(instance, p);
      const RunOutcome outcome = run_replicates(p, spec, instance.replicates);
      if (outcome.any_diverged) {
        std::cerr << "sweep cell diverged: n=" << n << " scheme=" << scheme << "\n";
        return 2;
      }
      const std::string model = is_es_scheme(scheme) &&
                                        constants.strong_convexity > 0.0
                                    ? "linear"
                                    : "sublinear";
      double fitted = std::nan("");
      double theorem = std::nan("");
      if (is_es_scheme(scheme)) {
        const RateFit fit = fit_rate(outcome.mean_rows, model, constants,
                                     spec.gamma0, spec.schedule.eta_min());
        fitted = fit.fitted_rate;
        theorem = fit.theoretical_rate;
      }
      table << n << ',' << scheme << ',' << fitted << ','
            << iterations_to(outcome.mean_rows, 1e-2) << ','
            << iterations_to(outcome.mean_rows, 1e-4) << ','
            << iterations_to(outcome.mean_rows, 1e-6) << ',' << theorem << "\n";
    }
  }
  std::cout << table.str();
  std::ofstream(fs::path(config.out_dir) / "sweep.csv") << table.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic accelerated gradient laboratory"};
  app.require_subcommand(1);

  CliOverrides overrides;
  std::string problem_file;
  std::string config_file;
  std::string out_file;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", overrides.seed);
    cmd->add_option("--replicates", overrides.replicates);
    cmd->add_option("--iters", overrides.iters);
    cmd->add_option("--eta", overrides.eta);
    cmd->add_option("--gamma0", overrides.gamma0);
    cmd->add_option("--scheme", overrides.scheme);
    cmd->add_option("--out-dir", overrides.out_dir);
    cmd->add_option("--tol", overrides.tol)
        ->check(CLI::NonNegativeNumber);
  };

  CLI::App* constants_cmd =
      app.add_subcommand("constants", "Exact problem constants");
  constants_cmd->add_option("problem-file", problem_file)->required();
  constants_cmd->add_option("--out", out_file);

  CLI::App* run_cmd = app.add_subcommand("run", "Run replicated experiments");
  run_cmd->add_option("config", config_file)->required();
  add_overrides(run_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run verification checks");
  verify_cmd->add_option("config", config_file)->required();
  add_overrides(verify_cmd);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep schemes and sizes");
  sweep_cmd->add_option("config", config_file)->required();
  add_overrides(sweep_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (constants_cmd->parsed()) return cmd_constants(problem_file, out_file);
    if (run_cmd->parsed()) return cmd_run(config_file, overrides);
    if (verify_cmd->parsed()) return cmd_verify(config_file, overrides);
    if (sweep_cmd->parsed()) return cmd_sweep(config_file, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
