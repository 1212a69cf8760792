#include "sagdlab/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sagdlab {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open file: " + file.string());
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) {
    throw std::runtime_error("cannot write file: " + file.string());
  }
  out << text;
}

}  // namespace

FiniteSumQuadratic problem_from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  if (!doc.contains("points") || !doc["points"].is_array() ||
      doc["points"].empty()) {
    throw std::invalid_argument("problem document: missing or empty 'points'");
  }
  const Eigen::Index dim = doc.at("dim").get<Eigen::Index>();
  std::vector<Vector> xs;
  std::vector<double> ys;
  std::vector<double> probs;
  for (const json& pt : doc["points"]) {
    const auto x = pt.at("x").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(x.size()) != dim) {
      throw std::invalid_argument("problem document: point dimension mismatch in 'points'");
    }
    xs.push_back(Eigen::Map<const Vector>(x.data(), x.size()));
    ys.push_back(pt.at("y").get<double>());
    probs.push_back(pt.at("prob").get<double>());
  }
  double total = 0.0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "problem document: field 'prob' values sum to " + std::to_string(total) +
        ", expected 1");
  }
  std::optional<Vector> minimizer;
  if (doc.contains("minimizer")) {
    const auto m = doc["minimizer"].get<std::vector<double>>();
    minimizer = Eigen::Map<const Vector>(m.data(), m.size());
  }
  return FiniteSumQuadratic(std::move(xs), std::move(ys), std::move(probs),
                            std::move(minimizer));
}

FiniteSumQuadratic load_problem(const std::filesystem::path& file) {
  return problem_from_json_text(read_file(file));
}

std::string problem_to_json_text(const FiniteSumQuadratic& p) {
  json doc;
  doc["dim"] = p.dim();
  json points = json::array();
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    json pt;
    pt["x"] = std::vector<double>(p.xs()[i].begin(), p.xs()[i].end());
    pt["y"] = p.ys()[i];
    pt["prob"] = p.probs()[i];
    points.push_back(std::move(pt));
  }
  doc["points"] = std::move(points);
  doc["minimizer"] =
      std::vector<double>(p.minimizer().begin(), p.minimizer().end());
  return doc.dump(2) + "\n";
}

void save_problem(const FiniteSumQuadratic& p, const std::filesystem::path& file) {
  write_file(file, problem_to_json_text(p));
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (const TraceRow& r : trace.rows) {
    out << r.k << ',' << format_double(r.f_gap) << ','
        << format_double(r.grad_norm_sq) << ','
        << format_double(r.sgrad_second_moment) << ','
        << format_double(r.lambda) << ',' << format_double(r.gamma) << ','
        << format_double(r.alpha) << ',' << format_double(r.phi_star) << ','
        << format_double(r.bound) << "\n";
  }
  if (trace.status == RunStatus::diverged) {
    out << "# status: diverged\n";
  }
  return out.str();
}

void save_trace(const Trace& trace, const std::filesystem::path& file) {
  write_file(file, trace_to_csv(trace));
}

std::string constants_to_json_text(const ConstantsReport& r) {
  json doc;
  doc["L"] = r.smoothness;
  doc["L_max"] = r.max_smoothness;
  doc["mu"] = r.strong_convexity;
  doc["rho"] = r.strong_growth;
  doc["alpha_wg"] = r.weak_growth;
  doc["kappa"] = std::isfinite(r.kappa) ? json(r.kappa) : json("inf");
  doc["kappa_tilde"] = r.kappa_tilde;
  doc["rank_deficient"] = r.rank_deficient;
  doc["provenance"] = "exact";
  std::vector<std::vector<double>> h(r.hessian.dim());
  for (Eigen::Index i = 0; i < r.hessian.dim(); ++i) {
    h[i].resize(r.hessian.dim());
    for (Eigen::Index j = 0; j < r.hessian.dim(); ++j) h[i][j] = r.hessian(i, j);
  }
  doc["hessian"] = std::move(h);
  return doc.dump(2) + "\n";
}

std::string check_report_to_text(const CheckReport& r) {
  std::ostringstream out;
  out << r.name << ": " << to_string(r.status)
      << " (worst_slack=" << format_double(r.worst_slack) << ")\n";
  for (const CheckDetail& d : r.details) {
    out << "  " << d.label << " = " << format_double(d.value) << "\n";
  }
  return out.str();
}

RunConfig config_from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  RunConfig c;
  if (doc.contains("problem")) {
    const json& pr = doc["problem"];
    if (pr.contains("file")) {
      c.problem_file = pr["file"].get<std::string>();
    } else if (pr.contains("generator")) {
      c.generator = pr["generator"].get<std::string>();
      c.gen_n = pr.value("n", 0);
      c.gen_d = pr.value("d", 0);
      c.gen_seed = pr.value("seed", std::uint64_t{0});
    } else {
      throw std::invalid_argument("config: 'problem' needs 'file' or 'generator'");
    }
  }
  c.scheme = doc.value("scheme", c.scheme);
  c.iters = doc.value("iters", c.iters);
  if (doc.contains("eta")) {
    c.etas = {doc["eta"].get<double>()};
  } else if (doc.contains("etas")) {
    c.etas = doc["etas"].get<std::vector<double>>();
  }
  if (doc.contains("gamma0")) c.gamma0 = doc["gamma0"].get<double>();
  c.seed = doc.value("seed", c.seed);
  c.replicates = doc.value("replicates", c.replicates);
  c.out_dir = doc.value("out_dir", c.out_dir);
  if (doc.contains("checks")) {
    c.checks = doc["checks"].get<std::vector<std::string>>();
  }
  if (doc.contains("preconditioner")) {
    c.precond_diag = doc["preconditioner"].at("diag").get<std::vector<double>>();
  }
  if (doc.contains("sweep")) {
    c.sweep_ns = doc["sweep"].value("ns", std::vector<int>{});
    c.sweep_schemes =
        doc["sweep"].value("schemes", std::vector<std::string>{});
  }
  if (c.replicates < 1) {
    throw std::invalid_argument("config: replicates must be >= 1");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& file) {
  return config_from_json_text(read_file(file));
}

FiniteSumQuadratic resolve_problem(const RunConfig& config,
                                   const std::filesystem::path& base_dir) {
  if (!config.problem_file.empty()) {
    std::filesystem::path path(config.problem_file);
    if (path.is_relative()) path = base_dir / path;
    return load_problem(path);
  }
  if (config.generator == "uniform_basis") return make_uniform_basis(config.gen_n);
  if (config.generator == "two_point") return make_two_point(config.gen_n);
  if (config.generator == "random_interpolating") {
    RngStream rng(config.gen_seed);
    return make_random_interpolating(config.gen_n, config.gen_d, rng);
  }
  throw std::invalid_argument("config: unknown generator '" + config.generator + "'");
}

RunSpec make_run_spec(const RunConfig& config, const FiniteSumQuadratic& p) {
  const ConstantsReport constants = compute_constants(p);
  RunSpec spec;
  spec.scheme = config.scheme;
  spec.iters = config.iters;
  if (config.etas.empty()) {
    spec.schedule = StepSchedule::constant(
        1.0 / (constants.strong_growth * constants.smoothness));
  } else if (config.etas.size() == 1) {
    spec.schedule = StepSchedule::constant(config.etas.front());
  } else {
    spec.schedule = StepSchedule::sequence(config.etas);
  }
  spec.gamma0 = config.gamma0.value_or(
      constants.strong_convexity > 0.0 ? constants.strong_convexity : 1.0);
  spec.seed = config.seed;
  if (config.precond_diag.has_value()) {
    spec.preconditioner = SymMatrix::diagonal(Eigen::Map<const Vector>(
        config.precond_diag->data(), config.precond_diag->size()));
  }
  return spec;
}

std::vector<TraceRow> mean_trace(const std::vector<Trace>& traces) {
  if (traces.empty()) return {};
  const std::size_t len = traces.front().rows.size();
  for (const Trace& t : traces) {
    if (t.rows.size() != len) {
      throw std::invalid_argument("mean_trace: replicate length mismatch");
    }
  }
  std::vector<TraceRow> mean(len);
  for (std::size_t k = 0; k < len; ++k) {
    TraceRow acc = traces.front().rows[k];
    for (std::size_t r = 1; r < traces.size(); ++r) {
      const TraceRow& row = traces[r].rows[k];
      acc.f_gap += row.f_gap;
      acc.grad_norm_sq += row.grad_norm_sq;
      acc.sgrad_second_moment += row.sgrad_second_moment;
      acc.lambda += row.lambda;
      acc.gamma += row.gamma;
      acc.alpha += row.alpha;
      acc.phi_star += row.phi_star;
    }
    const double n = static_cast<double>(traces.size());
    acc.f_gap /= n;
    acc.grad_norm_sq /= n;
    acc.sgrad_second_moment /= n;
    acc.lambda /= n;
    acc.gamma /= n;
    acc.alpha /= n;
    acc.phi_star /= n;
    mean[k] = acc;  // bound is deterministic, keep the first replicate's
  }
  return mean;
}

int iterations_to(const std::vector<TraceRow>& mean_rows, double eps) {
  if (mean_rows.empty()) return -1;
  const double threshold = eps * mean_rows.front().f_gap;
  for (const TraceRow& row : mean_rows) {
    if (row.f_gap <= threshold) return row.k;
  }
  return -1;
}

RunOutcome run_replicates(const FiniteSumQuadratic& p, const RunSpec& base,
                          int replicates) {
  RunOutcome outcome;
  outcome.any_diverged = false;
  outcome.traces.reserve(replicates);
  for (int r = 0; r < replicates; ++r) {
    RunSpec spec = base;
    spec.seed = RngStream::derived(base.seed, r).seed();
    Trace trace = run(p, spec);
    if (trace.status == RunStatus::diverged) outcome.any_diverged = true;
    outcome.traces.push_back(std::move(trace));
  }
  if (!outcome.any_diverged) {
    outcome.mean_rows = mean_trace(outcome.traces);
  }
  return outcome;
}

}  // namespace sagdlab
