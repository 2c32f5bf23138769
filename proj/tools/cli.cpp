// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mepsolve/delta_oracle.hpp"
#include "mepsolve/frontier.hpp"
#include "mepsolve/gallery.hpp"
#include "mepsolve/problem_file.hpp"
#include "mepsolve/records.hpp"
#include "mepsolve/sweep.hpp"

namespace mep::cli {

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitError = 2;

// Flag values that parse but do not fit the problem; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  double tol = SolverConfig{}.tol;
  int max_iter = SolverConfig{}.max_iter;
  double tau = SolverConfig{}.tau;
  std::uint64_t seed = 0;
  int retries = 3;
  std::optional<bool> globalize;
  std::optional<int> threads;
  std::string out;
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--tol", f.tol, "Stop when ||F||_inf <= tol")->check(CLI::PositiveNumber);
  app->add_option("--max-iter", f.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
  app->add_option("--tau", f.tau, "Damping factor of the globalized method")->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", f.seed, "Seed for random start vectors");
  app->add_option("--retries", f.retries, "Fresh-seed retries after a failed solve")->check(CLI::NonNegativeNumber);
  app->add_flag("--globalize,!--no-globalize", f.globalize,
                "Damped Newton (default: on for the laguerre family only)");
}

SolverConfig make_config(const MepProblem& problem, const SolverFlags& f) {
  SolverConfig c;
  c.tol = f.tol;
  c.max_iter = f.max_iter;
  c.tau = f.tau;
  c.seed = f.seed;
  c.globalize = f.globalize.value_or(problem.family() == "laguerre" && !problem.homogeneous());
  c.validate();
  return c;
}

std::string problem_id(const std::string& path) { return std::filesystem::path(path).stem().string(); }

std::string fixed12(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

std::string sci(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Output sink: the --out file when given, else `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw MepError(ErrorKind::InvalidArgument, "cannot open " + path + " for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

RVector parse_objective(const std::string& text, const MepProblem& problem) {
  const int size = problem.homogeneous() ? problem.m() + 1 : problem.m();
  RVector mu = RVector::Zero(size);
  if (text.find(',') == std::string::npos) {
    // A single number selects a component: lambda_1..lambda_m, or
    // lambda_0..lambda_m for homogeneous problems.
    int component = 0;
    try {
      std::size_t used = 0;
      component = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw UsageError("objective must be a component number or a vector: " + text);
    }
    const int pos = problem.homogeneous() ? component : component - 1;
    if (pos < 0 || pos >= size) throw UsageError("objective component out of range");
    mu(pos) = 1.0;
    return mu;
  }
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad objective entry: " + item);
    }
  }
  if (static_cast<int>(values.size()) != size) {
    throw UsageError("objective needs " + std::to_string(size) + " entries");
  }
  for (int i = 0; i < size; ++i) mu(i) = values[static_cast<std::size_t>(i)];
  return mu;
}

Sign parse_sign(const std::string& s) {
  if (s == "+") return Sign::Plus;
  if (s == "-") return Sign::Minus;
  throw UsageError("sign must be + or -");
}

int cmd_solve(const std::string& path, const std::string& index_text, const std::optional<std::string>& sign_text,
              const SolverFlags& flags, std::ostream& out, std::ostream& err) {
  const MepProblem problem = read_problem(path);
  const SolverConfig base = make_config(problem, flags);
  const Multiindex index = Multiindex::parse(index_text);
  index.validate(problem.dims());
  std::optional<Sign> sign;
  if (problem.homogeneous()) {
    sign = parse_sign(sign_text.value_or("+"));
  } else if (sign_text) {
    throw UsageError("--sign applies to homogeneous problems only");
  }

  SolveReport report;
  for (int t = 0; t <= flags.retries; ++t) {
    SolverConfig c = base;
    c.seed = base.seed + static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL;
    report = attempt_solve(problem, index, sign, c);
    if (report.converged()) break;
  }
  if (!flags.out.empty()) {
    Sink sink(flags.out, out);
    write_csv_header(sink.stream(), problem.m());
    write_csv_row(sink.stream(), make_record(problem_id(path), problem, report));
  }
  if (report.status == SolveStatus::Breakdown) {
    err << report.message << '\n';
    return kExitError;
  }
  out << "status: " << status_name(report.status) << '\n';
  out << "iterations: " << report.iterations << '\n';
  out << "residual: " << sci(report.residuals.back()) << '\n';
  const RVector& lambda = report.pair.lambda;
  const int offset = problem.homogeneous() ? 0 : 1;
  for (Eigen::Index l = 0; l < lambda.size(); ++l) {
    out << "lambda_" << l + offset << ": " << fixed12(lambda(l)) << '\n';
  }
  return report.converged() ? 0 : kExitFailure;
}

int cmd_sweep(const std::string& path, const SolverFlags& flags, bool force, const std::string& sign_text,
              std::ostream& out, std::ostream& err) {
  const MepProblem problem = read_problem(path);
  const SolverConfig config = make_config(problem, flags);
  Sink sink(flags.out, out);
  SweepOptions options;
  options.threads = resolve_threads(flags.threads);
  options.retries = flags.retries;
  options.force = force;
  options.sign = parse_sign(sign_text);
  const std::string id = problem_id(path);
  write_csv_header(sink.stream(), problem.m());
  options.on_entry = [&](const SweepEntry& e) {
    write_csv_row(sink.stream(), make_record(id, problem, e.report));
    sink.stream().flush();
  };
  const auto entries = sweep(problem, config, options);
  const SweepSummary s = summarize(entries);
  std::ostream& summary = sink.to_file() ? out : err;
  summary << "found " << s.found << '/' << entries.size() << ", failed " << s.failed << ", max residual "
          << sci(s.max_residual) << '\n';
  return s.failed == 0 ? 0 : kExitFailure;
}

int cmd_frontier(const std::string& path, int count, const std::string& objective_text, const SolverFlags& flags,
                 std::ostream& out, std::ostream& err) {
  const MepProblem problem = read_problem(path);
  const SolverConfig config = make_config(problem, flags);
  const RVector objective = parse_objective(objective_text, problem);
  FrontierOptions options;
  options.stop_on_failure = false;
  const FrontierResult result = frontier_smallest(problem, count, objective, config, options);

  Sink sink(flags.out, out);
  const std::string id = problem_id(path);
  write_csv_header(sink.stream(), problem.m());
  std::vector<char> written(result.attempts.size(), 0);
  for (const auto& pop : result.pops) {
    const auto& a = result.attempts[static_cast<std::size_t>(pop.attempt)];
    write_csv_row(sink.stream(), make_record(id, problem, a.report, a.solve_order));
    written[static_cast<std::size_t>(pop.attempt)] = 1;
  }
  for (std::size_t i = 0; i < result.attempts.size(); ++i) {
    if (written[i]) continue;
    const auto& a = result.attempts[i];
    write_csv_row(sink.stream(), make_record(id, problem, a.report, a.solve_order));
  }
  std::ostream& summary = sink.to_file() ? out : err;
  summary << "pops " << result.pops.size() << ", solves " << result.solve_count();
  if (!result.pops.empty()) summary << ", solves for all pops " << result.solves_for(static_cast<int>(result.pops.size()));
  summary << '\n';
  return result.complete ? 0 : kExitFailure;
}

int cmd_oracle_check(const std::string& path, const SolverFlags& flags, std::ostream& out) {
  const MepProblem problem = read_problem(path);
  const SolverConfig config = make_config(problem, flags);
  SweepOptions options;
  options.threads = resolve_threads(flags.threads);
  options.retries = flags.retries;
  const OracleCheckReport r = oracle_check(problem, config, options);
  const bool close = r.hausdorff <= 1e-8;
  out << "newton: found " << r.newton.found << ", failed " << r.newton.failed << '\n';
  out << "oracle: " << r.oracle_count << " eigenvalues\n";
  out << "hausdorff: " << sci(r.hausdorff) << (close ? " ok" : " FAILED") << '\n';
  out << "bijection: " << (r.bijection ? "ok" : "FAILED") << '\n';
  out << "delta_positive_definite: " << (r.delta_definite ? "yes" : "no") << '\n';
  return close && r.bijection && r.newton.failed == 0 ? 0 : kExitFailure;
}

struct GenerateFlags {
  std::string family;
  int n = 3;
  int m = 2;
  std::uint64_t seed = 0;
  EllipsoidConfig ellipsoid;
  std::string out;
};

int cmd_generate(const GenerateFlags& g, std::ostream& out) {
  MepProblem problem;
  if (g.family == "laguerre") {
    problem = gen_laguerre({g.n, g.m, g.seed, RandomFamily::Laguerre});
  } else if (g.family == "well-conditioned") {
    problem = gen_well_conditioned({g.n, g.m, g.seed, RandomFamily::WellConditioned});
  } else if (g.family == "volkmer") {
    problem = volkmer_example();
  } else {
    problem = ellipsoidal_wave(g.ellipsoid);
  }
  if (g.out.empty()) {
    out << format_problem(problem);
  } else {
    write_problem(problem, g.out);
  }
  return 0;
}

}  // namespace

int resolve_threads(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw MepError(ErrorKind::InvalidArgument, "--threads must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("MEPSOLVE_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      throw MepError(ErrorKind::InvalidArgument, std::string("MEPSOLVE_THREADS is not a positive integer: ") + env);
    }
    return static_cast<int>(v);
  }
  return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalues of multiparameter eigenvalue problems by multiindex"};
  app.name("mepsolve");
  app.require_subcommand(1);

  std::string path;
  SolverFlags flags;

  auto* solve_cmd = app.add_subcommand("solve", "Solve for one (signed) multiindex");
  std::string index_text;
  std::optional<std::string> sign_text;
  solve_cmd->add_option("problem", path, "Problem file")->required();
  solve_cmd->add_option("--multiindex", index_text, "Target ranks i1,i2,...")->required();
  solve_cmd->add_option("--sign", sign_text, "Component + or - (homogeneous problems)");
  solve_cmd->add_option("--out", flags.out, "Also write a CSV record to this file");
  add_solver_flags(solve_cmd, flags);

  auto* sweep_cmd = app.add_subcommand("sweep", "Solve for every multiindex and write CSV");
  bool force = false;
  std::string sweep_sign = "+";
  sweep_cmd->add_option("problem", path, "Problem file")->required();
  sweep_cmd->add_option("--threads", flags.threads, "Worker threads (env MEPSOLVE_THREADS)");
  sweep_cmd->add_option("--sign", sweep_sign, "Component for homogeneous problems");
  sweep_cmd->add_option("--out", flags.out, "CSV file (default stdout)");
  sweep_cmd->add_flag("--force", force, "Allow more than 1e6 multiindices");
  add_solver_flags(sweep_cmd, flags);

  auto* frontier_cmd = app.add_subcommand("frontier", "Eigenvalues in increasing objective order");
  int count = 10;
  std::string objective;
  frontier_cmd->add_option("problem", path, "Problem file")->required();
  frontier_cmd->add_option("--count", count, "Number of eigenvalues")->check(CLI::PositiveNumber);
  frontier_cmd->add_option("--objective", objective, "Component number or comma-separated weights")->required();
  frontier_cmd->add_option("--out", flags.out, "CSV file (default stdout)");
  add_solver_flags(frontier_cmd, flags);

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare a full sweep with the Delta-operator oracle");
  oracle_cmd->add_option("problem", path, "Problem file")->required();
  oracle_cmd->add_option("--threads", flags.threads, "Worker threads (env MEPSOLVE_THREADS)");
  add_solver_flags(oracle_cmd, flags);

  auto* gen_cmd = app.add_subcommand("generate", "Write a gallery problem as a problem file");
  GenerateFlags gen;
  gen_cmd->add_option("--family", gen.family, "Problem family")
      ->required()
      ->check(CLI::IsMember({"laguerre", "well-conditioned", "volkmer", "ellipsoid"}));
  gen_cmd->add_option("--n", gen.n, "Matrix size (random families)");
  gen_cmd->add_option("--m", gen.m, "Number of parameters (random families)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--nodes", gen.ellipsoid.nodes, "Collocation points per equation (ellipsoid)");
  gen_cmd->add_option("--x0", gen.ellipsoid.x0, "Ellipsoid semi-axis");
  gen_cmd->add_option("--y0", gen.ellipsoid.y0, "Ellipsoid semi-axis");
  gen_cmd->add_option("--z0", gen.ellipsoid.z0, "Ellipsoid semi-axis");
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitFailure;
  }

  try {
    if (*solve_cmd) return cmd_solve(path, index_text, sign_text, flags, out, err);
    if (*sweep_cmd) return cmd_sweep(path, flags, force, sweep_sign, out, err);
    if (*frontier_cmd) return cmd_frontier(path, count, objective, flags, out, err);
    if (*oracle_cmd) return cmd_oracle_check(path, flags, out);
    if (*gen_cmd) return cmd_generate(gen, out);
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitFailure;
  } catch (const MepError& e) {
    err << e.what() << '\n';
    return kExitError;
  }
  return kExitFailure;
}

}  // namespace mep::cli
