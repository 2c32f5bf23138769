// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "mepsolve/delta_oracle.hpp"

namespace mep {

std::vector<Multiindex> all_multiindices(const std::vector<int>& dims) {
  std::vector<Multiindex> out;
  if (dims.empty()) return out;
  std::vector<int> current(dims.size(), 1);
  while (true) {
    out.emplace_back(current);
    int k = static_cast<int>(dims.size()) - 1;
    while (k >= 0 && current[static_cast<std::size_t>(k)] == dims[static_cast<std::size_t>(k)]) {
      current[static_cast<std::size_t>(k)] = 1;
      --k;
    }
    if (k < 0) break;
    ++current[static_cast<std::size_t>(k)];
  }
  return out;
}

std::vector<SweepEntry> sweep(const MepProblem& problem, const SolverConfig& config, const SweepOptions& options) {
  config.validate();
  if (options.threads < 1) throw MepError(ErrorKind::InvalidArgument, "threads must be at least 1");
  if (options.retries < 0) throw MepError(ErrorKind::InvalidArgument, "retries must be non-negative");
  if (problem.tensor_size() > kSweepGuard && !options.force) {
    throw MepError(ErrorKind::SizeGuard, "sweep over " + std::to_string(problem.tensor_size()) +
                                             " multiindices needs force");
  }
  const auto targets = all_multiindices(problem.dims());
  std::vector<SweepEntry> entries(targets.size());
  std::vector<char> done(targets.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t emitted = 0;

  auto worker = [&] {
    for (std::size_t i = next++; i < targets.size(); i = next++) {
      SweepEntry entry;
      entry.index = targets[i];
      SolverConfig attempt_config = config;
      for (int t = 0; t <= options.retries; ++t) {
        // Fresh seeds per retry; target_seed mixes in the multiindex.
        attempt_config.seed = config.seed + static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL;
        entry.tries = t + 1;
        entry.report = attempt_solve(problem, entry.index, options.sign, attempt_config);
        if (entry.report.converged()) break;
      }
      std::lock_guard<std::mutex> lock(mutex);
      entries[i] = std::move(entry);
      done[i] = 1;
      while (emitted < targets.size() && done[emitted]) {
        if (options.on_entry) options.on_entry(entries[emitted]);
        ++emitted;
      }
    }
  };

  const int threads = std::min<int>(options.threads, static_cast<int>(std::max<std::size_t>(targets.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return entries;
}

SweepSummary summarize(const std::vector<SweepEntry>& entries) {
  SweepSummary s;
  for (const auto& e : entries) {
    if (e.report.converged()) {
      ++s.found;
      s.max_residual = std::max(s.max_residual, e.report.residuals.back());
    } else {
      ++s.failed;
    }
  }
  return s;
}

RVector unit_homogeneous(const Eigenpair& pair) {
  RVector v = pair.lifted();
  return v / v.norm();
}

OracleCheckReport oracle_check(const MepProblem& problem, const SolverConfig& config, const SweepOptions& options) {
  OracleCheckReport report;
  const OracleResult oracle = solve_all(problem);
  report.oracle_count = static_cast<int>(oracle.eigenvalues.size());
  report.bijection = is_index_bijection(problem, oracle.eigenvalues);
  report.delta_definite = delta_positive_definite(problem);

  const auto entries = sweep(problem, config, options);
  report.newton = summarize(entries);
  std::vector<RVector> newton, reference;
  for (const auto& e : entries) {
    if (e.report.converged()) newton.push_back(unit_homogeneous(e.report.pair));
  }
  for (const auto& ev : oracle.eigenvalues) reference.push_back(ev.lambda);
  report.hausdorff = hausdorff_distance(newton, reference);
  return report;
}

}  // namespace mep
