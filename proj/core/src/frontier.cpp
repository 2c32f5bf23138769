// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/frontier.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace mep {

SolveReport attempt_solve(const MepProblem& problem, const Multiindex& target, std::optional<Sign> sign,
                          const SolverConfig& config, const std::optional<StartVectors>& start) {
  try {
    if (problem.homogeneous()) {
      return solve(problem, SignedMultiindex{target, sign.value_or(Sign::Plus)}, config, start);
    }
    return solve(problem, target, config, start);
  } catch (const SolveFailure& failure) {
    SolveReport report;
    report.status = SolveStatus::Breakdown;
    report.iterations = failure.iteration();
    report.error = failure.kind();
    report.message = failure.what();
    report.pair.index = target;
    report.pair.homogeneous = problem.homogeneous();
    if (problem.homogeneous()) report.pair.sign = sign.value_or(Sign::Plus);
    return report;
  }
}

int FrontierResult::solves_for(int p) const {
  if (p < 1 || p > static_cast<int>(pops.size())) {
    throw MepError(ErrorKind::InvalidArgument, "solves_for: pop number out of range");
  }
  int worst = 0;
  for (int i = 0; i < p; ++i) worst = std::max(worst, popped(i).solve_order);
  return worst;
}

FrontierResult frontier_smallest(const MepProblem& problem, int count, const RVector& objective,
                                 const SolverConfig& config, const FrontierOptions& options) {
  const int m = problem.m();
  const int expected = problem.homogeneous() ? m + 1 : m;
  if (objective.size() != expected) {
    throw MepError(ErrorKind::DimensionMismatch, "objective must have " + std::to_string(expected) + " entries");
  }
  if (count < 1) throw MepError(ErrorKind::InvalidArgument, "count must be at least 1");
  config.validate();

  FrontierResult result;
  std::set<Multiindex> attempted;
  // Min-heap on (objective, multiindex) so ties break deterministically.
  using Key = std::pair<double, Multiindex>;
  std::priority_queue<std::pair<Key, int>, std::vector<std::pair<Key, int>>, std::greater<>> heap;

  auto run = [&](const Multiindex& index, const std::optional<StartVectors>& start) {
    attempted.insert(index);
    FrontierAttempt attempt;
    attempt.index = index;
    attempt.report = attempt_solve(problem, index, Sign::Plus, config, start);
    attempt.solve_order = static_cast<int>(result.attempts.size()) + 1;
    const bool ok = attempt.report.converged();
    if (ok) attempt.objective = objective.dot(attempt.report.pair.lambda);
    result.attempts.push_back(std::move(attempt));
    const int position = static_cast<int>(result.attempts.size()) - 1;
    if (ok) heap.push({{result.attempts.back().objective, index}, position});
    return ok;
  };

  if (!run(Multiindex::ones(m), std::nullopt) && options.stop_on_failure) {
    result.complete = false;
    return result;
  }
  while (static_cast<int>(result.pops.size()) < count) {
    if (heap.empty()) {
      result.complete = false;
      break;
    }
    const int position = heap.top().second;
    heap.pop();
    result.pops.push_back({position, result.solve_count()});
    if (static_cast<int>(result.pops.size()) == count) break;

    const Multiindex parent = result.attempts[static_cast<std::size_t>(position)].index;
    std::optional<StartVectors> start;
    if (options.warm_start) {
      const auto& pair = result.attempts[static_cast<std::size_t>(position)].report.pair;
      start = StartVectors{pair.right, pair.left};
    }
    for (int k = 0; k < m; ++k) {
      const Multiindex next = parent.successor(k);
      if (!next.valid_for(problem.dims()) || attempted.count(next)) continue;
      if (!run(next, start) && options.stop_on_failure) {
        result.complete = false;
        return result;
      }
    }
  }
  return result;
}

}  // namespace mep
