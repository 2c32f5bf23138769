// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "mepsolve/newton.hpp"
#include "mepsolve/problem.hpp"

namespace mep {

/// Runs one solve and turns a SolveFailure into a Breakdown report instead
/// of throwing. Homogeneous problems need `sign`.
SolveReport attempt_solve(const MepProblem& problem, const Multiindex& target, std::optional<Sign> sign,
                          const SolverConfig& config, const std::optional<StartVectors>& start = std::nullopt);

struct FrontierOptions {
  /// Start each successor from the eigenvectors of the popped parent.
  bool warm_start = true;
  /// Abort on the first failed solve. When false the failed index is
  /// recorded and simply not added to the frontier.
  bool stop_on_failure = true;
};

struct FrontierAttempt {
  Multiindex index;
  SolveReport report;
  int solve_order = 0;  ///< 1-based position in the sequence of solves
  double objective = 0.0;
};

struct FrontierPop {
  int attempt = 0;  ///< position in FrontierResult::attempts
  /// Number of solves performed before this pop was taken, i.e. the work
  /// needed to certify it as the next eigenvalue in objective order.
  int solves_before = 0;
};

struct FrontierResult {
  std::vector<FrontierAttempt> attempts;
  std::vector<FrontierPop> pops;
  /// False when a failure stopped the search or the grid ran out before
  /// `count` pops.
  bool complete = true;

  int solve_count() const noexcept { return static_cast<int>(attempts.size()); }
  /// Largest solve order among the first p pops (p >= 1): how many solves
  /// it took to compute the p smallest eigenvalues.
  int solves_for(int p) const;
  const FrontierAttempt& popped(int p) const { return attempts.at(static_cast<std::size_t>(pops.at(static_cast<std::size_t>(p)).attempt)); }
};

/// Enumerates eigenvalues in increasing order of objective^T lambda: keeps
/// a frontier of solved multiindices, pops the smallest, and solves its
/// successors i + e_k that have not been attempted and lie inside the grid.
/// `objective` has m entries (inhomogeneous, acting on lambda_1..lambda_m)
/// or m+1 entries (homogeneous problems, eigenvalues taken in P^+). The
/// order is exact when the problem is definite with respect to the
/// objective direction.
FrontierResult frontier_smallest(const MepProblem& problem, int count, const RVector& objective,
                                 const SolverConfig& config, const FrontierOptions& options = {});

}  // namespace mep
