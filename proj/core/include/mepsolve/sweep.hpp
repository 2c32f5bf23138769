// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "mepsolve/frontier.hpp"
#include "mepsolve/problem.hpp"

namespace mep {

/// Sweeps above this many multiindices need SweepOptions::force.
inline constexpr std::size_t kSweepGuard = 1'000'000;

struct SweepEntry {
  Multiindex index;
  SolveReport report;
  int tries = 1;
};

struct SweepOptions {
  int threads = 1;
  /// Extra attempts with a fresh seed after a failed solve.
  int retries = 3;
  bool force = false;
  /// Component of the eigenvalue sphere for homogeneous problems.
  Sign sign = Sign::Plus;
  /// Called once per multiindex in lexicographic order, as soon as that
  /// entry and all earlier ones are done. Calls are serialized.
  std::function<void(const SweepEntry&)> on_entry;
};

/// Every multiindex of the grid {1..n_1} x ... x {1..n_m}, last index
/// varying fastest.
std::vector<Multiindex> all_multiindices(const std::vector<int>& dims);

/// Solves for every multiindex. Results are in lexicographic order and do
/// not depend on the thread count. Throws SizeGuard above kSweepGuard
/// targets unless forced.
std::vector<SweepEntry> sweep(const MepProblem& problem, const SolverConfig& config,
                              const SweepOptions& options = {});

struct SweepSummary {
  int found = 0;
  int failed = 0;
  double max_residual = 0.0;  ///< over converged entries, ||F||_inf
};

SweepSummary summarize(const std::vector<SweepEntry>& entries);

/// Unit vector in R^{m+1} representing a converged eigenvalue: (1, lambda)
/// normalized, or the homogeneous lambda itself.
RVector unit_homogeneous(const Eigenpair& pair);

struct OracleCheckReport {
  double hausdorff = 0.0;
  bool bijection = false;
  /// Delta with mu = e_0 is positive definite.
  bool delta_definite = false;
  int oracle_count = 0;
  SweepSummary newton;
};

/// Full Newton sweep compared with the Delta-operator oracle.
OracleCheckReport oracle_check(const MepProblem& problem, const SolverConfig& config,
                               const SweepOptions& options = {});

}  // namespace mep
