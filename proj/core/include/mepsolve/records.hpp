// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mepsolve/problem.hpp"

namespace mep {

/// One CSV row: a single attempted solve.
struct RunRecord {
  std::string problem_id;
  std::string family;
  std::vector<int> dims;
  int m = 0;
  Multiindex target;
  std::optional<Sign> sign;
  /// converged, max-iter, or the error name of a breakdown.
  std::string status;
  int iterations = 0;
  std::optional<double> residual;
  /// lambda_0..lambda_m; lambda_0 is absent for inhomogeneous solves and
  /// everything is absent when the solve did not produce an iterate.
  std::vector<std::optional<double>> lambda;
  double wall_time_s = 0.0;
  std::optional<int> solve_order;
};

RunRecord make_record(const std::string& problem_id, const MepProblem& problem, const SolveReport& report,
                      std::optional<int> solve_order = std::nullopt);

/// Header for problems with m parameters: lambda columns run 0..m.
void write_csv_header(std::ostream& out, int m);
void write_csv_row(std::ostream& out, const RunRecord& record);

/// "n" column: the common dimension, or dims joined by '-' when they differ.
std::string format_dims(const std::vector<int>& dims);

}  // namespace mep
