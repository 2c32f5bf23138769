// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/records.hpp"

#include <algorithm>
#include <cstdio>

namespace mep {

namespace {

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Problem ids come from file names; quote them if they would break the row.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_dims(const std::vector<int>& dims) {
  if (dims.empty()) return {};
  if (std::all_of(dims.begin(), dims.end(), [&](int n) { return n == dims.front(); })) {
    return std::to_string(dims.front());
  }
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(dims[i]);
  }
  return out;
}

RunRecord make_record(const std::string& problem_id, const MepProblem& problem, const SolveReport& report,
                      std::optional<int> solve_order) {
  RunRecord r;
  r.problem_id = problem_id;
  r.family = problem.family();
  r.dims = problem.dims();
  r.m = problem.m();
  r.target = report.pair.index;
  r.sign = report.pair.sign;
  r.status = report.status == SolveStatus::Breakdown && report.error ? std::string(error_name(*report.error))
                                                                    : std::string(status_name(report.status));
  r.iterations = report.iterations;
  if (!report.residuals.empty()) r.residual = report.residuals.back();
  r.lambda.assign(static_cast<std::size_t>(problem.m() + 1), std::nullopt);
  const RVector& lambda = report.pair.lambda;
  if (lambda.size() == problem.m() + 1) {
    for (Eigen::Index i = 0; i < lambda.size(); ++i) r.lambda[static_cast<std::size_t>(i)] = lambda(i);
  } else if (lambda.size() == problem.m()) {
    for (Eigen::Index i = 0; i < lambda.size(); ++i) r.lambda[static_cast<std::size_t>(i + 1)] = lambda(i);
  }
  r.wall_time_s = report.wall_time;
  r.solve_order = solve_order;
  return r;
}

void write_csv_header(std::ostream& out, int m) {
  out << "problem_id,family,n,m,target_index,sign,status,iterations,residual";
  for (int l = 0; l <= m; ++l) out << ",lambda_" << l;
  out << ",wall_time_s,solve_order\n";
}

void write_csv_row(std::ostream& out, const RunRecord& r) {
  out << field(r.problem_id) << ',' << field(r.family) << ',' << format_dims(r.dims) << ',' << r.m << ','
      << r.target.to_string('-') << ',';
  if (r.sign) out << sign_char(*r.sign);
  out << ',' << r.status << ',' << r.iterations << ',';
  if (r.residual) out << number(*r.residual);
  for (const auto& l : r.lambda) {
    out << ',';
    if (l) out << number(*l);
  }
  out << ',' << number(r.wall_time_s) << ',';
  if (r.solve_order) out << *r.solve_order;
  out << '\n';
}

}  // namespace mep
