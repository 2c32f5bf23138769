// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/problem_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mep {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw MepError(ErrorKind::MalformedFile, what);
}

double finite_number(const json& value, const char* where) {
  if (!value.is_number()) malformed(std::string(where) + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) malformed(std::string(where) + ": NaN and Inf are not allowed");
  return x;
}

void append_number(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  out += buf;
}

}  // namespace

MepProblem parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  if (!doc.is_object()) malformed("top level must be an object");
  for (const char* key : {"m", "dims", "hermitian", "matrices"}) {
    if (!doc.contains(key)) malformed(std::string("missing field '") + key + "'");
  }
  if (!doc["m"].is_number_integer()) malformed("'m' must be an integer");
  const long long m = doc["m"].get<long long>();
  if (m < 1) malformed("'m' must be at least 1");
  const json& dims = doc["dims"];
  if (!dims.is_array() || static_cast<long long>(dims.size()) != m) malformed("'dims' must list m sizes");
  if (!doc["hermitian"].is_boolean()) malformed("'hermitian' must be a boolean");
  bool homogeneous = false;
  if (doc.contains("homogeneous")) {
    if (!doc["homogeneous"].is_boolean()) malformed("'homogeneous' must be a boolean");
    homogeneous = doc["homogeneous"].get<bool>();
  }
  std::string family;
  if (doc.contains("family")) {
    if (!doc["family"].is_string()) malformed("'family' must be a string");
    family = doc["family"].get<std::string>();
  }

  const json& mats = doc["matrices"];
  if (!mats.is_array() || static_cast<long long>(mats.size()) != m) malformed("'matrices' must have m entries");

  std::vector<std::vector<CMatrix>> matrices(static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < matrices.size(); ++k) {
    if (!dims[k].is_number_integer() || dims[k].get<long long>() < 1) malformed("'dims' entries must be positive integers");
    const auto n = static_cast<Eigen::Index>(dims[k].get<long long>());
    const json& eq = mats[k];
    if (!eq.is_array() || static_cast<long long>(eq.size()) != m + 1) {
      malformed("equation " + std::to_string(k + 1) + " must have m+1 matrices");
    }
    for (std::size_t l = 0; l < eq.size(); ++l) {
      const json& rows = eq[l];
      if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
        malformed("A_" + std::to_string(k + 1) + std::to_string(l) + " row count does not match dims");
      }
      CMatrix a(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
          malformed("A_" + std::to_string(k + 1) + std::to_string(l) + " column count does not match dims");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const json& entry = row[static_cast<std::size_t>(j)];
          if (!entry.is_array() || entry.size() != 2) malformed("entries must be [re, im] pairs");
          a(i, j) = Complex(finite_number(entry[0], "entry"), finite_number(entry[1], "entry"));
        }
      }
      matrices[k].push_back(std::move(a));
    }
  }

  try {
    return MepProblem(std::move(matrices), doc["hermitian"].get<bool>(), homogeneous, std::move(family));
  } catch (const MepError& e) {
    if (e.kind() == ErrorKind::NotHermitian) throw;
    malformed(e.what());
  }
}

std::string format_problem(const MepProblem& problem) {
  std::string out;
  out += "{\n";
  out += "  \"m\": " + std::to_string(problem.m()) + ",\n";
  out += "  \"dims\": [";
  for (int k = 0; k < problem.m(); ++k) {
    if (k) out += ", ";
    out += std::to_string(problem.dim(k));
  }
  out += "],\n";
  out += std::string("  \"hermitian\": ") + (problem.hermitian() ? "true" : "false") + ",\n";
  out += std::string("  \"homogeneous\": ") + (problem.homogeneous() ? "true" : "false") + ",\n";
  out += "  \"family\": " + nlohmann::json(problem.family()).dump() + ",\n";
  out += "  \"matrices\": [\n";
  for (int k = 0; k < problem.m(); ++k) {
    out += "    [\n";
    for (int l = 0; l <= problem.m(); ++l) {
      const CMatrix& a = problem.matrix(k, l);
      out += "      [\n";
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        out += "        [";
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
          if (j) out += ", ";
          out += '[';
          append_number(out, a(i, j).real());
          out += ", ";
          append_number(out, a(i, j).imag());
          out += ']';
        }
        out += (i + 1 < a.rows()) ? "],\n" : "]\n";
      }
      out += (l < problem.m()) ? "      ],\n" : "      ]\n";
    }
    out += (k + 1 < problem.m()) ? "    ],\n" : "    ]\n";
  }
  out += "  ]\n";
  out += "}\n";
  return out;
}

MepProblem read_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

void write_problem(const MepProblem& problem, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MepError(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << format_problem(problem);
  if (!out) throw MepError(ErrorKind::InvalidArgument, "write failed for " + path.string());
}

}  // namespace mep
