// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/problem.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "mepsolve/eig_kernel.hpp"
#include "spectrum_detail.hpp"

namespace mep {

double hermitian_defect(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return defect / scale;
}

MepProblem::MepProblem(std::vector<std::vector<CMatrix>> matrices, bool hermitian, bool homogeneous,
                       std::string family)
    : matrices_(std::move(matrices)),
      hermitian_(hermitian),
      homogeneous_(homogeneous),
      family_(std::move(family)) {
  const std::size_t m = matrices_.size();
  if (m == 0) throw MepError(ErrorKind::DimensionMismatch, "problem needs at least one equation");
  dims_.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& row = matrices_[k];
    if (row.size() != m + 1) {
      throw MepError(ErrorKind::DimensionMismatch,
                     "equation " + std::to_string(k + 1) + " must have m+1 = " + std::to_string(m + 1) +
                         " matrices, got " + std::to_string(row.size()));
    }
    const Eigen::Index n = row[0].rows();
    if (n < 1) throw MepError(ErrorKind::DimensionMismatch, "matrices must be non-empty");
    for (std::size_t l = 0; l <= m; ++l) {
      if (row[l].rows() != n || row[l].cols() != n) {
        throw MepError(ErrorKind::DimensionMismatch,
                       "A_" + std::to_string(k + 1) + std::to_string(l) + " is not " + std::to_string(n) +
                           "x" + std::to_string(n));
      }
      if (!row[l].allFinite()) {
        throw MepError(ErrorKind::InvalidArgument, "matrix entries must be finite");
      }
      if (real_ && (row[l].imag().array() != 0.0).any()) real_ = false;
      if (hermitian_ && hermitian_defect(row[l]) > 1e-12) {
        throw MepError(ErrorKind::NotHermitian,
                       "A_" + std::to_string(k + 1) + std::to_string(l) + " is not Hermitian");
      }
    }
    dims_.push_back(static_cast<int>(n));
  }
}

const CMatrix& MepProblem::matrix(int k, int l) const {
  return matrices_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(l));
}

std::size_t MepProblem::tensor_size() const noexcept {
  std::size_t total = 1;
  for (int n : dims_) total *= static_cast<std::size_t>(n);
  return total;
}

Multiindex Multiindex::parse(std::string_view text, char sep) {
  std::vector<int> entries;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(sep, start), text.size());
    const std::string_view token = text.substr(start, end - start);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw MepError(ErrorKind::InvalidArgument, "malformed multiindex '" + std::string(text) + "'");
    }
    entries.push_back(value);
    start = end + 1;
  }
  return Multiindex(std::move(entries));
}

bool Multiindex::valid_for(const std::vector<int>& dims) const noexcept {
  if (entries_.size() != dims.size()) return false;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (entries_[k] < 1 || entries_[k] > dims[k]) return false;
  }
  return true;
}

void Multiindex::validate(const std::vector<int>& dims) const {
  if (!valid_for(dims)) {
    throw MepError(ErrorKind::InvalidArgument, "multiindex " + to_string() + " is not valid for the problem");
  }
}

bool Multiindex::precedes(const Multiindex& other) const noexcept {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k] > other.entries_[k]) return false;
  }
  return true;
}

Multiindex Multiindex::successor(int k) const {
  Multiindex next = *this;
  next.entries_.at(static_cast<std::size_t>(k)) += 1;
  return next;
}

std::string Multiindex::to_string(char sep) const {
  std::string out;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (k) out.push_back(sep);
    out += std::to_string(entries_[k]);
  }
  return out;
}

RVector Eigenpair::lifted() const {
  if (homogeneous) return lambda;
  RVector out(lambda.size() + 1);
  out(0) = 1.0;
  out.tail(lambda.size()) = lambda;
  return out;
}

RVector lift(const MepProblem& problem, const RVector& lambda) {
  if (lambda.size() == problem.m() + 1) return lambda;
  if (lambda.size() != problem.m()) {
    throw MepError(ErrorKind::DimensionMismatch, "lambda must have m or m+1 entries");
  }
  RVector out(problem.m() + 1);
  out(0) = 1.0;
  out.tail(problem.m()) = lambda;
  return out;
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw MepError(ErrorKind::InvalidArgument, "tol must be positive");
  if (max_iter < 1) throw MepError(ErrorKind::InvalidArgument, "max_iter must be at least 1");
  if (!(tau > 0.0 && tau < 1.0)) throw MepError(ErrorKind::InvalidArgument, "tau must lie in (0, 1)");
  if (max_damping < 1) throw MepError(ErrorKind::InvalidArgument, "max_damping must be at least 1");
  if (!(imag_tol > 0.0)) throw MepError(ErrorKind::InvalidArgument, "imag_tol must be positive");
}

std::string_view status_name(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iter";
    case SolveStatus::Breakdown: return "breakdown";
  }
  return "unknown";
}

double residual(const MepProblem& problem, const RVector& lambda, const std::vector<CVector>& vectors) {
  const RVector lam = lift(problem, lambda);
  if (static_cast<int>(vectors.size()) != problem.m()) {
    throw MepError(ErrorKind::DimensionMismatch, "residual: need one vector per equation");
  }
  double worst = 0.0;
  for (int k = 0; k < problem.m(); ++k) {
    const CVector& u = vectors[static_cast<std::size_t>(k)];
    if (u.size() != problem.dim(k)) {
      throw MepError(ErrorKind::DimensionMismatch, "residual: vector size does not match n_k");
    }
    CVector r = lam(0) * (problem.matrix(k, 0) * u);
    for (int l = 1; l <= problem.m(); ++l) r.noalias() += lam(l) * (problem.matrix(k, l) * u);
    worst = std::max(worst, r.norm() / u.norm());
  }
  return worst;
}

double residual(const MepProblem& problem, const Eigenpair& pair) {
  return residual(problem, pair.lambda, pair.right);
}

Multiindex multiindex_of(const MepProblem& problem, const RVector& lambda, double imag_tol) {
  const RVector lam = lift(problem, lambda);
  std::vector<int> ranks;
  ranks.reserve(static_cast<std::size_t>(problem.m()));
  for (int k = 0; k < problem.m(); ++k) {
    const CMatrix b = assemble_pencil(problem, k, lam);
    RVector values;
    if (problem.hermitian()) {
      values = detail::sorted_hermitian_spectrum(b);
    } else {
      const auto sorted = detail::sorted_general_spectrum(b);
      values = sorted.values.real();
      Eigen::Index nearest = 0;
      values.cwiseAbs().minCoeff(&nearest);
      for (Eigen::Index r = 0; r <= nearest; ++r) {
        if (std::abs(sorted.values(r).imag()) > imag_tol * sorted.scale) {
          throw MepError(ErrorKind::ComplexSpectrum, "pencil spectrum is not real near zero");
        }
      }
    }
    // minCoeff returns the first minimizer, i.e. the smaller rank on ties.
    Eigen::Index nearest = 0;
    values.cwiseAbs().minCoeff(&nearest);
    ranks.push_back(static_cast<int>(nearest) + 1);
  }
  return Multiindex(std::move(ranks));
}

}  // namespace mep
