// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/delta_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "mepsolve/eig_kernel.hpp"
#include "mepsolve/newton.hpp"

namespace mep {

namespace {

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

void check_size(const MepProblem& problem) {
  if (problem.m() > kDeltaMaxParameters) {
    throw MepError(ErrorKind::SizeGuard, "delta oracle supports at most " + std::to_string(kDeltaMaxParameters) +
                                             " parameters");
  }
  if (problem.tensor_size() > kDeltaMaxSize) {
    throw MepError(ErrorKind::SizeGuard, "tensor-product dimension " + std::to_string(problem.tensor_size()) +
                                             " exceeds " + std::to_string(kDeltaMaxSize));
  }
}

// Leading left singular vectors of the mode-k unfoldings of x, where x is
// stored with the last equation's index varying fastest.
std::vector<CVector> rank_one_factors(const MepProblem& problem, const CVector& x) {
  const int m = problem.m();
  std::vector<CVector> out;
  Eigen::Index inner = static_cast<Eigen::Index>(problem.tensor_size());
  Eigen::Index outer = 1;
  for (int k = 0; k < m; ++k) {
    const Eigen::Index n = problem.dim(k);
    inner /= n;
    // Mode-k unfolding: rows indexed by the k-th tensor index.
    CMatrix unfold(n, outer * inner);
    for (Eigen::Index o = 0; o < outer; ++o)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index r = 0; r < inner; ++r) unfold(i, o * inner + r) = x((o * n + i) * inner + r);
    Eigen::JacobiSVD<CMatrix> svd(unfold, Eigen::ComputeThinU);
    CVector u = svd.matrixU().col(0);
    // Fix the phase so that the largest entry is real positive.
    Eigen::Index pos = 0;
    u.cwiseAbs().maxCoeff(&pos);
    u *= std::conj(u(pos)) / std::abs(u(pos));
    out.push_back(u);
    outer *= n;
  }
  return out;
}

RVector random_unit(int size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RVector v(size);
  for (int i = 0; i < size; ++i) v(i) = normal(rng);
  return v / v.norm();
}

bool keeps_sign(const MepProblem& problem, const RVector& mu, std::mt19937_64& rng, int draws) {
  const int m = problem.m();
  RMatrix stacked(m + 1, m + 1);
  stacked.row(0) = mu.transpose();
  int first = 0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int d = 0; d < draws; ++d) {
    std::vector<CVector> u;
    for (int k = 0; k < m; ++k) {
      CVector v(problem.dim(k));
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), problem.is_real() ? 0.0 : normal(rng));
      u.push_back(v / v.norm());
    }
    stacked.bottomRows(m) = w_matrix(problem, u);
    const int s = determinant_sign(stacked);
    if (s == 0) return false;
    if (first == 0) first = s;
    if (s != first) return false;
  }
  return true;
}

bool invertible(const CMatrix& a) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  return lu.rcond() > 1e-13;
}

RVector choose_mu(const MepProblem& problem, const std::vector<CMatrix>& deltas, std::uint64_t seed) {
  const int m = problem.m();
  RVector e0 = RVector::Zero(m + 1);
  e0(0) = 1.0;
  if (!problem.homogeneous()) return e0;
  std::mt19937_64 rng(seed ^ 0x6d75ULL);
  auto weighted = [&](const RVector& mu) {
    CMatrix d = CMatrix::Zero(deltas[0].rows(), deltas[0].cols());
    for (int l = 0; l <= m; ++l) d += mu(l) * deltas[static_cast<std::size_t>(l)];
    return d;
  };
  if (keeps_sign(problem, e0, rng, 100) && invertible(weighted(e0))) return e0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const RVector mu = random_unit(m + 1, rng);
    if (keeps_sign(problem, mu, rng, 100) && invertible(weighted(mu))) return mu;
  }
  for (int attempt = 0; attempt < 50; ++attempt) {
    const RVector mu = random_unit(m + 1, rng);
    if (invertible(weighted(mu))) return mu;
  }
  throw MepError(ErrorKind::SingularDelta, "no direction with invertible Delta found");
}

// Multiindices realized by lambda when zero is a repeated eigenvalue of
// some pencil: the product of the rank ranges of all near-zero eigenvalues.
std::vector<Multiindex> realized_indices(const MepProblem& problem, const RVector& lambda, double imag_tol) {
  std::vector<std::vector<int>> ranks;
  for (int k = 0; k < problem.m(); ++k) {
    const CMatrix b = assemble_pencil(problem, k, lambda);
    const RVector values = descending_spectrum(b, problem.hermitian(), imag_tol);
    const double tol = 1e-8 * std::max(1.0, b.norm());
    std::vector<int> zero;
    for (Eigen::Index r = 0; r < values.size(); ++r) {
      if (std::abs(values(r)) <= tol) zero.push_back(static_cast<int>(r) + 1);
    }
    if (zero.empty()) return {};
    ranks.push_back(std::move(zero));
  }
  std::vector<Multiindex> out{Multiindex(std::vector<int>{})};
  for (const auto& options : ranks) {
    std::vector<Multiindex> next;
    for (const auto& prefix : out) {
      for (int r : options) {
        auto e = prefix.entries();
        e.push_back(r);
        next.emplace_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Joint eigenvalues of multiplicity c own c multiindices; hand them out in
// order when the count matches.
void label_multiple(const MepProblem& problem, std::vector<OracleEigenvalue>& eigenvalues, double imag_tol) {
  std::vector<char> grouped(eigenvalues.size(), 0);
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (grouped[i]) continue;
    std::vector<std::size_t> group{i};
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      if (!grouped[j] && (eigenvalues[j].lambda - eigenvalues[i].lambda).cwiseAbs().maxCoeff() <= 1e-8) {
        group.push_back(j);
        grouped[j] = 1;
      }
    }
    if (group.size() < 2) continue;
    const auto candidates = realized_indices(problem, eigenvalues[i].lambda, imag_tol);
    if (candidates.size() != group.size()) continue;
    std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
      return eigenvalues[a].tensor_index < eigenvalues[b].tensor_index;
    });
    for (std::size_t g = 0; g < group.size(); ++g) eigenvalues[group[g]].index = candidates[g];
  }
}

}  // namespace

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DeltaOperators build_delta(const MepProblem& problem, const std::optional<RVector>& mu) {
  check_size(problem);
  const int m = problem.m();
  const auto size = static_cast<Eigen::Index>(problem.tensor_size());
  DeltaOperators out;
  out.deltas.assign(static_cast<std::size_t>(m + 1), CMatrix::Zero(size, size));
  std::vector<int> perm(static_cast<std::size_t>(m + 1));
  std::iota(perm.begin(), perm.end(), 0);
  // Row 0 is a coordinate vector, so perm[0] picks the Delta_l receiving
  // the term; rows 1..m contribute A_{k, perm[k]}.
  do {
    CMatrix term = problem.matrix(0, perm[1]);
    for (int k = 1; k < m; ++k) term = kron(term, problem.matrix(k, perm[static_cast<std::size_t>(k + 1)]));
    out.deltas[static_cast<std::size_t>(perm[0])] += static_cast<double>(permutation_sign(perm)) * term;
  } while (std::next_permutation(perm.begin(), perm.end()));

  out.mu = RVector::Zero(m + 1);
  out.mu(0) = 1.0;
  if (mu) {
    if (mu->size() != m + 1) throw MepError(ErrorKind::DimensionMismatch, "mu must have m+1 entries");
    out.mu = *mu;
  }
  out.weighted = CMatrix::Zero(size, size);
  for (int l = 0; l <= m; ++l) out.weighted += out.mu(l) * out.deltas[static_cast<std::size_t>(l)];
  return out;
}

OracleResult solve_all(const MepProblem& problem, const OracleOptions& options) {
  check_size(problem);
  const int m = problem.m();
  DeltaOperators ops = build_delta(problem);
  const RVector mu = options.mu ? *options.mu : choose_mu(problem, ops.deltas, options.seed);
  if (mu.size() != m + 1) throw MepError(ErrorKind::DimensionMismatch, "mu must have m+1 entries");
  const Eigen::Index size = ops.deltas[0].rows();
  CMatrix delta = CMatrix::Zero(size, size);
  for (int l = 0; l <= m; ++l) delta += mu(l) * ops.deltas[static_cast<std::size_t>(l)];

  Eigen::PartialPivLU<CMatrix> lu(delta);
  if (!(lu.rcond() > 1e-13)) throw MepError(ErrorKind::SingularDelta, "Delta is singular for the chosen mu");

  // Fixed random combination separates joint eigenvalues that share some
  // coordinates.
  std::mt19937_64 rng(options.seed ^ 0x636f6d62ULL);
  const RVector c = random_unit(m + 1, rng);
  CMatrix combo = CMatrix::Zero(size, size);
  for (int l = 0; l <= m; ++l) combo += c(l) * ops.deltas[static_cast<std::size_t>(l)];

  OracleResult result;
  result.mu = mu;
  CMatrix vectors;
  if (problem.hermitian()) {
    const CMatrix dh = 0.5 * (delta + delta.adjoint());
    const CMatrix ch = 0.5 * (combo + combo.adjoint());
    for (double s : {1.0, -1.0}) {
      Eigen::LLT<CMatrix> llt(s * dh);
      if (llt.info() != Eigen::Success) continue;
      Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(s * ch, s * dh);
      if (ges.info() != Eigen::Success) continue;
      vectors = ges.eigenvectors();
      result.definite_path = true;
      break;
    }
  }
  if (!result.definite_path) {
    Eigen::ComplexEigenSolver<CMatrix> ces(lu.solve(combo));
    if (ces.info() != Eigen::Success) throw MepError(ErrorKind::EigenFailure, "oracle eigensolve failed");
    vectors = ces.eigenvectors();
  }

  double scale = 0.0;
  for (const auto& d : ops.deltas) scale = std::max(scale, d.norm());
  for (Eigen::Index j = 0; j < size; ++j) {
    CVector x = vectors.col(j);
    x /= x.norm();
    const CVector y = delta * x;
    const double yy = y.squaredNorm();
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> ratios(m + 1);
    for (int l = 0; l <= m; ++l) {
      const CVector z = ops.deltas[static_cast<std::size_t>(l)] * x;
      ratios(l) = y.dot(z) / yy;
      const double defect = (z - ratios(l) * y).norm();
      if (defect > 1e-8 * scale * (1.0 + std::abs(ratios(l)))) {
        throw MepError(ErrorKind::NonCommuting, "eigenvector " + std::to_string(j) +
                                                    " is not a joint eigenvector of Delta_" + std::to_string(l));
      }
    }
    if (ratios.imag().cwiseAbs().maxCoeff() > options.imag_tol * ratios.cwiseAbs().maxCoeff()) {
      throw MepError(ErrorKind::ComplexSpectrum, "oracle found a non-real eigenvalue");
    }
    OracleEigenvalue ev;
    ev.lambda = ratios.real();
    ev.lambda /= ev.lambda.norm();
    ev.factors = rank_one_factors(problem, x);
    x.cwiseAbs().maxCoeff(&ev.tensor_index);
    if (problem.homogeneous()) {
      RMatrix stacked(m + 1, m + 1);
      stacked.row(0) = ev.lambda.transpose();
      stacked.bottomRows(m) = w_matrix(problem, ev.factors);
      if (determinant_sign(stacked) < 0) ev.lambda = -ev.lambda;
    } else {
      if (std::abs(ev.lambda(0)) < 1e-12) {
        throw MepError(ErrorKind::SingularDelta, "eigenvalue at infinity in the inhomogeneous chart");
      }
      if (ev.lambda(0) < 0.0) ev.lambda = -ev.lambda;
    }
    ev.index = multiindex_of(problem, ev.lambda, options.imag_tol);
    result.eigenvalues.push_back(std::move(ev));
  }
  label_multiple(problem, result.eigenvalues, options.imag_tol);
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end(),
            [](const OracleEigenvalue& a, const OracleEigenvalue& b) { return a.index < b.index; });
  return result;
}

bool delta_positive_definite(const MepProblem& problem) {
  const DeltaOperators ops = build_delta(problem);
  const CMatrix& d = ops.deltas[0];
  if (hermitian_defect(d) > 1e-10) return false;
  Eigen::LLT<CMatrix> llt(0.5 * (d + d.adjoint()));
  return llt.info() == Eigen::Success;
}

bool is_index_bijection(const MepProblem& problem, const std::vector<OracleEigenvalue>& eigenvalues) {
  if (eigenvalues.size() != problem.tensor_size()) return false;
  std::set<Multiindex> seen;
  for (const auto& ev : eigenvalues) {
    if (!ev.index.valid_for(problem.dims())) return false;
    if (!seen.insert(ev.index).second) return false;
  }
  return true;
}

double hausdorff_distance(const std::vector<RVector>& a, const std::vector<RVector>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<RVector>& from, const std::vector<RVector>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to) {
        if (x.size() != y.size()) continue;
        best = std::min(best, (x - y).cwiseAbs().maxCoeff());
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace mep
