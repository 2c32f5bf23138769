// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/definiteness.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "mepsolve/eig_kernel.hpp"
#include "mepsolve/newton.hpp"

namespace mep {

namespace {

std::vector<CVector> random_unit_tuple(const MepProblem& problem, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<CVector> out;
  for (int k = 0; k < problem.m(); ++k) {
    CVector u(problem.dim(k));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double re = normal(rng);
      const double im = problem.is_real() ? 0.0 : normal(rng);
      u(i) = Complex(re, im);
    }
    out.push_back(u / u.norm());
  }
  return out;
}

void require_hermitian(const MepProblem& problem, const char* what) {
  if (!problem.hermitian()) {
    throw MepError(ErrorKind::NotHermitian, std::string(what) + " requires a Hermitian problem");
  }
}

void require_samples(int samples) {
  if (samples < 1) throw MepError(ErrorKind::InvalidArgument, "samples must be at least 1");
}

// Smallest eigenvalue over k of sigma_k B_k(alpha).
double local_margin(const MepProblem& problem, const std::vector<int>& sigma, const RVector& alpha) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < problem.m(); ++k) {
    const CMatrix b = static_cast<double>(sigma[static_cast<std::size_t>(k)]) * assemble_pencil(problem, k, alpha);
    worst = std::min(worst, kth_largest_hermitian(b, problem.dim(k)).value);
  }
  return worst;
}

// Soft minimum -log(sum exp(-beta e))/beta over the eigenvalues e of all
// sigma_k B_k(alpha), and its gradient in alpha. Smooth and concave, it
// approaches local_margin from below as beta grows.
double soft_margin(const MepProblem& problem, const std::vector<int>& sigma, const RVector& alpha, double beta,
                   RVector& grad) {
  const int m = problem.m();
  std::vector<Eigen::SelfAdjointEigenSolver<CMatrix>> solvers;
  double lowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const double s = static_cast<double>(sigma[static_cast<std::size_t>(k)]);
    solvers.emplace_back(s * assemble_pencil(problem, k, alpha));
    lowest = std::min(lowest, solvers.back().eigenvalues().minCoeff());
  }
  double z = 0.0;
  for (const auto& es : solvers) z += (-beta * (es.eigenvalues().array() - lowest)).exp().sum();
  grad = RVector::Zero(m + 1);
  for (int k = 0; k < m; ++k) {
    const double s = static_cast<double>(sigma[static_cast<std::size_t>(k)]);
    const auto& es = solvers[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double w = std::exp(-beta * (es.eigenvalues()(i) - lowest)) / z;
      const CVector v = es.eigenvectors().col(i);
      for (int l = 0; l <= m; ++l) grad(l) += w * s * v.dot(problem.matrix(k, l) * v).real();
    }
  }
  return lowest - std::log(z) / beta;
}

// Maximizes the margin over the unit ball by gradient ascent on the soft
// minimum with increasing beta. Positive homogeneity means a positive
// maximum is attained on the sphere, so results are reported normalized.
void ascend(const MepProblem& problem, const std::vector<int>& sigma, RVector& best, double& best_margin) {
  RVector alpha = best;
  for (double beta : {3.0, 10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0}) {
    double step = 0.1;
    for (int it = 0; it < 100; ++it) {
      RVector grad;
      const double value = soft_margin(problem, sigma, alpha, beta, grad);
      if (grad.norm() < 1e-14) break;
      bool moved = false;
      for (int bt = 0; bt < 30 && !moved; ++bt) {
        RVector trial = alpha + step * grad;
        if (trial.norm() > 1.0) trial.normalize();
        RVector unused;
        if (soft_margin(problem, sigma, trial, beta, unused) > value) {
          alpha = trial;
          moved = true;
          step *= 1.5;
        } else {
          step *= 0.5;
        }
      }
      if (!moved) break;
    }
    const double norm = alpha.norm();
    if (norm < 1e-12) continue;
    const double margin = local_margin(problem, sigma, alpha) / norm;
    if (margin > best_margin) {
      best_margin = margin;
      best = alpha / norm;
    }
  }
}

}  // namespace

DefinitenessReport check_right_definite_sampled(const MepProblem& problem, int samples, std::uint64_t seed,
                                                const std::optional<RVector>& mu) {
  require_hermitian(problem, "right definiteness check");
  require_samples(samples);
  const int m = problem.m();
  RVector direction = RVector::Zero(m + 1);
  direction(0) = 1.0;
  if (mu) {
    if (mu->size() != m + 1) throw MepError(ErrorKind::DimensionMismatch, "mu must have m+1 entries");
    direction = *mu;
  }
  std::mt19937_64 rng(seed);
  DefinitenessReport report;
  report.samples = samples;
  report.direction = direction;
  report.worst_margin = std::numeric_limits<double>::infinity();
  RMatrix stacked(m + 1, m + 1);
  stacked.row(0) = direction.transpose();
  for (int s = 0; s < samples; ++s) {
    auto u = random_unit_tuple(problem, rng);
    stacked.bottomRows(m) = w_matrix(problem, u);
    const double det = stacked.determinant();
    if (det < report.worst_margin) {
      report.worst_margin = det;
      report.witness = std::move(u);
    }
  }
  report.passed = report.worst_margin > 0.0;
  return report;
}

DefinitenessReport check_left_definite_sampled(const MepProblem& problem, const RVector& mu, int samples,
                                               std::uint64_t seed) {
  require_hermitian(problem, "left definiteness check");
  require_samples(samples);
  const int m = problem.m();
  if (mu.size() != m) throw MepError(ErrorKind::DimensionMismatch, "mu must have m entries");
  DefinitenessReport report;
  report.samples = samples;
  report.direction = RVector::Zero(m + 1);
  report.direction.tail(m) = mu;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const double top = kth_largest_hermitian(problem.matrix(k, 0), 1).value;
    report.worst_margin = std::min(report.worst_margin, -top);
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto u = random_unit_tuple(problem, rng);
    const RMatrix j = w_matrix(problem, u).rightCols(m);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      RMatrix replaced = j;
      replaced.row(k) = mu.transpose();
      worst = std::min(worst, replaced.determinant());
    }
    if (worst < report.worst_margin) {
      report.worst_margin = worst;
      report.witness = std::move(u);
    }
  }
  report.passed = report.worst_margin > 0.0;
  return report;
}

DefinitenessReport check_local_definite_sampled(const MepProblem& problem, int samples, std::uint64_t seed) {
  require_hermitian(problem, "local definiteness check");
  require_samples(samples);
  const int m = problem.m();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Shared candidate directions: +-e_i and random unit vectors.
  std::vector<RVector> candidates;
  for (int i = 0; i <= m; ++i) {
    RVector e = RVector::Zero(m + 1);
    e(i) = 1.0;
    candidates.push_back(e);
    candidates.push_back(-e);
  }
  for (int s = 0; s < samples; ++s) {
    RVector a(m + 1);
    for (int i = 0; i <= m; ++i) a(i) = normal(rng);
    candidates.push_back(a / a.norm());
  }

  DefinitenessReport report;
  report.samples = samples;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const int patterns = 1 << m;
  for (int p = 0; p < patterns; ++p) {
    std::vector<int> sigma(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) sigma[static_cast<std::size_t>(k)] = (p >> k) & 1 ? -1 : 1;

    RVector best = candidates.front();
    double best_margin = -std::numeric_limits<double>::infinity();
    for (const auto& a : candidates) {
      const double margin = local_margin(problem, sigma, a);
      if (margin > best_margin) {
        best_margin = margin;
        best = a;
      }
    }
    if (best_margin <= 0.0) ascend(problem, sigma, best, best_margin);
    if (best_margin < report.worst_margin) {
      report.worst_margin = best_margin;
      report.direction = best;
    }
  }
  report.passed = report.worst_margin > 0.0;
  return report;
}

}  // namespace mep
