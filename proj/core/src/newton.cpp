// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/newton.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "mepsolve/eig_kernel.hpp"

namespace mep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Mode { Inhomogeneous, Homogeneous };

struct DriverOptions {
  Mode mode = Mode::Inhomogeneous;
  Sign sign = Sign::Plus;
  bool damping = false;
};

void check_start(const MepProblem& problem, const StartVectors& start) {
  if (static_cast<int>(start.right.size()) != problem.m()) {
    throw MepError(ErrorKind::DimensionMismatch, "start vectors: need one right vector per equation");
  }
  if (!start.left.empty() && static_cast<int>(start.left.size()) != problem.m()) {
    throw MepError(ErrorKind::DimensionMismatch, "start vectors: need one left vector per equation");
  }
  for (int k = 0; k < problem.m(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (start.right[kk].size() != problem.dim(k) || (!start.left.empty() && start.left[kk].size() != problem.dim(k))) {
      throw MepError(ErrorKind::DimensionMismatch, "start vectors: size does not match n_k");
    }
  }
}

// Output view of a homogeneous or lifted point.
RVector visible(const RVector& lifted, Mode mode) {
  return mode == Mode::Homogeneous ? lifted : RVector(lifted.tail(lifted.size() - 1));
}

SolveReport drive(const MepProblem& problem, const Multiindex& target, const SolverConfig& config,
                  const std::optional<StartVectors>& start, DriverOptions opts) {
  config.validate();
  target.validate(problem.dims());
  const auto t0 = std::chrono::steady_clock::now();
  const bool biorthogonal = !problem.hermitian();

  StartVectors current =
      start ? *start
            : random_start(problem, target_seed(config.seed, target,
                                                opts.mode == Mode::Homogeneous ? std::optional(opts.sign)
                                                                               : std::nullopt));
  check_start(problem, current);
  if (biorthogonal && current.left.empty()) current.left = current.right;

  SolveReport report;
  RVector previous;
  double previous_norm = std::numeric_limits<double>::infinity();
  IndexFunction eval;
  RVector point;

  for (int j = 1; j <= config.max_iter; ++j) {
    try {
      const WMatrix w = biorthogonal ? w_matrix(problem, current.right, current.left)
                                     : w_matrix(problem, current.right);
      if (opts.mode == Mode::Homogeneous) {
        point = newton_step_homogeneous(w, opts.sign);
      } else {
        point.resize(problem.m() + 1);
        point(0) = 1.0;
        point.tail(problem.m()) = newton_step_inhomogeneous(w);
      }
      eval = f_index(problem, target, point, config.imag_tol);
      double norm = eval.values.cwiseAbs().maxCoeff();

      if (opts.damping && j > 1) {
        int rounds = 0;
        while (norm >= previous_norm && norm > config.tol) {
          if (++rounds > config.max_damping) {
            throw MepError(ErrorKind::StallDetected,
                           "damping failed to decrease the residual after " +
                               std::to_string(config.max_damping) + " rounds");
          }
          point = config.tau * point + (1.0 - config.tau) * previous;
          if (opts.mode == Mode::Homogeneous) point.normalize();
          eval = f_index(problem, target, point, config.imag_tol);
          norm = eval.values.cwiseAbs().maxCoeff();
        }
        report.damping_rounds += rounds;
      }

      report.iterations = j;
      report.residuals.push_back(norm);
      report.iterates.push_back(visible(point, opts.mode));
      current.right = eval.right;
      if (biorthogonal) current.left = eval.left;
      previous = point;
      previous_norm = norm;

      if (norm <= config.tol) {
        report.status = SolveStatus::Converged;
        break;
      }
    } catch (const SolveFailure&) {
      throw;
    } catch (const MepError& e) {
      throw SolveFailure(e.kind(), j, e.detail());
    }
  }

  report.pair.homogeneous = opts.mode == Mode::Homogeneous;
  report.pair.lambda = report.iterates.empty() ? RVector() : report.iterates.back();
  report.pair.right = current.right;
  if (biorthogonal) report.pair.left = current.left;
  report.pair.index = target;
  if (opts.mode == Mode::Homogeneous) report.pair.sign = opts.sign;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace

WMatrix w_matrix(const MepProblem& problem, std::span<const CVector> right, std::span<const CVector> left) {
  const int m = problem.m();
  if (static_cast<int>(right.size()) != m || (!left.empty() && static_cast<int>(left.size()) != m)) {
    throw MepError(ErrorKind::DimensionMismatch, "w_matrix: need one vector per equation");
  }
  WMatrix w(m, m + 1);
  for (int k = 0; k < m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const CVector& v = right[kk];
    const CVector& u = left.empty() ? v : left[kk];
    if (v.size() != problem.dim(k) || u.size() != problem.dim(k)) {
      throw MepError(ErrorKind::DimensionMismatch, "w_matrix: vector size does not match n_k");
    }
    for (int l = 0; l <= m; ++l) {
      const CMatrix& a = problem.matrix(k, l);
      const Complex entry = u.dot(a * v);  // u^H A v
      if (left.empty() && problem.hermitian()) {
        const double bound = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff() * static_cast<double>(a.rows())) *
                             v.squaredNorm();
        if (std::abs(entry.imag()) > bound) {
          throw MepError(ErrorKind::NotHermitian, "quadratic form has a non-negligible imaginary part");
        }
      }
      w(k, l) = entry.real();
    }
  }
  return w;
}

IndexFunction f_index(const MepProblem& problem, const Multiindex& index, const RVector& lambda, double imag_tol) {
  index.validate(problem.dims());
  const RVector lam = lift(problem, lambda);
  const int m = problem.m();
  IndexFunction out;
  out.values.resize(m);
  out.right.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const CMatrix b = assemble_pencil(problem, k, lam);
    if (problem.hermitian()) {
      auto pair = kth_largest_hermitian(b, index[k]);
      out.values(k) = pair.value;
      out.right.push_back(std::move(pair.vector));
    } else {
      auto pair = kth_largest_biorthogonal(b, index[k], imag_tol);
      out.values(k) = pair.value;
      out.right.push_back(std::move(pair.right));
      out.left.push_back(std::move(pair.left));
    }
  }
  return out;
}

RVector newton_step_inhomogeneous(const WMatrix& w) {
  const Eigen::Index m = w.rows();
  if (w.cols() != m + 1 || m == 0) {
    throw MepError(ErrorKind::DimensionMismatch, "newton_step_inhomogeneous: W must be m x (m+1)");
  }
  const RMatrix jac = w.rightCols(m);
  Eigen::PartialPivLU<RMatrix> lu(jac);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-14)) {
    throw MepError(ErrorKind::SingularJacobian, "reciprocal condition " + std::to_string(rcond));
  }
  RVector lambda = lu.solve(-w.col(0));
  if (!lambda.allFinite()) throw MepError(ErrorKind::SingularJacobian, "non-finite Newton step");
  return lambda;
}

int determinant_sign(const RMatrix& a) {
  if (a.rows() != a.cols()) throw MepError(ErrorKind::DimensionMismatch, "determinant_sign: matrix must be square");
  if (a.rows() == 0) return 1;
  Eigen::PartialPivLU<RMatrix> lu(a);
  int sign = static_cast<int>(lu.permutationP().determinant());
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) == 0.0) return 0;
    if (diag(i) < 0.0) sign = -sign;
  }
  return sign;
}

RVector newton_step_homogeneous(const WMatrix& w, Sign sign) {
  const Eigen::Index m = w.rows();
  if (w.cols() != m + 1 || m == 0) {
    throw MepError(ErrorKind::DimensionMismatch, "newton_step_homogeneous: W must be m x (m+1)");
  }
  Eigen::JacobiSVD<RMatrix> svd(w, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  if (!(sv(m - 1) >= 1e-12 * sv(0)) || sv(0) == 0.0) {
    throw MepError(ErrorKind::RankDeficient, "W does not have full rank m");
  }
  RVector lambda = svd.matrixV().col(m);
  lambda.normalize();
  RMatrix stacked(m + 1, m + 1);
  stacked.row(0) = lambda.transpose();
  stacked.bottomRows(m) = w;
  const int s = determinant_sign(stacked);
  if (s == 0) throw MepError(ErrorKind::RankDeficient, "orientation determinant vanished");
  if (static_cast<double>(s) != sign_value(sign)) lambda = -lambda;
  return lambda;
}

StartVectors random_start(const MepProblem& problem, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  StartVectors out;
  for (int k = 0; k < problem.m(); ++k) {
    CVector v(problem.dim(k));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    v.normalize();
    out.right.push_back(std::move(v));
  }
  return out;
}

std::uint64_t target_seed(std::uint64_t seed, const Multiindex& index, std::optional<Sign> sign) {
  std::uint64_t h = splitmix64(seed);
  for (int v : index.entries()) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
  if (sign) h = splitmix64(h ^ (*sign == Sign::Plus ? 0x2bULL : 0x2dULL));
  return h;
}

SolveReport solve(const MepProblem& problem, const Multiindex& target, const SolverConfig& config,
                  const std::optional<StartVectors>& start) {
  if (config.globalize) return solve_globalized(problem, target, config, start);
  return drive(problem, target, config, start, {Mode::Inhomogeneous, Sign::Plus, false});
}

SolveReport solve(const MepProblem& problem, const SignedMultiindex& target, const SolverConfig& config,
                  const std::optional<StartVectors>& start) {
  return drive(problem, target.index, config, start, {Mode::Homogeneous, target.sign, config.globalize});
}

SolveReport solve_globalized(const MepProblem& problem, const Multiindex& target, const SolverConfig& config,
                             const std::optional<StartVectors>& start) {
  return drive(problem, target, config, start, {Mode::Inhomogeneous, Sign::Plus, true});
}

}  // namespace mep
