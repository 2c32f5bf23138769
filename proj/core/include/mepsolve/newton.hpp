// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mepsolve/problem.hpp"

namespace mep {

/// m x (m+1) matrix with entries u_k^H A_kl u_k (Hermitian problems) or
/// w_k^H A_kl v_k (non-Hermitian problems, left vectors supplied). Its right
/// m x m block is the Jacobian of F_i in the eigenvectors' directions.
using WMatrix = RMatrix;

/// Builds W from one right vector per equation. When `left` is non-empty
/// the biorthogonal form w_k^H A_kl v_k is used and imaginary parts are
/// dropped. Hermitian problems throw NotHermitian if an entry has an
/// imaginary part above rounding level.
WMatrix w_matrix(const MepProblem& problem, std::span<const CVector> right,
                 std::span<const CVector> left = {});

/// Values of F_i at a point together with the eigenvectors realizing them.
struct IndexFunction {
  RVector values;
  std::vector<CVector> right;
  std::vector<CVector> left;  ///< non-Hermitian problems only
};

/// Evaluates F_i(lambda): component k is the i_k-th largest eigenvalue of
/// B_k(lambda). `lambda` may be an m-vector (lifted with lambda_0 = 1) or a
/// homogeneous (m+1)-vector.
IndexFunction f_index(const MepProblem& problem, const Multiindex& index, const RVector& lambda,
                      double imag_tol = 1e-8);

/// Solves W (1, lambda)^T = 0 for lambda in R^m. Throws SingularJacobian when
/// the right m x m block has reciprocal condition below 1e-14.
RVector newton_step_inhomogeneous(const WMatrix& w);

/// Unit null vector of W oriented so that sign det [lambda^T; W] = sign.
/// Throws RankDeficient when the m-th singular value of W is below
/// 1e-12 ||W||.
RVector newton_step_homogeneous(const WMatrix& w, Sign sign);

/// Sign of det(a) (+1, -1 or 0), from an LU factorization without forming
/// the product of pivots.
int determinant_sign(const RMatrix& a);

struct StartVectors {
  std::vector<CVector> right;
  /// Optional; defaults to `right` for non-Hermitian solves.
  std::vector<CVector> left;
};

/// Unit vectors with independent standard normal entries.
StartVectors random_start(const MepProblem& problem, std::uint64_t seed);

/// Seed for one target, mixing the run seed with the multiindex and sign so
/// that results do not depend on the order in which targets are solved.
std::uint64_t target_seed(std::uint64_t seed, const Multiindex& index, std::optional<Sign> sign = std::nullopt);

/// Semismooth Newton iteration for the inhomogeneous problem: each step is
/// the tensor Rayleigh quotient of the current vectors followed by m pencil
/// eigensolves at the new point. Hermitian problems use the symmetric
/// kernel, others the biorthogonal one. `config.globalize` switches to
/// solve_globalized.
///
/// Stops when ||F_i||_inf <= tol (Converged) or after max_iter steps
/// (MaxIterations). Kernel failures are rethrown as SolveFailure carrying
/// the iteration number.
SolveReport solve(const MepProblem& problem, const Multiindex& target, const SolverConfig& config,
                  const std::optional<StartVectors>& start = std::nullopt);

/// Homogeneous variant: iterates stay on the unit sphere in the component
/// selected by the sign of det [lambda^T; W].
SolveReport solve(const MepProblem& problem, const SignedMultiindex& target, const SolverConfig& config,
                  const std::optional<StartVectors>& start = std::nullopt);

/// Newton with backtracking on ||F_i||_inf: a step that does not decrease
/// the residual is replaced by tau * new + (1 - tau) * previous until it
/// does, at most config.max_damping times (then StallDetected). The first
/// step is always accepted.
SolveReport solve_globalized(const MepProblem& problem, const Multiindex& target, const SolverConfig& config,
                             const std::optional<StartVectors>& start = std::nullopt);

}  // namespace mep
