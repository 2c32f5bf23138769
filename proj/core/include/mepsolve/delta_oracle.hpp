// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mepsolve/problem.hpp"

namespace mep {

/// Largest tensor-product dimension the oracle accepts.
inline constexpr std::size_t kDeltaMaxSize = 4096;
inline constexpr int kDeltaMaxParameters = 5;

/// Operator determinants on the tensor-product space. deltas[l] is the
/// determinant of the operator array whose first row is e_l^T and whose
/// row k is (A_k0, ..., A_km), with Kronecker products taken in equation
/// order. `weighted` is sum_l mu_l deltas[l].
struct DeltaOperators {
  std::vector<CMatrix> deltas;
  RVector mu;
  CMatrix weighted;
};

/// Throws SizeGuard when prod n_k exceeds kDeltaMaxSize or m exceeds
/// kDeltaMaxParameters. `mu` defaults to e_0.
DeltaOperators build_delta(const MepProblem& problem, const std::optional<RVector>& mu = std::nullopt);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

struct OracleEigenvalue {
  /// Unit vector in R^{m+1}. Inhomogeneous problems are normalized to
  /// lambda_0 > 0; homogeneous ones are oriented into P^+ using the
  /// rank-one factors of the joint eigenvector.
  RVector lambda;
  Multiindex index;
  /// Position of the largest entry of the joint eigenvector.
  Eigen::Index tensor_index = 0;
  /// Unit factors u_1..u_m of the joint eigenvector (leading singular
  /// vectors of its unfoldings).
  std::vector<CVector> factors;
};

struct OracleOptions {
  /// Weight vector of the operator Delta that must be invertible. When
  /// unset, inhomogeneous problems use e_0 and homogeneous problems search
  /// for a direction of definiteness, falling back to a random direction
  /// with invertible Delta.
  std::optional<RVector> mu;
  std::uint64_t seed = 0;
  double imag_tol = 1e-8;
};

struct OracleResult {
  std::vector<OracleEigenvalue> eigenvalues;
  RVector mu;
  /// Whether the eigenvectors came from a definite generalized Hermitian
  /// problem (as opposed to a general eigensolve).
  bool definite_path = false;
};

/// All prod n_k joint eigenvalues of Delta_l x = lambda_l Delta_0 x,
/// obtained from the eigenvectors of Delta^{-1} C for a fixed random
/// combination C = sum c_l Delta_l, followed by per-operator ratios.
///
/// Throws SingularDelta when Delta is not invertible and NonCommuting when
/// an eigenvector of Delta^{-1} C is not a joint eigenvector of every
/// Delta^{-1} Delta_l within 1e-8.
OracleResult solve_all(const MepProblem& problem, const OracleOptions& options = {});

/// Whether Delta with mu = e_0 is (Hermitian) positive definite.
bool delta_positive_definite(const MepProblem& problem);

/// Multiindices of the oracle output form a bijection with the index grid.
bool is_index_bijection(const MepProblem& problem, const std::vector<OracleEigenvalue>& eigenvalues);

/// Symmetric Hausdorff distance between two sets of vectors in the
/// infinity norm. Returns +inf when exactly one set is empty.
double hausdorff_distance(const std::vector<RVector>& a, const std::vector<RVector>& b);

}  // namespace mep
