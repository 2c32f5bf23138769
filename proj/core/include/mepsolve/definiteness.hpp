// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mepsolve/problem.hpp"

namespace mep {

/// Outcome of a sampled definiteness test. A pass is evidence only; a
/// failure of the right or left test comes with unit vectors at which the
/// determinant condition is violated.
struct DefinitenessReport {
  bool passed = false;
  /// Smallest value of the tested quantity over all samples.
  double worst_margin = 0.0;
  int samples = 0;
  /// Vectors u_1..u_m at the worst sample (right/left checks).
  std::vector<CVector> witness;
  /// Direction alpha attaining the reported margin (local check).
  RVector direction;
};

/// det [mu^T; W(u)] > 0 at `samples` random unit tuples u. `mu` has m+1
/// entries and defaults to e_0, which is right definiteness of the
/// inhomogeneous problem.
DefinitenessReport check_right_definite_sampled(const MepProblem& problem, int samples, std::uint64_t seed = 0,
                                                const std::optional<RVector>& mu = std::nullopt);

/// Every A_k0 negative definite, and for each k the m x m matrix obtained
/// from the right block of W(u) by replacing row k with (mu_1..mu_m) has
/// positive determinant. `mu` has m entries (the leading zero is implied).
/// The margin is min(-lambda_max(A_k0), sampled determinants).
DefinitenessReport check_left_definite_sampled(const MepProblem& problem, const RVector& mu, int samples,
                                               std::uint64_t seed = 0);

/// For every sign pattern sigma in {-1, 1}^m, searches for alpha in R^{m+1}
/// with sigma_k sum_l alpha_l A_kl positive definite for all k. Candidates
/// are +-e_i and `samples` random unit directions; if none works, gradient
/// ascent on a soft minimum of the eigenvalues continues from the best. The margin of a pattern is
/// the best min_k lambda_min(sigma_k B_k(alpha)) over unit alpha found; the
/// report carries the worst pattern. Only the Hermitian case is supported.
DefinitenessReport check_local_definite_sampled(const MepProblem& problem, int samples, std::uint64_t seed = 0);

}  // namespace mep
