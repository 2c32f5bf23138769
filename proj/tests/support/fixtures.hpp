// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <mepsolve/gallery.hpp>
#include <mepsolve/problem.hpp>

namespace mep::testing {

CMatrix diag(std::initializer_list<double> entries);

/// All n_k = 1; matrices[k][l] = a(k, l).
MepProblem scalar_problem(const RMatrix& a);

/// m = 1 with A_10 = diag(1, 2), A_11 = I.
MepProblem small_single();

/// Two parameters, 2x2 diagonal matrices, right definite.
MepProblem diagonal_two_parameter();

/// Well-conditioned coupling with A_k0 negative definite, so that the
/// problem is right definite and left definite with respect to
/// (0, 1, ..., 1).
MepProblem left_right_definite(int n, int m, std::uint64_t seed);

/// Every equation has A_k1 = A_k2 = I: the Jacobian of the Rayleigh
/// quotient step is singular everywhere.
MepProblem repeated_columns(int n);

/// A Hermitian random problem H and diagonals with D_L A D_R = H.
struct ScaledProblem {
  MepProblem hermitian;
  MepProblem scaled;  ///< A_kl = D_L^{-1} H_kl D_R^{-1}
  std::vector<RVector> left;
  std::vector<RVector> right;
};
ScaledProblem diagonally_scaled(int n, int m, std::uint64_t seed);

/// Unit lower-triangular matrices with standard normal entries below the
/// diagonal.
std::vector<CMatrix> unit_triangular(const std::vector<int>& dims, std::uint64_t seed);

/// A_kl + eps * (E + E^T)/2 with E standard normal.
MepProblem perturb(const MepProblem& problem, double eps, std::uint64_t seed);

}  // namespace mep::testing
