// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mepsolve/problem.hpp"

namespace mep {

enum class RandomFamily { Laguerre, WellConditioned };

struct RandomSpec {
  int n = 3;
  int m = 2;
  std::uint64_t seed = 0;
  RandomFamily family = RandomFamily::Laguerre;

  void validate() const;  ///< n >= 2, m >= 2
};

/// L_0(x), ..., L_{count-1}(x) by the three-term recurrence.
std::vector<double> laguerre_values(double x, int count);

/// A_k0 = (G + G^T)/2 with G standard normal; A_kl = L_{l-1}(D_k) for l >= 1
/// with D_k diagonal, entries uniform on [k-1, k] (k 1-based).
MepProblem gen_laguerre(const RandomSpec& spec);

/// A_k0 as above; A_kl = Q D Q^T + delta_kl I for l >= 1, D uniform on
/// [-1/(2m), 1/(2m)] and Q a Haar-like orthogonal factor.
MepProblem gen_well_conditioned(const RandomSpec& spec);

MepProblem generate(const RandomSpec& spec);

/// The 3-parameter homogeneous problem with 4x4 diagonal matrices that is
/// locally definite but not definite. Its eigenvectors are coordinate
/// tensors e_i1 (x) e_i2 (x) e_i3.
MepProblem volkmer_example();

/// A_kl <- B_k A_kl B_k^H. Throws SingularTransform when some B_k has
/// condition number above 1e12.
MepProblem congruence_transform(const MepProblem& problem, std::span<const CMatrix> transforms);

struct EllipsoidConfig {
  double x0 = 1.0;
  double y0 = 1.5;
  double z0 = 2.0;
  int nodes = 60;  ///< collocation points per equation

  double a() const;
  double b() const;
  double c() const;
  void validate() const;  ///< 0 < x0 < y0 < z0, nodes >= 8
};

/// Chebyshev-Gauss-Lobatto points cos(pi j/(N-1)) mapped to [lo, hi],
/// ordered from hi down to lo.
RVector chebyshev_nodes(int count, double lo, double hi);

/// First-derivative collocation matrix on chebyshev_nodes(count, lo, hi).
RMatrix chebyshev_differentiation(int count, double lo, double hi);

/// Collocation of the separated ellipsoidal wave equation
///   t(t-1)(t-c) u'' + 1/2 (3t^2 - 2(1+c)t + c) u' + (lambda + mu t + eta t^2) u = 0
/// on (c, z0^2/b^2), (1, c) and (0, 1). The parameter vector is
/// (lambda, mu, eta). The Dirichlet node of the first equation is
/// eliminated, so dims = (N-1, N, N). Each equation is multiplied by the
/// sign of t(t-1)(t-c) on its interval, which turns the problem into a
/// discretization of the right- and left-definite self-adjoint form.
MepProblem ellipsoidal_wave(const EllipsoidConfig& config);

/// Hermitian problem similar to a diagonally scaled one, with the maps
/// taking its eigenvectors to right and left eigenvectors of the original.
struct SymmetrizedProblem {
  MepProblem problem;
  std::vector<RVector> right_scale;  ///< v_k = right_scale[k] .* u_k
  std::vector<RVector> left_scale;   ///< w_k = left_scale[k] .* u_k

  CVector to_right(int k, const CVector& u) const;
  CVector to_left(int k, const CVector& u) const;
};

/// For positive diagonals D^L_k, D^R_k such that D^L_k A_kl D^R_k is
/// Hermitian, returns A_kl <- (D^R)^{-1/2} (D^L)^{1/2} A_kl (D^L)^{-1/2} (D^R)^{1/2}.
/// Throws NotHermitian when the result is not Hermitian within 1e-10.
SymmetrizedProblem symmetrize_diagonal(const MepProblem& problem, std::span<const RVector> left_diag,
                                       std::span<const RVector> right_diag);

}  // namespace mep
