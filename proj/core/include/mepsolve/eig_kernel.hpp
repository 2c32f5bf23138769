// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mepsolve/problem.hpp"

namespace mep {

/// B_k(lambda) = sum_l lambda_l A_kl for equation k (0-based) and a
/// homogeneous point lambda with m+1 entries.
CMatrix assemble_pencil(const MepProblem& problem, int k, const RVector& lambda);

struct HermitianEigenpair {
  double value = 0.0;
  CVector vector;
};

/// The rank-th largest eigenvalue (1-based) of a Hermitian matrix and a unit
/// eigenvector. Repeated eigenvalues return whichever eigenvector the dense
/// decomposition produces; the choice is deterministic.
HermitianEigenpair kth_largest_hermitian(const CMatrix& b, int rank);

struct BiorthogonalEigenpair {
  double value = 0.0;
  CVector right;  ///< unit norm
  CVector left;   ///< scaled so that left^H right = 1
};

/// The rank-th largest eigenvalue (by real part) of a general matrix whose
/// spectrum is real, together with right and left eigenvectors.
///
/// Throws ComplexSpectrum when an eigenvalue at or above the requested rank
/// has |imag| > imag_tol * ||B||_F, and DefectiveEigenvalue when the unit left
/// and right eigenvectors are nearly orthogonal (|w^H v| < 1e-12).
BiorthogonalEigenpair kth_largest_biorthogonal(const CMatrix& b, int rank, double imag_tol = 1e-8);

/// Real parts of the spectrum sorted descending. For non-Hermitian input the
/// imaginary parts are checked against imag_tol * ||B||_F.
RVector descending_spectrum(const CMatrix& b, bool hermitian, double imag_tol = 1e-8);

}  // namespace mep
