// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/eig_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spectrum_detail.hpp"

namespace mep {

namespace {

bool imaginary_part_is_zero(const CMatrix& b) {
  return (b.imag().array() == 0.0).all();
}

void check_square(const CMatrix& b, int rank, const char* who) {
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw MepError(ErrorKind::DimensionMismatch, std::string(who) + ": matrix must be square and non-empty");
  }
  if (rank < 1 || rank > b.rows()) {
    throw MepError(ErrorKind::InvalidArgument,
                   std::string(who) + ": rank " + std::to_string(rank) + " outside 1.." +
                       std::to_string(b.rows()));
  }
}

// Stable permutation ordering `values` descending by real part.
std::vector<Eigen::Index> descending_order(const CVector& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values(a).real() > values(b).real();
  });
  return order;
}

struct GeneralDecomposition {
  CVector values;
  CMatrix vectors;
};

GeneralDecomposition decompose_general(const CMatrix& b, bool want_vectors) {
  GeneralDecomposition out;
  if (imaginary_part_is_zero(b)) {
    Eigen::EigenSolver<RMatrix> solver(b.real(), want_vectors);
    if (solver.info() != Eigen::Success) {
      throw MepError(ErrorKind::EigenFailure, "real Schur decomposition did not converge");
    }
    out.values = solver.eigenvalues();
    if (want_vectors) out.vectors = solver.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> solver(b, want_vectors);
    if (solver.info() != Eigen::Success) {
      throw MepError(ErrorKind::EigenFailure, "complex Schur decomposition did not converge");
    }
    out.values = solver.eigenvalues();
    if (want_vectors) out.vectors = solver.eigenvectors();
  }
  return out;
}

}  // namespace

namespace detail {

SortedSpectrum sorted_general_spectrum(const CMatrix& b) {
  GeneralDecomposition dec = decompose_general(b, false);
  SortedSpectrum out;
  out.scale = b.norm();
  const auto order = descending_order(dec.values);
  out.values.resize(dec.values.size());
  for (Eigen::Index i = 0; i < dec.values.size(); ++i) {
    out.values(i) = dec.values(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

RVector sorted_hermitian_spectrum(const CMatrix& b) {
  RVector ascending;
  if (imaginary_part_is_zero(b)) {
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(b.real(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw MepError(ErrorKind::EigenFailure, "symmetric eigensolver did not converge");
    }
    ascending = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(b, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw MepError(ErrorKind::EigenFailure, "Hermitian eigensolver did not converge");
    }
    ascending = solver.eigenvalues();
  }
  return ascending.reverse();
}

}  // namespace detail

CMatrix assemble_pencil(const MepProblem& problem, int k, const RVector& lambda) {
  if (k < 0 || k >= problem.m()) {
    throw MepError(ErrorKind::InvalidArgument, "assemble_pencil: equation index out of range");
  }
  if (lambda.size() != problem.m() + 1) {
    throw MepError(ErrorKind::DimensionMismatch, "assemble_pencil: lambda must have m+1 entries");
  }
  CMatrix b = lambda(0) * problem.matrix(k, 0);
  for (int l = 1; l <= problem.m(); ++l) {
    if (lambda(l) != 0.0) b.noalias() += lambda(l) * problem.matrix(k, l);
  }
  return b;
}

HermitianEigenpair kth_largest_hermitian(const CMatrix& b, int rank) {
  check_square(b, rank, "kth_largest_hermitian");
  const Eigen::Index n = b.rows();
  // Eigen returns eigenvalues ascending, so the rank-th largest sits at n - rank.
  const Eigen::Index pos = n - rank;
  HermitianEigenpair out;
  if (imaginary_part_is_zero(b)) {
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(b.real());
    if (solver.info() != Eigen::Success) {
      throw MepError(ErrorKind::EigenFailure, "symmetric eigensolver did not converge");
    }
    out.value = solver.eigenvalues()(pos);
    out.vector = solver.eigenvectors().col(pos).cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(b);
    if (solver.info() != Eigen::Success) {
      throw MepError(ErrorKind::EigenFailure, "Hermitian eigensolver did not converge");
    }
    out.value = solver.eigenvalues()(pos);
    out.vector = solver.eigenvectors().col(pos);
  }
  out.vector.normalize();
  return out;
}

BiorthogonalEigenpair kth_largest_biorthogonal(const CMatrix& b, int rank, double imag_tol) {
  check_square(b, rank, "kth_largest_biorthogonal");
  GeneralDecomposition dec = decompose_general(b, true);
  const double scale = b.norm();
  const auto order = descending_order(dec.values);

  for (int r = 0; r < rank; ++r) {
    const Complex ev = dec.values(order[static_cast<std::size_t>(r)]);
    if (std::abs(ev.imag()) > imag_tol * scale) {
      throw MepError(ErrorKind::ComplexSpectrum,
                     "eigenvalue " + std::to_string(r + 1) + " has imaginary part " +
                         std::to_string(ev.imag()));
    }
  }

  const Eigen::Index pos = order[static_cast<std::size_t>(rank - 1)];
  BiorthogonalEigenpair out;
  out.value = dec.values(pos).real();
  out.right = dec.vectors.col(pos).normalized();

  // Rows of V^{-1} are left eigenvectors: w = V^{-H} e_pos.
  const Eigen::Index n = b.rows();
  CVector unit = CVector::Zero(n);
  unit(pos) = 1.0;
  Eigen::PartialPivLU<CMatrix> lu(dec.vectors.adjoint());
  CVector w = lu.solve(unit);
  if (!w.allFinite() || w.norm() == 0.0) {
    throw MepError(ErrorKind::DefectiveEigenvalue, "eigenvector matrix is singular");
  }
  w.normalize();

  const Complex overlap = w.dot(out.right);  // w^H v
  if (std::abs(overlap) < 1e-12) {
    throw MepError(ErrorKind::DefectiveEigenvalue,
                   "left and right eigenvectors are nearly orthogonal");
  }
  out.left = w / std::conj(overlap);
  return out;
}

RVector descending_spectrum(const CMatrix& b, bool hermitian, double imag_tol) {
  if (b.rows() != b.cols()) {
    throw MepError(ErrorKind::DimensionMismatch, "descending_spectrum: matrix must be square");
  }
  if (hermitian) return detail::sorted_hermitian_spectrum(b);
  const auto sorted = detail::sorted_general_spectrum(b);
  if (sorted.values.size() > 0 && sorted.values.imag().cwiseAbs().maxCoeff() > imag_tol * sorted.scale) {
    throw MepError(ErrorKind::ComplexSpectrum, "spectrum is not real within tolerance");
  }
  return sorted.values.real();
}

}  // namespace mep
