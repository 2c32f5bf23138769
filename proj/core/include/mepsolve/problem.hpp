// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mepsolve/errors.hpp"

namespace mep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense multiparameter eigenvalue problem
///
///   (A_k0 + lambda_1 A_k1 + ... + lambda_m A_km) u_k = 0,  k = 1..m
///
/// or its homogeneous form with lambda = (lambda_0, ..., lambda_m). Equations
/// are indexed from 0 in the C++ API; matrix(k, l) is A_{k+1, l}.
///
/// Immutable after construction and safe to share between threads.
class MepProblem {
 public:
  MepProblem() = default;

  /// matrices[k][l] for k in [0, m) and l in [0, m]. Throws
  /// DimensionMismatch for ragged input and NotHermitian when `hermitian`
  /// is set but some A_kl deviates from its adjoint by more than 1e-12
  /// times its largest entry.
  MepProblem(std::vector<std::vector<CMatrix>> matrices, bool hermitian,
             bool homogeneous = false, std::string family = {});

  int m() const noexcept { return static_cast<int>(matrices_.size()); }
  int dim(int k) const { return dims_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const CMatrix& matrix(int k, int l) const;

  bool hermitian() const noexcept { return hermitian_; }
  /// All stored entries have zero imaginary part.
  bool is_real() const noexcept { return real_; }
  /// Marks problems whose eigenvalues live on the unit sphere in R^{m+1}
  /// (signed-index targets) rather than the affine chart lambda_0 = 1.
  bool homogeneous() const noexcept { return homogeneous_; }
  const std::string& family() const noexcept { return family_; }

  /// prod_k n_k, the size of the tensor-product space.
  std::size_t tensor_size() const noexcept;

  const std::vector<std::vector<CMatrix>>& matrices() const noexcept { return matrices_; }

 private:
  std::vector<std::vector<CMatrix>> matrices_;
  std::vector<int> dims_;
  bool hermitian_ = false;
  bool real_ = true;
  bool homogeneous_ = false;
  std::string family_;
};

/// Largest entrywise deviation |A - A^H| relative to the largest entry.
double hermitian_defect(const CMatrix& a);

/// 1-based per-equation ranks (i_1, ..., i_m); i_k counts eigenvalues of
/// the k-th pencil from the top.
class Multiindex {
 public:
  Multiindex() = default;
  explicit Multiindex(std::vector<int> entries) : entries_(std::move(entries)) {}

  static Multiindex ones(int m) { return Multiindex(std::vector<int>(static_cast<std::size_t>(m), 1)); }
  /// Parses "1,1,4" (any single-character separator).
  static Multiindex parse(std::string_view text, char sep = ',');

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  int operator[](int k) const { return entries_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& entries() const noexcept { return entries_; }

  bool valid_for(const std::vector<int>& dims) const noexcept;
  /// Throws InvalidArgument unless 1 <= i_k <= n_k for every k.
  void validate(const std::vector<int>& dims) const;

  /// Componentwise i_k <= other_k.
  bool precedes(const Multiindex& other) const noexcept;
  /// This index plus the k-th unit vector.
  Multiindex successor(int k) const;

  std::string to_string(char sep = ',') const;

  auto operator<=>(const Multiindex&) const = default;

 private:
  std::vector<int> entries_;
};

enum class Sign { Plus, Minus };

inline double sign_value(Sign s) noexcept { return s == Sign::Plus ? 1.0 : -1.0; }
inline char sign_char(Sign s) noexcept { return s == Sign::Plus ? '+' : '-'; }

struct SignedMultiindex {
  Multiindex index;
  Sign sign = Sign::Plus;
};

/// Eigenvalue with per-equation eigenvectors. `lambda` holds m entries for
/// the inhomogeneous form and m+1 unit-norm entries for the homogeneous one.
struct Eigenpair {
  RVector lambda;
  bool homogeneous = false;
  std::vector<CVector> right;
  /// Left eigenvectors, scaled so that left[k]^H right[k] = 1. Empty for
  /// Hermitian solves.
  std::vector<CVector> left;
  Multiindex index;
  std::optional<Sign> sign;

  /// (1, lambda) for inhomogeneous pairs, lambda itself otherwise.
  RVector lifted() const;
};

/// Lifts an m-vector to (1, lambda); passes an (m+1)-vector through.
RVector lift(const MepProblem& problem, const RVector& lambda);

struct SolverConfig {
  double tol = 1e-11;
  int max_iter = 40;
  double tau = 0.5;
  std::uint64_t seed = 0;
  bool globalize = false;
  /// Damping rounds allowed per outer iteration of the globalized method.
  int max_damping = 60;
  /// Imaginary parts of a non-Hermitian pencil spectrum above
  /// imag_tol * ||B|| are reported as ComplexSpectrum.
  double imag_tol = 1e-8;

  /// Throws InvalidArgument if any field is out of range.
  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations, Breakdown };

std::string_view status_name(SolveStatus status) noexcept;

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  /// ||F_i(lambda^(j))||_inf for j = 1..iterations.
  std::vector<double> residuals;
  /// lambda^(j) as produced by each accepted step (m or m+1 entries).
  std::vector<RVector> iterates;
  Eigenpair pair;
  double wall_time = 0.0;
  int damping_rounds = 0;
  /// Set when status is Breakdown.
  std::optional<ErrorKind> error;
  std::string message;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Normalized residual max_k ||sum_l lambda_l A_kl u_k|| / ||u_k||.
double residual(const MepProblem& problem, const Eigenpair& pair);
double residual(const MepProblem& problem, const RVector& lambda, const std::vector<CVector>& vectors);

/// Multiindex realized at lambda: for each k, the descending rank of the
/// eigenvalue of B_k(lambda) closest to zero (ties go to the smaller rank).
/// Accepts m-vectors (lifted with lambda_0 = 1) and homogeneous (m+1)-vectors.
/// Non-Hermitian problems throw ComplexSpectrum when a pencil spectrum is not
/// real within `imag_tol`.
Multiindex multiindex_of(const MepProblem& problem, const RVector& lambda, double imag_tol = 1e-8);

}  // namespace mep
