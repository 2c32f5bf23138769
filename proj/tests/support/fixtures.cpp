// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <random>

namespace mep::testing {

CMatrix diag(std::initializer_list<double> entries) {
  RVector d(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double x : entries) d(i++) = x;
  return d.asDiagonal().toDenseMatrix().cast<Complex>();
}

MepProblem scalar_problem(const RMatrix& a) {
  std::vector<std::vector<CMatrix>> matrices(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index k = 0; k < a.rows(); ++k)
    for (Eigen::Index l = 0; l < a.cols(); ++l) matrices[static_cast<std::size_t>(k)].push_back(CMatrix::Constant(1, 1, a(k, l)));
  return MepProblem(std::move(matrices), true);
}

MepProblem small_single() { return MepProblem({{diag({1, 2}), diag({1, 1})}}, true); }

MepProblem diagonal_two_parameter() {
  return MepProblem({{diag({1, -2}), diag({2, 1}), diag({0.5, -0.25})},
                     {diag({-1, 3}), diag({0.25, 0.5}), diag({1.5, 2})}},
                    true, false, "diagonal");
}

MepProblem left_right_definite(int n, int m, std::uint64_t seed) {
  MepProblem base = gen_well_conditioned({n, m, seed, RandomFamily::WellConditioned});
  std::mt19937_64 rng(seed + 7919);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<CMatrix>> matrices = base.matrices();
  for (int k = 0; k < m; ++k) {
    RMatrix g(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
    const RMatrix a0 = -(g * g.transpose() / n + RMatrix::Identity(n, n));
    matrices[static_cast<std::size_t>(k)][0] = a0.cast<Complex>();
  }
  return MepProblem(std::move(matrices), true, false, "left-right-definite");
}

MepProblem repeated_columns(int n) {
  std::vector<std::vector<CMatrix>> matrices;
  for (int k = 0; k < 2; ++k) {
    RMatrix a0 = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) a0(i, i) = i + 1.0 + k;
    matrices.push_back({a0.cast<Complex>(), CMatrix::Identity(n, n), CMatrix::Identity(n, n)});
  }
  return MepProblem(std::move(matrices), true, false, "repeated");
}

ScaledProblem diagonally_scaled(int n, int m, std::uint64_t seed) {
  ScaledProblem out;
  out.hermitian = gen_well_conditioned({n, m, seed, RandomFamily::WellConditioned});
  std::mt19937_64 rng(seed + 104729);
  std::uniform_real_distribution<double> uniform(0.5, 2.0);
  std::vector<std::vector<CMatrix>> matrices(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    RVector dl(n), dr(n);
    for (int i = 0; i < n; ++i) dl(i) = uniform(rng);
    for (int i = 0; i < n; ++i) dr(i) = uniform(rng);
    for (int l = 0; l <= m; ++l) {
      matrices[static_cast<std::size_t>(k)].push_back(dl.cwiseInverse().cast<Complex>().asDiagonal() *
                                                      out.hermitian.matrix(k, l) *
                                                      dr.cwiseInverse().cast<Complex>().asDiagonal());
    }
    out.left.push_back(dl);
    out.right.push_back(dr);
  }
  out.scaled = MepProblem(std::move(matrices), false, false, "scaled");
  return out;
}

std::vector<CMatrix> unit_triangular(const std::vector<int>& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<CMatrix> out;
  for (int n : dims) {
    RMatrix b = RMatrix::Identity(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = j + 1; i < n; ++i) b(i, j) = normal(rng);
    out.push_back(b.cast<Complex>());
  }
  return out;
}

MepProblem perturb(const MepProblem& problem, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<CMatrix>> matrices = problem.matrices();
  for (auto& row : matrices) {
    for (auto& a : row) {
      RMatrix e(a.rows(), a.cols());
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) e(i, j) = normal(rng);
      a += (eps * 0.5 * (e + e.transpose())).cast<Complex>();
    }
  }
  return MepProblem(std::move(matrices), problem.hermitian(), problem.homogeneous(), problem.family());
}

}  // namespace mep::testing
