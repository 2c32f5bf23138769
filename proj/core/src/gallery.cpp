// SPDX-License-Identifier: Apache-2.0

#include "mepsolve/gallery.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mep {

namespace {

RMatrix symmetric_normal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  return 0.5 * (g + g.transpose());
}

// Q from the QR factorization of a Gaussian matrix, with columns flipped so
// that diag(R) > 0.
RMatrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<RMatrix> qr(g);
  RMatrix q = qr.householderQ() * RMatrix::Identity(n, n);
  const RMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

std::vector<CMatrix> diagonal_set(std::initializer_list<std::initializer_list<double>> diags, double scale) {
  std::vector<CMatrix> out;
  for (const auto& d : diags) {
    RVector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = scale * x;
    out.push_back(v.asDiagonal().toDenseMatrix().cast<Complex>());
  }
  return out;
}

CMatrix to_complex(const RMatrix& a) { return a.cast<Complex>(); }

}  // namespace

void RandomSpec::validate() const {
  if (n < 2) throw MepError(ErrorKind::InvalidArgument, "random problems need n >= 2");
  if (m < 2) throw MepError(ErrorKind::InvalidArgument, "random problems need m >= 2");
}

std::vector<double> laguerre_values(double x, int count) {
  std::vector<double> out;
  if (count <= 0) return out;
  out.push_back(1.0);
  if (count == 1) return out;
  out.push_back(1.0 - x);
  for (int n = 1; n + 1 < count; ++n) {
    const double next = ((2.0 * n + 1.0 - x) * out[static_cast<std::size_t>(n)] - n * out[static_cast<std::size_t>(n - 1)]) / (n + 1.0);
    out.push_back(next);
  }
  return out;
}

MepProblem gen_laguerre(const RandomSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<std::vector<CMatrix>> matrices(static_cast<std::size_t>(spec.m));
  for (int k = 0; k < spec.m; ++k) {
    auto& row = matrices[static_cast<std::size_t>(k)];
    row.push_back(to_complex(symmetric_normal(spec.n, rng)));
    // Diagonal of D_k, uniform on [k-1, k] with k counted from 1.
    std::uniform_real_distribution<double> uniform(static_cast<double>(k), static_cast<double>(k + 1));
    RVector d(spec.n);
    for (int i = 0; i < spec.n; ++i) d(i) = uniform(rng);
    std::vector<RVector> poly(static_cast<std::size_t>(spec.m), RVector(spec.n));
    for (int i = 0; i < spec.n; ++i) {
      const auto values = laguerre_values(d(i), spec.m);
      for (int l = 0; l < spec.m; ++l) poly[static_cast<std::size_t>(l)](i) = values[static_cast<std::size_t>(l)];
    }
    for (int l = 1; l <= spec.m; ++l) {
      row.push_back(to_complex(poly[static_cast<std::size_t>(l - 1)].asDiagonal().toDenseMatrix()));
    }
  }
  return MepProblem(std::move(matrices), true, false, "laguerre");
}

MepProblem gen_well_conditioned(const RandomSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const double half_width = 1.0 / (2.0 * spec.m);
  std::uniform_real_distribution<double> uniform(-half_width, half_width);
  std::vector<std::vector<CMatrix>> matrices(static_cast<std::size_t>(spec.m));
  for (int k = 0; k < spec.m; ++k) {
    auto& row = matrices[static_cast<std::size_t>(k)];
    row.push_back(to_complex(symmetric_normal(spec.n, rng)));
    for (int l = 1; l <= spec.m; ++l) {
      const RMatrix q = random_orthogonal(spec.n, rng);
      RVector d(spec.n);
      for (int i = 0; i < spec.n; ++i) d(i) = uniform(rng);
      RMatrix a = q * d.asDiagonal() * q.transpose();
      a = 0.5 * (a + a.transpose());
      if (l == k + 1) a.diagonal().array() += 1.0;
      row.push_back(to_complex(a));
    }
  }
  return MepProblem(std::move(matrices), true, false, "well-conditioned");
}

MepProblem generate(const RandomSpec& spec) {
  return spec.family == RandomFamily::Laguerre ? gen_laguerre(spec) : gen_well_conditioned(spec);
}

MepProblem volkmer_example() {
  // Four diagonal patterns; each A_kl is one of them.
  const std::initializer_list<double> p = {1, 5, 1, 1};   // A10 = A21 = A32
  const std::initializer_list<double> q = {1, 1, 5, 1};   // A11 = A20 = A33
  const std::initializer_list<double> r = {5, 1, 1, 1};   // A12 = A23 = A30
  const std::initializer_list<double> s = {1, 1, 1, 5};   // -A13 = -A22 = -A31
  std::vector<std::vector<CMatrix>> matrices(3);
  auto pos = [](std::initializer_list<double> d) { return diagonal_set({d}, 1.0).front(); };
  auto neg = [](std::initializer_list<double> d) { return diagonal_set({d}, -1.0).front(); };
  matrices[0] = {pos(p), pos(q), pos(r), neg(s)};
  matrices[1] = {pos(q), pos(p), neg(s), pos(r)};
  matrices[2] = {pos(r), neg(s), pos(p), pos(q)};
  return MepProblem(std::move(matrices), true, true, "volkmer");
}

MepProblem congruence_transform(const MepProblem& problem, std::span<const CMatrix> transforms) {
  if (static_cast<int>(transforms.size()) != problem.m()) {
    throw MepError(ErrorKind::DimensionMismatch, "congruence_transform: need one matrix per equation");
  }
  std::vector<std::vector<CMatrix>> matrices(static_cast<std::size_t>(problem.m()));
  for (int k = 0; k < problem.m(); ++k) {
    const CMatrix& b = transforms[static_cast<std::size_t>(k)];
    if (b.rows() != problem.dim(k) || b.cols() != problem.dim(k)) {
      throw MepError(ErrorKind::DimensionMismatch, "congruence_transform: B_k must be n_k x n_k");
    }
    Eigen::JacobiSVD<CMatrix> svd(b);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12) {
      throw MepError(ErrorKind::SingularTransform, "B_" + std::to_string(k + 1) + " is singular or ill-conditioned");
    }
    for (int l = 0; l <= problem.m(); ++l) {
      CMatrix a = b * problem.matrix(k, l) * b.adjoint();
      if (problem.hermitian()) a = 0.5 * (a + a.adjoint()).eval();
      matrices[static_cast<std::size_t>(k)].push_back(std::move(a));
    }
  }
  return MepProblem(std::move(matrices), problem.hermitian(), problem.homogeneous(), problem.family());
}

double EllipsoidConfig::a() const { return std::sqrt(z0 * z0 - x0 * x0); }
double EllipsoidConfig::b() const { return std::sqrt(z0 * z0 - y0 * y0); }
double EllipsoidConfig::c() const { return (a() * a()) / (b() * b()); }

void EllipsoidConfig::validate() const {
  if (!(0.0 < x0 && x0 < y0 && y0 < z0)) {
    throw MepError(ErrorKind::InvalidArgument, "ellipsoid semi-axes must satisfy 0 < x0 < y0 < z0");
  }
  if (nodes < 8) throw MepError(ErrorKind::InvalidArgument, "ellipsoid discretization needs at least 8 nodes");
}

RVector chebyshev_nodes(int count, double lo, double hi) {
  RVector t(count);
  for (int j = 0; j < count; ++j) {
    const double x = std::cos(std::numbers::pi * j / (count - 1));
    t(j) = 0.5 * (hi - lo) * x + 0.5 * (hi + lo);
  }
  return t;
}

RMatrix chebyshev_differentiation(int count, double lo, double hi) {
  const int n = count - 1;
  RVector x(count), weight(count);
  for (int j = 0; j <= n; ++j) {
    x(j) = std::cos(std::numbers::pi * j / n);
    weight(j) = ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
  }
  RMatrix d = RMatrix::Zero(count, count);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i != j) d(i, j) = weight(i) / weight(j) / (x(i) - x(j));
    }
    // Negative sum trick: rows annihilate constants exactly.
    d(i, i) = -d.row(i).sum();
  }
  return d * (2.0 / (hi - lo));
}

MepProblem ellipsoidal_wave(const EllipsoidConfig& config) {
  config.validate();
  const double c = config.c();
  const double b = config.b();
  const double outer = config.z0 * config.z0 / (b * b);
  struct Interval {
    double lo, hi;
    bool dirichlet_at_hi;
  };
  const Interval intervals[3] = {{c, outer, true}, {1.0, c, false}, {0.0, 1.0, false}};

  const int n = config.nodes;
  std::vector<std::vector<CMatrix>> matrices(3);
  for (int k = 0; k < 3; ++k) {
    const auto& iv = intervals[k];
    const RVector t = chebyshev_nodes(n, iv.lo, iv.hi);
    const RMatrix d1 = chebyshev_differentiation(n, iv.lo, iv.hi);
    const RMatrix d2 = d1 * d1;
    const RVector p = (t.array() * (t.array() - 1.0) * (t.array() - c)).matrix();
    const RVector dp = (3.0 * t.array().square() - 2.0 * (1.0 + c) * t.array() + c).matrix();
    // Sign of t(t-1)(t-c) on the open interval: +, -, + for k = 1, 2, 3.
    const double orient = (k == 1) ? -1.0 : 1.0;

    RMatrix a0 = orient * (p.asDiagonal() * d2 + (0.5 * dp).asDiagonal() * d1);
    RMatrix a1 = orient * RMatrix::Identity(n, n);
    RMatrix a2 = orient * RMatrix(t.asDiagonal());
    RMatrix a3 = orient * RMatrix(t.array().square().matrix().asDiagonal());

    const int first = iv.dirichlet_at_hi ? 1 : 0;  // node 0 is the upper end
    const int size = n - first;
    auto keep = [&](const RMatrix& a) { return to_complex(a.bottomRightCorner(size, size)); };
    matrices[static_cast<std::size_t>(k)] = {keep(a0), keep(a1), keep(a2), keep(a3)};
  }
  return MepProblem(std::move(matrices), false, false, "ellipsoid");
}

CVector SymmetrizedProblem::to_right(int k, const CVector& u) const {
  return right_scale.at(static_cast<std::size_t>(k)).cast<Complex>().cwiseProduct(u);
}

CVector SymmetrizedProblem::to_left(int k, const CVector& u) const {
  return left_scale.at(static_cast<std::size_t>(k)).cast<Complex>().cwiseProduct(u);
}

SymmetrizedProblem symmetrize_diagonal(const MepProblem& problem, std::span<const RVector> left_diag,
                                       std::span<const RVector> right_diag) {
  const int m = problem.m();
  if (static_cast<int>(left_diag.size()) != m || static_cast<int>(right_diag.size()) != m) {
    throw MepError(ErrorKind::DimensionMismatch, "symmetrize_diagonal: need one diagonal per equation");
  }
  SymmetrizedProblem out;
  std::vector<std::vector<CMatrix>> matrices(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const RVector& dl = left_diag[kk];
    const RVector& dr = right_diag[kk];
    if (dl.size() != problem.dim(k) || dr.size() != problem.dim(k)) {
      throw MepError(ErrorKind::DimensionMismatch, "symmetrize_diagonal: diagonal size does not match n_k");
    }
    if ((dl.array() <= 0.0).any() || (dr.array() <= 0.0).any()) {
      throw MepError(ErrorKind::InvalidArgument, "symmetrize_diagonal: diagonals must be positive");
    }
    // Ã = S A T with S = (D^R)^{-1/2} (D^L)^{1/2}, T = S^{-1}.
    const RVector s = (dl.array().sqrt() / dr.array().sqrt()).matrix();
    const RVector s_inv = s.cwiseInverse();
    for (int l = 0; l <= m; ++l) {
      CMatrix a = s.cast<Complex>().asDiagonal() * problem.matrix(k, l) * s_inv.cast<Complex>().asDiagonal();
      if (hermitian_defect(a) > 1e-10) {
        throw MepError(ErrorKind::NotHermitian, "diagonal scaling does not symmetrize A_" + std::to_string(k + 1) +
                                                    std::to_string(l));
      }
      a = 0.5 * (a + a.adjoint()).eval();
      matrices[kk].push_back(std::move(a));
    }
    out.right_scale.push_back(s_inv);  // v = (D^L)^{-1/2} (D^R)^{1/2} u
    out.left_scale.push_back(s);       // w = (D^R)^{-1/2} (D^L)^{1/2} u
  }
  out.problem = MepProblem(std::move(matrices), true, problem.homogeneous(), problem.family());
  return out;
}

}  // namespace mep
