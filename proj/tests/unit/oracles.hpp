#pragma once

// Reference computations that share no code with the library: QR instead of
// SVD, Gram eigenvalues instead of principal-angle SVDs, bitmask brute force
// instead of branch and bound.

#include "lsa/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using lsa::Matrix;
using lsa::Scalar;
using lsa::Vector;

inline Matrix cols(const Matrix& a, std::uint32_t mask) {
  Matrix out(a.rows(), std::popcount(mask));
  int c = 0;
  for (int j = 0; j < a.cols(); ++j)
    if (mask >> j & 1u) out.col(c++) = a.col(j);
  return out;
}

inline int rank(const Matrix& m, double tol = 1e-10) {
  if (m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

/// Distance from b to the column span of m, via a pivoted QR basis.
inline double residual(const Matrix& m, const Vector& b, double tol = 1e-10) {
  if (m.cols() == 0) return b.norm();
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(tol);
  const Eigen::Index r = qr.rank();
  const Matrix q = Matrix(qr.householderQ()).leftCols(r);
  return (b - q * (q.adjoint() * b)).norm();
}

inline double coherence(const Matrix& a) {
  double mu = 0.0;
  for (int i = 0; i < a.cols(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) mu = std::max(mu, std::abs(a.col(i).dot(a.col(j))));
  return mu;
}

/// 0 means no dependent subset (full column rank).
inline int spark(const Matrix& a, double tol = 1e-10) {
  const int n = static_cast<int>(a.cols());
  int best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int s = std::popcount(mask);
    if (best && s >= best) continue;
    if (rank(cols(a, mask), tol) < s) best = s;
  }
  return best;
}

/// Largest cosine between span(A_I) and span(A_J) from the Gram eigenproblem
/// lambda_max(G_II^+ G_IJ G_JJ^+ G_JI).
inline double cos_angle(const Matrix& a, std::uint32_t i, std::uint32_t j) {
  const Matrix ai = cols(a, i), aj = cols(a, j);
  const Matrix gii = ai.adjoint() * ai, gjj = aj.adjoint() * aj, gij = ai.adjoint() * aj;
  const Matrix pi = gii.completeOrthogonalDecomposition().pseudoInverse();
  const Matrix pj = gjj.completeOrthogonalDecomposition().pseudoInverse();
  const Matrix m = pi * gij * pj * gij.adjoint();
  Eigen::ComplexEigenSolver<Matrix> es(m);
  double lam = 0.0;
  for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t)
    lam = std::max(lam, es.eigenvalues()(t).real());
  return std::min(1.0, std::sqrt(std::max(0.0, lam)));
}

inline double mu_k(const Matrix& a, int k) {
  const int n = static_cast<int>(a.cols());
  double best = 0.0;
  for (std::uint32_t i = 1; i < (1u << n); ++i) {
    if (std::popcount(i) != k) continue;
    for (std::uint32_t j = i + 1; j < (1u << n); ++j)
      if (std::popcount(j) == k && !(i & j)) best = std::max(best, cos_angle(a, i, j));
  }
  return best;
}

/// Largest sub-family in which no element is covered more than r times.
inline int packing(const std::vector<std::vector<int>>& sets, int r) {
  const int n = static_cast<int>(sets.size());
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    std::vector<int> use(256, 0);
    bool ok = true;
    for (int s = 0; s < n && ok; ++s)
      if (mask >> s & 1u)
        for (int e : sets[static_cast<std::size_t>(s)])
          if (++use[static_cast<std::size_t>(e)] > r) ok = false;
    if (ok) best = size;
  }
  return best;
}

inline Matrix gaussian_columns(int m, int n, std::uint64_t seed, bool complex = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const double re = g(rng);
      a(i, j) = Scalar(re, complex ? g(rng) : 0.0);
    }
    a.col(j).normalize();
  }
  return a;
}

}  // namespace oracle
