#pragma once

// Test-only helpers. Random inputs come from <random> directly and dense
// references are plain loops, so nothing here shares a code path with the
// library kernels under test.

#include <cmath>
#include <cstdint>
#include <random>

#include "ircur/matrix.hpp"

namespace ircur::testing {

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  DenseMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = dist(gen);
  return m;
}

inline DenseMatrix naive_product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double acc = 0.0L;
      for (std::size_t p = 0; p < a.cols(); ++p) acc += static_cast<long double>(a(i, p)) * b(p, j);
      out(i, j) = static_cast<double>(acc);
    }
  return out;
}

inline DenseMatrix naive_transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// Rank-r product of two Gaussian factors.
inline DenseMatrix random_low_rank(std::size_t rows, std::size_t cols, std::size_t r,
                                   std::uint32_t seed) {
  return naive_product(random_matrix(rows, r, seed), naive_transpose(random_matrix(cols, r, seed + 1)));
}

inline double naive_frob(const DenseMatrix& m) {
  long double acc = 0.0L;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) acc += static_cast<long double>(m(i, j)) * m(i, j);
  return static_cast<double>(std::sqrt(acc));
}

inline double naive_diff_frob(const DenseMatrix& a, const DenseMatrix& b) {
  long double acc = 0.0L;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const long double d = static_cast<long double>(a(i, j)) - b(i, j);
      acc += d * d;
    }
  return static_cast<double>(std::sqrt(acc));
}

inline double rel_diff(const DenseMatrix& a, const DenseMatrix& b) {
  const double ref = naive_frob(b);
  return ref > 0.0 ? naive_diff_frob(a, b) / ref : naive_diff_frob(a, b);
}

/// ‖AᵀA − I‖_F
inline double orthonormality_defect(const DenseMatrix& a) {
  const DenseMatrix g = naive_product(naive_transpose(a), a);
  long double acc = 0.0L;
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < g.rows(); ++i) {
      const long double d = g(i, j) - (i == j ? 1.0L : 0.0L);
      acc += d * d;
    }
  return static_cast<double>(std::sqrt(acc));
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
inline DenseMatrix gauss_jordan_inverse(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  DenseMatrix work = a;
  DenseMatrix inv = DenseMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(work(i, c)) > std::abs(work(piv, c))) piv = i;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(work(c, j), work(piv, j));
      std::swap(inv(c, j), inv(piv, j));
    }
    const double d = work(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      work(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = work(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace ircur::testing
