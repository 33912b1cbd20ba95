#include <omp.h>

#include <cstring>

#include "doctest.h"
#include "ircur/errors.hpp"
#include "ircur/kernels.hpp"
#include "test_support.hpp"

using namespace ircur;
using namespace ircur::testing;

namespace {

bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(double)) == 0;
}

// Forces a real team even on a single-core host.
struct ThreadGuard {
  int saved = omp_get_max_threads();
  explicit ThreadGuard(int n) { omp_set_num_threads(n); }
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("matmul variants against a dense reference") {
  const DenseMatrix a = random_matrix(17, 9, 1);
  const DenseMatrix b = random_matrix(9, 13, 2);
  const DenseMatrix bt = naive_transpose(b);
  const DenseMatrix at = naive_transpose(a);
  const DenseMatrix ref = naive_product(a, b);
  CHECK(rel_diff(kernels::serial::matmul(a, b), ref) <= 1e-14);
  CHECK(rel_diff(kernels::serial::matmul_tn(at, b), ref) <= 1e-14);
  CHECK(rel_diff(kernels::serial::matmul_nt(a, bt), ref) <= 1e-14);
  CHECK_THROWS_AS(kernels::matmul(a, a), ShapeError);
  CHECK_THROWS_AS(kernels::matmul_tn(a, b), ShapeError);
  CHECK_THROWS_AS(kernels::matmul_nt(a, b), ShapeError);
}

TEST_CASE("gathers") {
  const DenseMatrix m = random_matrix(8, 6, 3);
  const IndexSet rows({0, 3, 7}, 8);
  const IndexSet cols({1, 5}, 6);
  const DenseMatrix gr = kernels::serial::gather_rows(m, rows);
  const DenseMatrix gc = kernels::serial::gather_cols(m, cols);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t j = 0; j < 6; ++j) CHECK(gr(a, j) == m(rows[a], j));
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t b = 0; b < cols.size(); ++b) CHECK(gc(i, b) == m(i, cols[b]));
  CHECK_THROWS_AS(kernels::gather_rows(m, IndexSet({2, 8}, 9)), BoundsError);
  CHECK_THROWS_AS(kernels::gather_cols(m, IndexSet({6}, 7)), BoundsError);
}

TEST_CASE("threshold_residual keeps entries strictly above zeta") {
  const DenseMatrix data = DenseMatrix::from_rows({{5.0, -3.0}, {1.0, 2.0}});
  DenseMatrix est = DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
  kernels::serial::threshold_residual(data, est, 2.0);
  CHECK(est == DenseMatrix::from_rows({{4.0, -3.0}, {0.0, 0.0}}));
  DenseMatrix wrong(3, 2);
  CHECK_THROWS_AS(kernels::threshold_residual(data, wrong, 1.0), ShapeError);
}

TEST_CASE("serial and parallel builds are bitwise identical") {
  ThreadGuard guard(4);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t m = 50 + 37 * trial, k = 3 + trial, n = 80 + 41 * trial;
    const DenseMatrix a = random_matrix(m, k, 10 + trial);
    const DenseMatrix b = random_matrix(k, n, 20 + trial);
    const DenseMatrix at = naive_transpose(a);
    const DenseMatrix bt = naive_transpose(b);
    CHECK(bitwise_equal(kernels::serial::matmul(a, b), kernels::parallel::matmul(a, b)));
    CHECK(bitwise_equal(kernels::serial::matmul_tn(at, b), kernels::parallel::matmul_tn(at, b)));
    CHECK(bitwise_equal(kernels::serial::matmul_nt(a, bt), kernels::parallel::matmul_nt(a, bt)));

    const DenseMatrix big = random_matrix(m, n, 30 + trial);
    const IndexSet rows({1, 4, m / 2, m - 1}, m);
    const IndexSet cols({0, 2, n / 3, n - 1}, n);
    CHECK(bitwise_equal(kernels::serial::gather_rows(big, rows), kernels::parallel::gather_rows(big, rows)));
    CHECK(bitwise_equal(kernels::serial::gather_cols(big, cols), kernels::parallel::gather_cols(big, cols)));

    DenseMatrix e1 = random_matrix(m, n, 40 + trial);
    DenseMatrix e2 = e1;
    kernels::serial::threshold_residual(big, e1, 0.7);
    kernels::parallel::threshold_residual(big, e2, 0.7);
    CHECK(bitwise_equal(e1, e2));
  }
}

TEST_CASE("dispatcher matches the serial reference on large inputs") {
  ThreadGuard guard(3);
  CHECK(kernels::available_threads() == 3);
  const DenseMatrix a = random_matrix(600, 5, 7);
  const DenseMatrix b = random_matrix(5, 500, 8);
  CHECK(bitwise_equal(kernels::matmul(a, b), kernels::serial::matmul(a, b)));
  int inside = 0;
#pragma omp parallel num_threads(2)
  {
#pragma omp single
    inside = kernels::available_threads();
  }
  CHECK(inside == 1);
}
