#include "ircur/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ircur/errors.hpp"

namespace ircur::kernels {

namespace {

// Below this many multiply-adds the thread fork costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 16;

void require_inner(std::size_t lhs, std::size_t rhs, const char* op) {
  if (lhs != rhs)
    throw ShapeError(std::string(op) + ": inner dimensions " + std::to_string(lhs) + " and " +
                     std::to_string(rhs) + " differ");
}

void require_rows(const DenseMatrix& m, const IndexSet& rows) {
  if (rows[rows.size() - 1] >= m.rows())
    throw BoundsError("row selection exceeds " + std::to_string(m.rows()) + " rows");
}

void require_cols(const DenseMatrix& m, const IndexSet& cols) {
  if (cols[cols.size() - 1] >= m.cols())
    throw BoundsError("column selection exceeds " + std::to_string(m.cols()) + " columns");
}

// Column j of a·b.
inline void matmul_col(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out,
                       std::size_t j) {
  auto dst = out.col(j);
  for (std::size_t p = 0; p < a.cols(); ++p) {
    const double bpj = b(p, j);
    const auto src = a.col(p);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i] * bpj;
  }
}

// Column j of aᵀ·b.
inline void matmul_tn_col(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out,
                          std::size_t j) {
  const auto bj = b.col(j);
  for (std::size_t i = 0; i < a.cols(); ++i) {
    const auto ai = a.col(i);
    double acc = 0.0;
    for (std::size_t p = 0; p < ai.size(); ++p) acc += ai[p] * bj[p];
    out(i, j) = acc;
  }
}

// Column j of a·bᵀ.
inline void matmul_nt_col(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out,
                          std::size_t j) {
  auto dst = out.col(j);
  for (std::size_t p = 0; p < a.cols(); ++p) {
    const double bjp = b(j, p);
    const auto src = a.col(p);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i] * bjp;
  }
}

inline void gather_rows_col(const DenseMatrix& m, const IndexSet& rows, DenseMatrix& out,
                            std::size_t j) {
  const auto src = m.col(j);
  auto dst = out.col(j);
  for (std::size_t k = 0; k < rows.size(); ++k) dst[k] = src[rows[k]];
}

inline void gather_cols_col(const DenseMatrix& m, const IndexSet& cols, DenseMatrix& out,
                            std::size_t k) {
  const auto src = m.col(cols[k]);
  auto dst = out.col(k);
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
}

inline void threshold_col(const DenseMatrix& data, DenseMatrix& estimate, double zeta,
                          std::size_t j) {
  const auto d = data.col(j);
  auto e = estimate.col(j);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double x = d[i] - e[i];
    e[i] = std::abs(x) > zeta ? x : 0.0;
  }
}

template <class Body>
void for_each_col_serial(std::size_t ncols, Body&& body) {
  for (std::size_t j = 0; j < ncols; ++j) body(j);
}

template <class Body>
void for_each_col_parallel(std::size_t ncols, Body&& body) {
  const auto n = static_cast<std::int64_t>(ncols);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) body(static_cast<std::size_t>(j));
}

bool worth_parallel(std::size_t work) {
  return work >= kParallelWork && available_threads() > 1;
}

}  // namespace

int available_threads() {
#ifdef _OPENMP
  return omp_in_parallel() ? 1 : omp_get_max_threads();
#else
  return 1;
#endif
}

#define IRCUR_DEFINE_KERNELS(NS, FOR_EACH)                                                    \
  namespace NS {                                                                              \
  DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {                            \
    require_inner(a.cols(), b.rows(), "matmul");                                              \
    DenseMatrix out(a.rows(), b.cols());                                                      \
    FOR_EACH(b.cols(), [&](std::size_t j) { matmul_col(a, b, out, j); });                     \
    return out;                                                                               \
  }                                                                                           \
  DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {                         \
    require_inner(a.rows(), b.rows(), "matmul_tn");                                           \
    DenseMatrix out(a.cols(), b.cols());                                                      \
    FOR_EACH(b.cols(), [&](std::size_t j) { matmul_tn_col(a, b, out, j); });                  \
    return out;                                                                               \
  }                                                                                           \
  DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {                         \
    require_inner(a.cols(), b.cols(), "matmul_nt");                                           \
    DenseMatrix out(a.rows(), b.rows());                                                      \
    FOR_EACH(b.rows(), [&](std::size_t j) { matmul_nt_col(a, b, out, j); });                  \
    return out;                                                                               \
  }                                                                                           \
  DenseMatrix gather_rows(const DenseMatrix& m, const IndexSet& rows) {                       \
    require_rows(m, rows);                                                                    \
    DenseMatrix out(rows.size(), m.cols());                                                   \
    FOR_EACH(m.cols(), [&](std::size_t j) { gather_rows_col(m, rows, out, j); });             \
    return out;                                                                               \
  }                                                                                           \
  DenseMatrix gather_cols(const DenseMatrix& m, const IndexSet& cols) {                       \
    require_cols(m, cols);                                                                    \
    DenseMatrix out(m.rows(), cols.size());                                                   \
    FOR_EACH(cols.size(), [&](std::size_t k) { gather_cols_col(m, cols, out, k); });          \
    return out;                                                                               \
  }                                                                                           \
  void threshold_residual(const DenseMatrix& data, DenseMatrix& estimate, double zeta) {      \
    if (data.rows() != estimate.rows() || data.cols() != estimate.cols())                     \
      throw ShapeError("threshold_residual: shape mismatch");                                 \
    FOR_EACH(data.cols(), [&](std::size_t j) { threshold_col(data, estimate, zeta, j); });    \
  }                                                                                           \
  }

IRCUR_DEFINE_KERNELS(serial, for_each_col_serial)
IRCUR_DEFINE_KERNELS(parallel, for_each_col_parallel)

#undef IRCUR_DEFINE_KERNELS

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  return worth_parallel(a.rows() * a.cols() * b.cols()) ? parallel::matmul(a, b)
                                                         : serial::matmul(a, b);
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  return worth_parallel(a.rows() * a.cols() * b.cols()) ? parallel::matmul_tn(a, b)
                                                         : serial::matmul_tn(a, b);
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  return worth_parallel(a.rows() * a.cols() * b.rows()) ? parallel::matmul_nt(a, b)
                                                         : serial::matmul_nt(a, b);
}

DenseMatrix gather_rows(const DenseMatrix& m, const IndexSet& rows) {
  return worth_parallel(rows.size() * m.cols()) ? parallel::gather_rows(m, rows)
                                                : serial::gather_rows(m, rows);
}

DenseMatrix gather_cols(const DenseMatrix& m, const IndexSet& cols) {
  return worth_parallel(m.rows() * cols.size()) ? parallel::gather_cols(m, cols)
                                                : serial::gather_cols(m, cols);
}

void threshold_residual(const DenseMatrix& data, DenseMatrix& estimate, double zeta) {
  if (worth_parallel(data.size()))
    parallel::threshold_residual(data, estimate, zeta);
  else
    serial::threshold_residual(data, estimate, zeta);
}

}  // namespace ircur::kernels
