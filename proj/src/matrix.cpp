#include "ircur/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "ircur/errors.hpp"

namespace ircur {

namespace {

thread_local AllocationStats tls_stats;

void note_alloc(std::size_t n) noexcept {
  const auto k = static_cast<std::int64_t>(n);
  tls_stats.cumulative += k;
  tls_stats.live += k;
  tls_stats.peak = std::max(tls_stats.peak, tls_stats.live);
}

void note_free(std::size_t n) noexcept { tls_stats.live -= static_cast<std::int64_t>(n); }

std::unique_ptr<double[]> allocate(std::size_t n) {
  if (n == 0) return nullptr;
  note_alloc(n);
  return std::unique_ptr<double[]>(new double[n]());
}

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
}

}  // namespace

AllocationStats allocation_stats() noexcept { return tls_stats; }

void reset_allocation_peak() noexcept { tls_stats.peak = tls_stats.live; }

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(allocate(rows * cols)) {}

DenseMatrix::DenseMatrix(const DenseMatrix& other)
    : rows_(other.rows_), cols_(other.cols_), data_(allocate(other.size())) {
  if (size() > 0) std::memcpy(data_.get(), other.data_.get(), size() * sizeof(double));
}

DenseMatrix::DenseMatrix(DenseMatrix&& other) noexcept
    : rows_(other.rows_), cols_(other.cols_), data_(std::move(other.data_)) {
  other.rows_ = other.cols_ = 0;
}

DenseMatrix& DenseMatrix::operator=(const DenseMatrix& other) {
  if (this != &other) {
    DenseMatrix tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

DenseMatrix& DenseMatrix::operator=(DenseMatrix&& other) noexcept {
  if (this != &other) {
    release();
    rows_ = other.rows_;
    cols_ = other.cols_;
    data_ = std::move(other.data_);
    other.rows_ = other.cols_ = 0;
  }
  return *this;
}

DenseMatrix::~DenseMatrix() { release(); }

void DenseMatrix::release() noexcept {
  if (data_) note_free(size());
  data_.reset();
  rows_ = cols_ = 0;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data(r * c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) data[i + j++ * r] = v;
    ++i;
  }
  return from_column_major(r, c, std::move(data));
}

DenseMatrix DenseMatrix::from_column_major(std::size_t rows, std::size_t cols,
                                           std::vector<double> data) {
  if (data.size() != rows * cols)
    throw ShapeError("from_column_major: expected " + std::to_string(rows * cols) +
                     " values, got " + std::to_string(data.size()));
  DenseMatrix m(rows, cols);
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!std::isfinite(data[k]))
      throw InputError("non-finite entry at linear index " + std::to_string(k));
    m.data_[k] = data[k];
  }
  return m;
}

double DenseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_)
    throw BoundsError("index (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
  return (*this)(i, j);
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data().begin(), data().end(), [](double v) { return std::isfinite(v); });
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) noexcept {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  return a.size() == 0 || std::memcmp(a.data_.get(), b.data_.get(), a.size() * sizeof(double)) == 0;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "operator-");
  DenseMatrix out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = x[k] - y[k];
  return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "operator+");
  DenseMatrix out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = x[k] + y[k];
  return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = s * x[k];
  return out;
}

}  // namespace ircur
