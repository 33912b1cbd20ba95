#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace ircur {

/// Per-thread bookkeeping of DenseMatrix storage, in scalar elements.
///
/// `cumulative` only grows. `live` tracks currently held elements and `peak`
/// is its high-water mark since the last reset_peak(). Counters are
/// thread-local so that concurrent solver runs measure only themselves.
struct AllocationStats {
  std::int64_t cumulative = 0;
  std::int64_t live = 0;
  std::int64_t peak = 0;
};

AllocationStats allocation_stats() noexcept;

/// Sets the peak to the current live count.
void reset_allocation_peak() noexcept;

/// Column-major dense real matrix.
///
/// Entries are always finite when built through the checked factories
/// (from_rows, from_column_major). Zero-initialised construction is
/// unchecked since zeros are trivially finite; mutable element access is
/// available to kernels that fill a freshly allocated result.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);

  DenseMatrix(const DenseMatrix& other);
  DenseMatrix(DenseMatrix&& other) noexcept;
  DenseMatrix& operator=(const DenseMatrix& other);
  DenseMatrix& operator=(DenseMatrix&& other) noexcept;
  ~DenseMatrix();

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static DenseMatrix identity(std::size_t n);

  /// Row-major nested literal, handy in tests: {{1, 2}, {3, 4}}.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  /// Takes ownership of column-major data; throws InputError on NaN/Inf
  /// and ShapeError when the length does not match.
  static DenseMatrix from_column_major(std::size_t rows, std::size_t cols,
                                       std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return rows_ * cols_; }
  bool empty() const noexcept { return size() == 0; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }

  /// Bounds-checked access; throws BoundsError.
  double at(std::size_t i, std::size_t j) const;

  std::span<const double> data() const noexcept { return {data_.get(), size()}; }
  std::span<double> data() noexcept { return {data_.get(), size()}; }

  std::span<const double> col(std::size_t j) const noexcept { return {data_.get() + j * rows_, rows_}; }
  std::span<double> col(std::size_t j) noexcept { return {data_.get() + j * rows_, rows_}; }

  DenseMatrix transpose() const;

  bool all_finite() const noexcept;

  /// Bitwise equality of shape and contents.
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) noexcept;

private:
  void release() noexcept;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::unique_ptr<double[]> data_;
};

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

}  // namespace ircur
