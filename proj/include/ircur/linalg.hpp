#pragma once

#include <cstddef>
#include <vector>

#include "ircur/index_set.hpp"
#include "ircur/matrix.hpp"

namespace ircur {

/// Square root of the sum of squared entries.
double frob_norm(const DenseMatrix& m);

/// Largest absolute entry (0 for an empty or zero matrix).
double inf_norm(const DenseMatrix& m);

/// Selected rows and columns of `m`, in selection order. Throws BoundsError
/// when a selection reaches past the matrix.
DenseMatrix submatrix(const DenseMatrix& m, const IndexSet& rows, const IndexSet& cols);
DenseMatrix submatrix(const DenseMatrix& m, const IndexSet& rows, AllIndices);
DenseMatrix submatrix(const DenseMatrix& m, AllIndices, const IndexSet& cols);
DenseMatrix submatrix(const DenseMatrix& m, AllIndices, AllIndices);

/// Thin SVD factors left · diag(sigma) · rightᵀ with sigma nonincreasing.
struct SvdFactors {
  DenseMatrix left;           // W, rows × k, orthonormal columns
  std::vector<double> sigma;  // k nonnegative values
  DenseMatrix right;          // V, cols × k, orthonormal columns

  std::size_t rank() const noexcept { return sigma.size(); }

  /// Dense W · diag(sigma) · Vᵀ. Test and small-scale use only.
  DenseMatrix reconstruct() const;
};

/// Best rank-`r` approximation of `m` in Frobenius norm, computed from an
/// exact dense SVD. Returns min(r, rows, cols) triplets; trailing singular
/// values are zero when `m` has lower rank. Throws ParameterError for r = 0.
SvdFactors truncated_svd(const DenseMatrix& m, std::size_t r);

/// Moore-Penrose pseudoinverse held as SVD factors.
///
/// Singular values at or below `rel_cutoff · σ_max` are dropped, so the
/// stored rank can be smaller than the factorised one. U† = V Σ⁻¹ Wᵀ is
/// never formed; it is applied from either side.
class PinvFactor {
public:
  static constexpr double kDefaultCutoff = 1e-12;

  PinvFactor() = default;

  /// Builds the pseudoinverse of W·diag(σ)·Vᵀ from its factors.
  static PinvFactor from_svd(SvdFactors svd, double rel_cutoff = kDefaultCutoff);

  /// Rows and columns of the factorised matrix U (not of U†).
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  /// Number of retained singular values.
  std::size_t rank() const noexcept { return sigma_.size(); }

  const DenseMatrix& left() const noexcept { return left_; }
  const DenseMatrix& right() const noexcept { return right_; }
  const std::vector<double>& sigma() const noexcept { return sigma_; }

  /// U† · x, where x has rows() rows.
  DenseMatrix apply_left(const DenseMatrix& x) const;
  /// x · U†, where x has cols() columns.
  DenseMatrix apply_right(const DenseMatrix& x) const;

  /// Dense U† (cols × rows). Test use only.
  DenseMatrix materialize() const;
  /// Dense W·diag(σ)·Vᵀ restricted to the retained triplets.
  DenseMatrix core() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  DenseMatrix left_;
  std::vector<double> sigma_;
  DenseMatrix right_;
};

/// Pseudoinverse of `m` via a full SVD. rel_cutoff must lie in (0, 1).
PinvFactor pinv_factor(const DenseMatrix& m, double rel_cutoff = PinvFactor::kDefaultCutoff);

struct QrFactors {
  DenseMatrix q;  // rows × cols, orthonormal columns
  DenseMatrix r;  // cols × cols, upper triangular
};

/// Thin Householder QR. Throws ShapeError when rows < cols.
QrFactors qr_thin(const DenseMatrix& m);

}  // namespace ircur
