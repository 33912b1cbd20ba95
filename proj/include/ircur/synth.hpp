#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ircur/matrix.hpp"
#include "ircur/mio.hpp"
#include "ircur/random.hpp"

namespace ircur {

struct CurFactors;

/// Parameters of a synthetic low-rank-plus-sparse instance. Square unless
/// n_cols is given.
struct SyntheticSpec {
  std::size_t n = 0;
  std::size_t rank = 1;
  double alpha = 0.0;
  RngSeed seed{};
  std::optional<std::size_t> n_cols;

  std::size_t rows() const noexcept { return n; }
  std::size_t cols() const noexcept { return n_cols.value_or(n); }

  /// Throws ParameterError on rank 0, rank > min(rows, cols), or an alpha
  /// outside [0, 1) that would corrupt every entry.
  void validate() const;
};

struct ProblemInstance {
  DenseMatrix d;
  DenseMatrix l;
  DenseMatrix s;
  SyntheticSpec spec;
};

/// Only the observation D of an instance, for sizes where holding L and S
/// as well is too costly. D is bitwise identical to make_problem(spec).d.
struct Observation {
  DenseMatrix d;
  double low_rank_inf_norm = 0.0;
};

/// L = A·Bᵀ with A (n_rows × r) and B (n_cols × r) i.i.d. standard normal.
DenseMatrix gen_low_rank(std::size_t n_rows, std::size_t n_cols, std::size_t rank, RngSeed seed);

/// round(α · size) support cells chosen uniformly without replacement; values
/// i.i.d. uniform on [−a, a], a = mean |L_ij|.
DenseMatrix gen_sparse(const DenseMatrix& l, double alpha, RngSeed seed);

ProblemInstance make_problem(const SyntheticSpec& spec);
Observation make_observation(const SyntheticSpec& spec);

/// Incoherence and sparsity diagnostics of a ground-truth pair.
struct AssumptionReport {
  /// (n/r) · max squared row norm over both singular-vector factors; unset
  /// when L = 0.
  std::optional<double> mu_estimate;
  std::size_t max_row_nnz = 0;
  std::size_t max_col_nnz = 0;
  /// max(max_row_nnz / n_cols, max_col_nnz / n_rows)
  double alpha_rowcol = 0.0;
  /// mu_estimate exceeded the Gaussian-factor cap (see incoherence_cap).
  bool coherence_flag = false;
};

AssumptionReport assumption_report(const DenseMatrix& l, const DenseMatrix& s, std::size_t rank);

/// Upper band for mu_estimate of Gaussian factors: 3·(1 + sqrt(2 ln(2n) / r))².
double incoherence_cap(std::size_t n, std::size_t rank);

/// ‖C U† R − L‖_F / ‖L‖_F, or the absolute error when L = 0. Materialises
/// the CUR product.
double recovery_error(const CurFactors& cur, const DenseMatrix& l_true);

/// recovery_error ≤ 1e-3.
bool success_check(const CurFactors& cur, const DenseMatrix& l_true);

inline constexpr double kSuccessTolerance = 1e-3;

/// Static textured background with a bright square moving across it.
struct SyntheticVideo {
  FrameSequence frames;
  Frame background;
  /// Per frame, row-major mask of pixels covered by the blob.
  std::vector<std::vector<bool>> blob_masks;
};

SyntheticVideo make_synthetic_video(std::size_t width, std::size_t height, std::size_t frames,
                                    RngSeed seed);

}  // namespace ircur
