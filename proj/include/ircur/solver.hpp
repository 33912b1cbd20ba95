#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ircur/index_set.hpp"
#include "ircur/linalg.hpp"
#include "ircur/matrix.hpp"
#include "ircur/random.hpp"

namespace ircur {

/// Whether the sampled rows/columns stay put for the whole run or are
/// redrawn at the start of every iteration.
enum class SamplingMode { Fixed, Resampled };

struct SolverConfig {
  std::size_t rank = 1;
  double eps = 1e-5;
  /// Initial threshold. Defaults to inf_norm(D) when unset.
  std::optional<double> zeta0;
  double gamma = 0.65;
  double c_rows = 4.0;
  double c_cols = 4.0;
  SamplingMode mode = SamplingMode::Fixed;
  std::size_t max_iter = 200;
  RngSeed seed{};

  /// Throws ParameterError if any tunable is out of range.
  void validate() const;
};

/// Low-rank estimate C · U† · R with C = [·]_{:,J}, R = [·]_{I,:} and the
/// pseudoinverse of the rank-truncated (I, J) core.
struct CurFactors {
  DenseMatrix c;
  PinvFactor core_pinv;
  DenseMatrix r;
  IndexSet rows;
  IndexSet cols;

  /// Factors representing the zero matrix of shape n_rows × n_cols.
  static CurFactors zero(std::size_t n_rows, std::size_t n_cols, IndexSet rows, IndexSet cols);

  std::size_t n_rows() const noexcept { return c.rows(); }
  std::size_t n_cols() const noexcept { return r.cols(); }

  /// Dense C · U† · R. Materialises an n_rows × n_cols array; test scale only.
  DenseMatrix materialize() const;
};

/// The sparse estimate, stored only on the sampled rows and columns.
struct SparseEstimate {
  DenseMatrix row_block;  // [S]_{I,:}
  DenseMatrix col_block;  // [S]_{:,J}
  IndexSet rows;
  IndexSet cols;

  static SparseEstimate zero(std::size_t n_rows, std::size_t n_cols, IndexSet rows, IndexSet cols);
};

/// The observed matrix restricted to a row and column sample, with the
/// block norms used as the error denominator.
struct SampledBlocks {
  IndexSet rows;
  IndexSet cols;
  DenseMatrix row_block;  // [D]_{I,:}
  DenseMatrix col_block;  // [D]_{:,J}
  double row_norm = 0.0;
  double col_norm = 0.0;

  static SampledBlocks extract(const DenseMatrix& d, IndexSet rows, IndexSet cols);
};

struct SolverTrace {
  /// e_k and ζ_k for k = 1..iterations.
  std::vector<double> errors;
  std::vector<double> thresholds;
  std::vector<double> iteration_millis;
  /// Peak DenseMatrix elements allocated above the iteration's starting level.
  std::vector<std::int64_t> peak_transient;
  double initial_error = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  double final_error() const noexcept { return errors.empty() ? initial_error : errors.back(); }
};

struct SolveResult {
  CurFactors cur;
  SparseEstimate sparse;
  SolverTrace trace;
};

/// Called after each completed iteration k ≥ 1 with the iterate and the
/// threshold it used.
using IterationObserver =
    std::function<void(std::size_t k, const CurFactors&, const SparseEstimate&, double zeta)>;

/// Entrywise T_ζ: keeps x iff |x| > ζ.
DenseMatrix hard_threshold(const DenseMatrix& x, double zeta);

/// γ^k · ζ0, accumulated as a product chain so that the solver's schedule
/// reproduces it bit for bit.
double threshold_at(const SolverConfig& config, std::size_t k);
double threshold_at(double zeta0, double gamma, std::size_t k);

/// [C U† R]_{rows,:} without forming the full product.
DenseMatrix cur_eval_rows(const CurFactors& cur, const IndexSet& rows);
/// [C U† R]_{:,cols} without forming the full product.
DenseMatrix cur_eval_cols(const CurFactors& cur, const IndexSet& cols);

/// Sparse update on the sampled blocks: T_ζ([D − L]_{I,:}) and
/// T_ζ([D − L]_{:,J}). The (I, J) intersection is written identically to
/// both blocks.
SparseEstimate phase1(const SampledBlocks& d, const CurFactors& cur, double zeta);
SparseEstimate phase1(const DenseMatrix& d, const CurFactors& cur, double zeta);

/// Low-rank update: C = [D − S]_{:,J}, R = [D − S]_{I,:}, core = H_r of the
/// intersection, with the pseudoinverse taken from the same factorisation.
CurFactors phase2(const SampledBlocks& d, const SparseEstimate& s, std::size_t rank);
CurFactors phase2(const DenseMatrix& d, const SparseEstimate& s, std::size_t rank);

/// Relative residual of D − L − S on the sampled blocks; 0 when D vanishes there.
double residual_error(const SampledBlocks& d, const CurFactors& cur, const SparseEstimate& s);
double residual_error(const DenseMatrix& d, const CurFactors& cur, const SparseEstimate& s);

/// Runs the alternating threshold / CUR iteration until e_k ≤ eps or
/// max_iter. Throws InputError on non-finite D and ParameterError on an
/// invalid config. Not converging is reported in the trace, not thrown.
SolveResult solve(const DenseMatrix& d, const SolverConfig& config,
                  const IterationObserver& observer = {});

}  // namespace ircur
