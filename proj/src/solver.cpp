#include "ircur/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "ircur/errors.hpp"
#include "ircur/kernels.hpp"
#include "ircur/sampling.hpp"

namespace ircur {

namespace {

// (C_rows · V) Σ⁻¹ as a |rows| × k matrix.
DenseMatrix scaled_left(const DenseMatrix& c_rows, const PinvFactor& p) {
  DenseMatrix t = kernels::matmul(c_rows, p.right());
  for (std::size_t j = 0; j < t.cols(); ++j)
    for (double& v : t.col(j)) v /= p.sigma()[j];
  return t;
}

double sum_sq_residual(const DenseMatrix& d, const DenseMatrix& l, const DenseMatrix& s) {
  double acc = 0.0;
  const auto dd = d.data();
  const auto ll = l.data();
  const auto ss = s.data();
  for (std::size_t k = 0; k < dd.size(); ++k) {
    const double x = dd[k] - ll[k] - ss[k];
    acc += x * x;
  }
  return acc;
}

void check_blocks(const SampledBlocks& d, const IndexSet& rows, const IndexSet& cols,
                  const char* op) {
  if (!(d.rows == rows) || !(d.cols == cols))
    throw ShapeError(std::string(op) + ": index sets do not match the sampled blocks");
}

}  // namespace

void SolverConfig::validate() const {
  if (rank == 0) throw ParameterError("rank must be at least 1");
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  if (zeta0 && !(*zeta0 > 0.0 && std::isfinite(*zeta0))) throw ParameterError("zeta0 must be positive and finite");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
  if (!(c_rows > 0.0) || !(c_cols > 0.0)) throw ParameterError("sampling constants must be positive");
  if (max_iter == 0) throw ParameterError("max_iter must be at least 1");
}

CurFactors CurFactors::zero(std::size_t n_rows, std::size_t n_cols, IndexSet rows, IndexSet cols) {
  PinvFactor empty = PinvFactor::from_svd(
      {DenseMatrix(rows.size(), 0), {}, DenseMatrix(cols.size(), 0)});
  return {DenseMatrix(n_rows, cols.size()), std::move(empty), DenseMatrix(rows.size(), n_cols),
          std::move(rows), std::move(cols)};
}

DenseMatrix CurFactors::materialize() const {
  return kernels::matmul(core_pinv.apply_right(c), r);
}

SparseEstimate SparseEstimate::zero(std::size_t n_rows, std::size_t n_cols, IndexSet rows,
                                    IndexSet cols) {
  return {DenseMatrix(rows.size(), n_cols), DenseMatrix(n_rows, cols.size()), std::move(rows),
          std::move(cols)};
}

SampledBlocks SampledBlocks::extract(const DenseMatrix& d, IndexSet rows, IndexSet cols) {
  SampledBlocks b{std::move(rows), std::move(cols), {}, {}, 0.0, 0.0};
  b.row_block = kernels::gather_rows(d, b.rows);
  b.col_block = kernels::gather_cols(d, b.cols);
  b.row_norm = frob_norm(b.row_block);
  b.col_norm = frob_norm(b.col_block);
  return b;
}

DenseMatrix hard_threshold(const DenseMatrix& x, double zeta) {
  if (!(zeta >= 0.0)) throw ParameterError("hard_threshold: zeta must be nonnegative");
  DenseMatrix out(x.rows(), x.cols());
  const auto src = x.data();
  auto dst = out.data();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::abs(src[k]) > zeta ? src[k] : 0.0;
  return out;
}

double threshold_at(double zeta0, double gamma, std::size_t k) {
  double z = zeta0;
  for (std::size_t i = 0; i < k; ++i) z *= gamma;
  return z;
}

double threshold_at(const SolverConfig& config, std::size_t k) {
  if (!config.zeta0) throw ParameterError("threshold_at: zeta0 is unset");
  return threshold_at(*config.zeta0, config.gamma, k);
}

DenseMatrix cur_eval_rows(const CurFactors& cur, const IndexSet& rows) {
  const PinvFactor& p = cur.core_pinv;
  if (rows[rows.size() - 1] >= cur.n_rows()) throw BoundsError("cur_eval_rows: row out of range");
  if (p.rank() == 0) return DenseMatrix(rows.size(), cur.n_cols());
  const DenseMatrix left = scaled_left(kernels::gather_rows(cur.c, rows), p);
  const DenseMatrix wt_r = kernels::matmul_tn(p.left(), cur.r);
  return kernels::matmul(left, wt_r);
}

DenseMatrix cur_eval_cols(const CurFactors& cur, const IndexSet& cols) {
  const PinvFactor& p = cur.core_pinv;
  if (cols[cols.size() - 1] >= cur.n_cols()) throw BoundsError("cur_eval_cols: column out of range");
  if (p.rank() == 0) return DenseMatrix(cur.n_rows(), cols.size());
  const DenseMatrix left = scaled_left(cur.c, p);
  const DenseMatrix wt_r = kernels::matmul_tn(p.left(), kernels::gather_cols(cur.r, cols));
  return kernels::matmul(left, wt_r);
}

SparseEstimate phase1(const SampledBlocks& d, const CurFactors& cur, double zeta) {
  DenseMatrix row_block = cur_eval_rows(cur, d.rows);
  kernels::threshold_residual(d.row_block, row_block, zeta);
  DenseMatrix col_block = cur_eval_cols(cur, d.cols);
  kernels::threshold_residual(d.col_block, col_block, zeta);
  // The two L evaluations round differently on the intersection; make the
  // row block authoritative there.
  for (std::size_t b = 0; b < d.cols.size(); ++b)
    for (std::size_t a = 0; a < d.rows.size(); ++a)
      col_block(d.rows[a], b) = row_block(a, d.cols[b]);
  return {std::move(row_block), std::move(col_block), d.rows, d.cols};
}

SparseEstimate phase1(const DenseMatrix& d, const CurFactors& cur, double zeta) {
  return phase1(SampledBlocks::extract(d, cur.rows, cur.cols), cur, zeta);
}

CurFactors phase2(const SampledBlocks& d, const SparseEstimate& s, std::size_t rank) {
  check_blocks(d, s.rows, s.cols, "phase2");
  DenseMatrix c = d.col_block - s.col_block;
  DenseMatrix r = d.row_block - s.row_block;
  DenseMatrix core(d.rows.size(), d.cols.size());
  for (std::size_t b = 0; b < d.cols.size(); ++b)
    for (std::size_t a = 0; a < d.rows.size(); ++a) core(a, b) = r(a, d.cols[b]);
  PinvFactor pinv = PinvFactor::from_svd(truncated_svd(core, rank));
  return {std::move(c), std::move(pinv), std::move(r), d.rows, d.cols};
}

CurFactors phase2(const DenseMatrix& d, const SparseEstimate& s, std::size_t rank) {
  return phase2(SampledBlocks::extract(d, s.rows, s.cols), s, rank);
}

double residual_error(const SampledBlocks& d, const CurFactors& cur, const SparseEstimate& s) {
  check_blocks(d, s.rows, s.cols, "residual_error");
  const double denom = d.row_norm + d.col_norm;
  if (denom == 0.0) return 0.0;
  double rows_sq = 0.0;
  {
    const DenseMatrix l = cur_eval_rows(cur, d.rows);
    rows_sq = sum_sq_residual(d.row_block, l, s.row_block);
  }
  const DenseMatrix l = cur_eval_cols(cur, d.cols);
  const double cols_sq = sum_sq_residual(d.col_block, l, s.col_block);
  return (std::sqrt(rows_sq) + std::sqrt(cols_sq)) / denom;
}

double residual_error(const DenseMatrix& d, const CurFactors& cur, const SparseEstimate& s) {
  return residual_error(SampledBlocks::extract(d, s.rows, s.cols), cur, s);
}

SolveResult solve(const DenseMatrix& d, const SolverConfig& config,
                  const IterationObserver& observer) {
  config.validate();
  if (d.empty()) throw InputError("solve: empty input matrix");
  if (!d.all_finite()) throw InputError("solve: input contains non-finite entries");

  const std::size_t n_rows = d.rows();
  const std::size_t n_cols = d.cols();
  const std::size_t m_rows = sample_count(n_rows, config.rank, config.c_rows);
  const std::size_t m_cols = sample_count(n_cols, config.rank, config.c_cols);
  const double zeta0 = config.zeta0.value_or(inf_norm(d));

  Rng rng(config.seed);
  auto draw_blocks = [&] {
    IndexSet rows = sample_indices(n_rows, m_rows, rng);
    IndexSet cols = sample_indices(n_cols, m_cols, rng);
    return SampledBlocks::extract(d, std::move(rows), std::move(cols));
  };

  SampledBlocks blocks = draw_blocks();
  SolveResult out{CurFactors::zero(n_rows, n_cols, blocks.rows, blocks.cols),
                  SparseEstimate::zero(n_rows, n_cols, blocks.rows, blocks.cols),
                  {}};
  SolverTrace& trace = out.trace;
  trace.initial_error = blocks.row_norm + blocks.col_norm > 0.0 ? 1.0 : 0.0;
  if (trace.initial_error <= config.eps) {
    trace.converged = true;
    return out;
  }

  double zeta = zeta0;
  for (std::size_t k = 0; k < config.max_iter; ++k) {
    const auto start = std::chrono::steady_clock::now();
    const std::int64_t live_at_start = allocation_stats().live;
    reset_allocation_peak();

    if (config.mode == SamplingMode::Resampled && k > 0) blocks = draw_blocks();
    if (k > 0) zeta *= config.gamma;

    out.sparse = phase1(blocks, out.cur, zeta);
    out.cur = phase2(blocks, out.sparse, config.rank);
    const double err = residual_error(blocks, out.cur, out.sparse);

    const auto stop = std::chrono::steady_clock::now();
    trace.errors.push_back(err);
    trace.thresholds.push_back(zeta);
    trace.iteration_millis.push_back(
        std::chrono::duration<double, std::milli>(stop - start).count());
    trace.peak_transient.push_back(allocation_stats().peak - live_at_start);
    trace.iterations = k + 1;

    if (observer) observer(k + 1, out.cur, out.sparse, zeta);
    if (err <= config.eps) {
      trace.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace ircur
