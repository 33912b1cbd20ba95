#include "ircur/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ircur/errors.hpp"
#include "ircur/kernels.hpp"
#include "ircur/linalg.hpp"
#include "ircur/solver.hpp"

namespace ircur {

namespace {

DenseMatrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

double mean_abs(const DenseMatrix& m) {
  if (m.empty()) return 0.0;
  double acc = 0.0;
  for (double v : m.data()) acc += std::abs(v);
  return acc / static_cast<double>(m.size());
}

std::size_t support_size(std::size_t cells, double alpha) {
  return static_cast<std::size_t>(std::llround(alpha * static_cast<double>(cells)));
}

// Selection sampling over the cells in column-major order: visits exactly
// `count` cells, each subset equally likely, and emits a uniform value on
// [-amplitude, amplitude] for each.
template <class Emit>
void draw_sparse_entries(std::size_t cells, std::size_t count, double amplitude, RngSeed seed,
                         Emit&& emit) {
  Rng rng(seed);
  std::size_t needed = count;
  for (std::size_t t = 0; t < cells && needed > 0; ++t) {
    const double remaining = static_cast<double>(cells - t);
    if (rng.uniform01() * remaining < static_cast<double>(needed)) {
      double v = 0.0;
      do {
        v = rng.uniform(-amplitude, amplitude);
      } while (v == 0.0 && amplitude > 0.0);
      emit(t, v);
      --needed;
    }
  }
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n == 0 || cols() == 0) throw ParameterError("synthetic instance needs positive dimensions");
  if (rank == 0 || rank > std::min(rows(), cols()))
    throw ParameterError("rank must lie in [1, min(rows, cols)]");
  const double cells = static_cast<double>(rows()) * static_cast<double>(cols());
  if (!(alpha >= 0.0 && alpha < 1.0) || alpha * cells > cells - 1.0)
    throw ParameterError("alpha must lie in [0, 1) and leave at least one clean entry");
}

DenseMatrix gen_low_rank(std::size_t n_rows, std::size_t n_cols, std::size_t rank, RngSeed seed) {
  if (rank > std::min(n_rows, n_cols)) throw ParameterError("gen_low_rank: rank exceeds dimensions");
  Rng rng(seed);
  const DenseMatrix a = gaussian(n_rows, rank, rng);
  const DenseMatrix b = gaussian(n_cols, rank, rng);
  return kernels::matmul_nt(a, b);
}

DenseMatrix gen_sparse(const DenseMatrix& l, double alpha, RngSeed seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("gen_sparse: alpha must lie in [0, 1)");
  DenseMatrix s(l.rows(), l.cols());
  auto data = s.data();
  draw_sparse_entries(l.size(), support_size(l.size(), alpha), mean_abs(l), seed,
                      [&](std::size_t cell, double v) { data[cell] = v; });
  return s;
}

ProblemInstance make_problem(const SyntheticSpec& spec) {
  spec.validate();
  DenseMatrix l = gen_low_rank(spec.rows(), spec.cols(), spec.rank, spec.seed.child(0));
  DenseMatrix s = gen_sparse(l, spec.alpha, spec.seed.child(1));
  DenseMatrix d = l + s;
  return {std::move(d), std::move(l), std::move(s), spec};
}

Observation make_observation(const SyntheticSpec& spec) {
  spec.validate();
  Observation obs{gen_low_rank(spec.rows(), spec.cols(), spec.rank, spec.seed.child(0)), 0.0};
  obs.low_rank_inf_norm = inf_norm(obs.d);
  auto data = obs.d.data();
  draw_sparse_entries(obs.d.size(), support_size(obs.d.size(), spec.alpha), mean_abs(obs.d),
                      spec.seed.child(1), [&](std::size_t cell, double v) { data[cell] += v; });
  return obs;
}

double incoherence_cap(std::size_t n, std::size_t rank) {
  const double spread = std::sqrt(2.0 * std::log(2.0 * static_cast<double>(n)) /
                                  static_cast<double>(rank));
  return 3.0 * (1.0 + spread) * (1.0 + spread);
}

AssumptionReport assumption_report(const DenseMatrix& l, const DenseMatrix& s, std::size_t rank) {
  if (rank == 0) throw ParameterError("assumption_report: rank must be at least 1");
  AssumptionReport rep;

  const SvdFactors svd = truncated_svd(l, rank);
  const double smax = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  if (smax > 0.0) {
    std::size_t k = 0;
    while (k < svd.rank() && svd.sigma[k] > 1e-12 * smax) ++k;
    auto max_row_sq = [k](const DenseMatrix& f) {
      double best = 0.0;
      for (std::size_t i = 0; i < f.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += f(i, j) * f(i, j);
        best = std::max(best, acc);
      }
      return best;
    };
    const double r = static_cast<double>(rank);
    const double mu_rows = static_cast<double>(l.rows()) / r * max_row_sq(svd.left);
    const double mu_cols = static_cast<double>(l.cols()) / r * max_row_sq(svd.right);
    rep.mu_estimate = std::max(mu_rows, mu_cols);
    rep.coherence_flag = *rep.mu_estimate > incoherence_cap(std::max(l.rows(), l.cols()), rank);
  } else {
    rep.coherence_flag = true;
  }

  std::vector<std::size_t> row_nnz(s.rows(), 0);
  for (std::size_t j = 0; j < s.cols(); ++j) {
    std::size_t col_nnz = 0;
    const auto col = s.col(j);
    for (std::size_t i = 0; i < col.size(); ++i)
      if (col[i] != 0.0) {
        ++col_nnz;
        ++row_nnz[i];
      }
    rep.max_col_nnz = std::max(rep.max_col_nnz, col_nnz);
  }
  if (!row_nnz.empty()) rep.max_row_nnz = *std::max_element(row_nnz.begin(), row_nnz.end());
  if (s.rows() > 0 && s.cols() > 0)
    rep.alpha_rowcol = std::max(static_cast<double>(rep.max_row_nnz) / static_cast<double>(s.cols()),
                                static_cast<double>(rep.max_col_nnz) / static_cast<double>(s.rows()));
  return rep;
}

double recovery_error(const CurFactors& cur, const DenseMatrix& l_true) {
  if (cur.n_rows() != l_true.rows() || cur.n_cols() != l_true.cols())
    throw ShapeError("recovery_error: CUR shape does not match the reference");
  const double diff = frob_norm(cur.materialize() - l_true);
  const double ref = frob_norm(l_true);
  return ref > 0.0 ? diff / ref : diff;
}

bool success_check(const CurFactors& cur, const DenseMatrix& l_true) {
  return recovery_error(cur, l_true) <= kSuccessTolerance;
}

SyntheticVideo make_synthetic_video(std::size_t width, std::size_t height, std::size_t frames,
                                    RngSeed seed) {
  if (width < 8 || height < 8 || frames == 0)
    throw ParameterError("synthetic video needs at least 8x8 pixels and one frame");
  Rng rng(seed);
  SyntheticVideo v;
  v.background = Frame{width, height, std::vector<std::uint8_t>(width * height)};
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      const double shade = 50.0 + 90.0 * static_cast<double>(x) / w +
                           25.0 * std::sin(static_cast<double>(y) / 7.0) + rng.uniform(-8.0, 8.0);
      v.background.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::round(shade), 0.0, 255.0));
    }

  const std::size_t side = std::max<std::size_t>(4, std::min(width, height) / 8);
  v.frames.width = width;
  v.frames.height = height;
  for (std::size_t t = 0; t < frames; ++t) {
    // Bounce horizontally, drift vertically on a slow sine.
    const double phase = frames > 1 ? static_cast<double>(t) / static_cast<double>(frames - 1) : 0.0;
    const double sweep = 2.0 * phase <= 1.0 ? 2.0 * phase : 2.0 - 2.0 * phase;
    const auto x0 = static_cast<std::size_t>(std::round(sweep * (w - static_cast<double>(side))));
    const auto y0 = static_cast<std::size_t>(std::round(
        (0.5 + 0.35 * std::sin(6.283185307179586 * phase)) * (h - static_cast<double>(side))));

    Frame f = v.background;
    std::vector<bool> mask(width * height, false);
    for (std::size_t y = y0; y < y0 + side; ++y)
      for (std::size_t x = x0; x < x0 + side; ++x) {
        f.at(x, y) = static_cast<std::uint8_t>(235 + (x + y) % 16);
        mask[y * width + x] = true;
      }
    v.frames.frames.push_back(std::move(f));
    v.blob_masks.push_back(std::move(mask));
  }
  return v;
}

}  // namespace ircur
