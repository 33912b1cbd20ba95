#include <cmath>
#include <cstring>

#include "doctest.h"
#include "ircur/errors.hpp"
#include "ircur/sampling.hpp"
#include "ircur/solver.hpp"
#include "ircur/synth.hpp"
#include "test_support.hpp"

using namespace ircur;
using namespace ircur::testing;

namespace {

DenseMatrix rows_of(const DenseMatrix& m, const IndexSet& rows) {
  DenseMatrix out(rows.size(), m.cols());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t j = 0; j < m.cols(); ++j) out(a, j) = m(rows[a], j);
  return out;
}

DenseMatrix cols_of(const DenseMatrix& m, const IndexSet& cols) {
  DenseMatrix out(m.rows(), cols.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t b = 0; b < cols.size(); ++b) out(i, b) = m(i, cols[b]);
  return out;
}

CurFactors exact_cur(const DenseMatrix& l, const IndexSet& rows, const IndexSet& cols, std::size_t r) {
  return phase2(l, SparseEstimate::zero(l.rows(), l.cols(), rows, cols), r);
}

bool same_bits(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(double)) == 0;
}

// Dense evaluation of the residual statistic straight from its definition.
double dense_residual(const DenseMatrix& d, const DenseMatrix& l, const SparseEstimate& s) {
  const IndexSet& I = s.rows;
  const IndexSet& J = s.cols;
  long double num_rows = 0, num_cols = 0, den_rows = 0, den_cols = 0;
  for (std::size_t a = 0; a < I.size(); ++a)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      const long double x = static_cast<long double>(d(I[a], j)) - l(I[a], j) - s.row_block(a, j);
      num_rows += x * x;
      den_rows += static_cast<long double>(d(I[a], j)) * d(I[a], j);
    }
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t b = 0; b < J.size(); ++b) {
      const long double x = static_cast<long double>(d(i, J[b])) - l(i, J[b]) - s.col_block(i, b);
      num_cols += x * x;
      den_cols += static_cast<long double>(d(i, J[b])) * d(i, J[b]);
    }
  return static_cast<double>((std::sqrt(num_rows) + std::sqrt(num_cols)) /
                             (std::sqrt(den_rows) + std::sqrt(den_cols)));
}

SolverConfig config_for(std::size_t r, double c, SamplingMode mode, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.rank = r;
  cfg.c_rows = cfg.c_cols = c;
  cfg.mode = mode;
  cfg.seed = RngSeed{seed, 0};
  return cfg;
}

}  // namespace

TEST_CASE("hard_threshold") {
  const DenseMatrix x = DenseMatrix::from_rows({{3.0, -0.5}, {0.0, 2.0}});
  CHECK(hard_threshold(x, 1.0) == DenseMatrix::from_rows({{3.0, 0.0}, {0.0, 2.0}}));
  CHECK(hard_threshold(x, 2.0) == DenseMatrix::from_rows({{3.0, 0.0}, {0.0, 0.0}}));
  const DenseMatrix g = random_matrix(6, 5, 1);
  CHECK(hard_threshold(g, 0.0) == g);
  CHECK(inf_norm(hard_threshold(g, inf_norm(g))) == 0.0);
  CHECK_THROWS_AS(hard_threshold(g, -1.0), ParameterError);
}

TEST_CASE("threshold_at") {
  CHECK(threshold_at(10.0, 0.5, 0) == 10.0);
  CHECK(threshold_at(10.0, 0.5, 2) == 2.5);
  CHECK(threshold_at(1.0, 0.65, 1) == 0.65);
  for (double z0 : {1.0, 3.7, 1234.5})
    for (double g : {0.1, 0.65, 0.99}) {
      double chain = z0;
      for (std::size_t k = 0; k < 60; ++k) {
        CHECK(threshold_at(z0, g, k) == chain);
        chain *= g;
      }
    }
  SolverConfig cfg;
  cfg.zeta0 = 8.0;
  cfg.gamma = 0.5;
  CHECK(threshold_at(cfg, 3) == 1.0);
}

TEST_CASE("cur_eval on a rank-1 product") {
  const DenseMatrix u = DenseMatrix::from_rows({{1}, {2}, {3}, {4}});
  const DenseMatrix l = naive_product(u, naive_transpose(u));
  const IndexSet I({0, 1}, 4), J({0, 1}, 4);
  const CurFactors cur = exact_cur(l, I, J, 1);
  const DenseMatrix rows = cur_eval_rows(cur, I);
  CHECK(rel_diff(rows, DenseMatrix::from_rows({{1, 2, 3, 4}, {2, 4, 6, 8}})) <= 1e-14);
  CHECK(rel_diff(cur_eval_cols(cur, J), naive_transpose(rows)) <= 1e-14);
  CHECK(rel_diff(cur.materialize(), l) <= 1e-14);
}

TEST_CASE("cur_eval edge cases") {
  const IndexSet I({1, 4, 7}, 10), J({0, 3, 8}, 10);
  const CurFactors zero = CurFactors::zero(10, 10, I, J);
  CHECK(inf_norm(cur_eval_rows(zero, IndexSet({0, 9}, 10))) == 0.0);
  CHECK(cur_eval_cols(zero, J).rows() == 10);

  const DenseMatrix l = random_low_rank(10, 10, 3, 5);
  const CurFactors cur = exact_cur(l, I, J, 3);
  CHECK(rel_diff(cur_eval_rows(cur, I), rows_of(l, I)) <= 1e-10);
  CHECK(rel_diff(cur_eval_cols(cur, J), cols_of(l, J)) <= 1e-10);
  const IndexSet other({2, 5, 6}, 10);
  CHECK(rel_diff(cur_eval_rows(cur, other), rows_of(l, other)) <= 1e-10);
  CHECK_THROWS_AS(cur_eval_rows(cur, IndexSet({0, 11}, 12)), BoundsError);
}

TEST_CASE("phase1") {
  const std::size_t n = 20;
  const IndexSet I({0, 3, 7, 12, 18}, n), J({1, 2, 9, 15, 19}, n);
  SUBCASE("threshold above every entry") {
    const DenseMatrix d = random_matrix(n, n, 2);
    const SparseEstimate s = phase1(d, CurFactors::zero(n, n, I, J), inf_norm(d));
    CHECK(inf_norm(s.row_block) == 0.0);
    CHECK(inf_norm(s.col_block) == 0.0);
  }
  SUBCASE("exact low-rank estimate leaves nothing") {
    const DenseMatrix d = random_low_rank(n, n, 2, 3);
    const SparseEstimate s = phase1(d, exact_cur(d, I, J, 2), 1e-9);
    CHECK(inf_norm(s.row_block) == 0.0);
    CHECK(inf_norm(s.col_block) == 0.0);
  }
  SUBCASE("support stays inside the true support") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ProblemInstance p = make_problem({.n = n, .rank = 2, .alpha = 0.1, .seed = RngSeed{seed, 0}});
      // Two estimates: the initial zero and an imperfect CUR of D.
      std::vector<CurFactors> estimates;
      estimates.push_back(CurFactors::zero(n, n, I, J));
      estimates.push_back(exact_cur(p.d, I, J, 2));
      for (const CurFactors& est : estimates) {
        const DenseMatrix lk = est.materialize();
        double zeta = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) zeta = std::max(zeta, std::abs(p.l(i, j) - lk(i, j)));
        const SparseEstimate s = phase1(p.d, est, zeta);
        for (std::size_t a = 0; a < I.size(); ++a)
          for (std::size_t j = 0; j < n; ++j)
            if (s.row_block(a, j) != 0.0) CHECK(p.s(I[a], j) != 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t b = 0; b < J.size(); ++b)
            if (s.col_block(i, b) != 0.0) CHECK(p.s(i, J[b]) != 0.0);
      }
    }
  }
  SUBCASE("intersection agrees between blocks") {
    const DenseMatrix d = random_matrix(n, n, 4);
    const CurFactors est = exact_cur(random_low_rank(n, n, 3, 8), I, J, 3);
    const SparseEstimate s = phase1(d, est, 0.3);
    for (std::size_t a = 0; a < I.size(); ++a)
      for (std::size_t b = 0; b < J.size(); ++b) CHECK(s.row_block(a, J[b]) == s.col_block(I[a], b));
  }
}

TEST_CASE("phase2") {
  const std::size_t n = 20;
  const IndexSet I({0, 4, 5, 11, 16, 19}, n), J({2, 3, 8, 10, 13, 17}, n);
  SUBCASE("clean rank-r input is reproduced") {
    const DenseMatrix d = random_low_rank(n, n, 3, 10);
    const CurFactors cur = phase2(d, SparseEstimate::zero(n, n, I, J), 3);
    CHECK(rel_diff(cur.materialize(), d) <= 1e-9);
    CHECK(cur.core_pinv.rank() == 3);
  }
  SUBCASE("zero input gives zero factors") {
    const CurFactors cur = phase2(DenseMatrix::zeros(n, n), SparseEstimate::zero(n, n, I, J), 3);
    CHECK(inf_norm(cur.c) == 0.0);
    CHECK(inf_norm(cur.r) == 0.0);
    CHECK(cur.core_pinv.rank() == 0);
    CHECK(inf_norm(cur.materialize()) == 0.0);
  }
  SUBCASE("rank at least the sample size keeps the core") {
    const DenseMatrix d = random_matrix(n, n, 11);
    const CurFactors cur = phase2(d, SparseEstimate::zero(n, n, I, J), I.size());
    CHECK(rel_diff(cur_eval_rows(cur, I), rows_of(d, I)) <= 1e-9);
    CHECK(rel_diff(cur_eval_cols(cur, J), cols_of(d, J)) <= 1e-9);
  }
  SUBCASE("rank bound") {
    const DenseMatrix d = random_matrix(n, n, 12);
    for (std::size_t r = 1; r <= 6; ++r) CHECK(phase2(d, SparseEstimate::zero(n, n, I, J), r).core_pinv.rank() <= r);
  }
  SUBCASE("sparse part is subtracted") {
    const DenseMatrix l = random_low_rank(n, n, 2, 13);
    DenseMatrix d = l;
    SparseEstimate s = SparseEstimate::zero(n, n, I, J);
    d(I[1], J[2]) += 50.0;
    s.row_block(1, J[2]) = 50.0;
    s.col_block(I[1], 2) = 50.0;
    CHECK(rel_diff(phase2(d, s, 2).materialize(), l) <= 1e-9);
  }
}

TEST_CASE("residual_error") {
  const std::size_t n = 12;
  const IndexSet I({0, 2, 5, 9}, n), J({1, 3, 6, 11}, n);
  const DenseMatrix d = random_matrix(n, n, 21);
  CHECK(residual_error(d, CurFactors::zero(n, n, I, J), SparseEstimate::zero(n, n, I, J)) == 1.0);

  const CurFactors cur = exact_cur(d, I, J, 2);
  const SparseEstimate all = phase1(d, cur, 0.0);
  CHECK(residual_error(d, cur, all) <= 1e-14);

  SparseEstimate s = SparseEstimate::zero(n, n, I, J);
  s.row_block(0, J[0]) = 0.25;
  s.col_block(I[0], 0) = 0.25;
  const double expected = dense_residual(d, cur.materialize(), s);
  CHECK(residual_error(d, cur, s) == doctest::Approx(expected).epsilon(1e-12));

  CHECK(residual_error(DenseMatrix::zeros(n, n), cur, s) == 0.0);
}

TEST_CASE("solve on clean low-rank input") {
  const DenseMatrix d = random_low_rank(50, 50, 3, 31);
  SolverConfig cfg = config_for(3, 4.0, SamplingMode::Fixed, 1);
  const SolveResult res = solve(d, cfg);
  CHECK(res.trace.converged);
  CHECK(res.trace.final_error() <= 1e-5);
  CHECK(rel_diff(res.cur.materialize(), d) <= 1e-5);
}

TEST_CASE("solve on a zero matrix returns immediately") {
  const SolveResult res = solve(DenseMatrix::zeros(30, 30), config_for(2, 4.0, SamplingMode::Fixed, 0));
  CHECK(res.trace.converged);
  CHECK(res.trace.iterations == 0);
  CHECK(res.trace.final_error() == 0.0);
  CHECK(inf_norm(res.cur.materialize()) == 0.0);
}

TEST_CASE("solve recovers a corrupted instance") {
  const ProblemInstance p = make_problem({.n = 300, .rank = 5, .alpha = 0.1, .seed = RngSeed{3, 0}});
  for (SamplingMode mode : {SamplingMode::Fixed, SamplingMode::Resampled}) {
    SolverConfig cfg = config_for(5, 4.0, mode, 8);
    cfg.zeta0 = 2.0 * inf_norm(p.l);
    const SolveResult res = solve(p.d, cfg);
    CHECK(res.trace.converged);
    CHECK(recovery_error(res.cur, p.l) <= 1e-3);
  }
}

TEST_CASE("solve input and config validation") {
  DenseMatrix d = random_matrix(10, 10, 1);
  SolverConfig cfg = config_for(2, 4.0, SamplingMode::Fixed, 0);
  CHECK_THROWS_AS(solve(DenseMatrix(), cfg), InputError);
  d(3, 4) = NAN;
  CHECK_THROWS_AS(solve(d, cfg), InputError);
  d(3, 4) = INFINITY;
  CHECK_THROWS_AS(solve(d, cfg), InputError);
  d(3, 4) = 0.0;

  auto bad = [&](auto mutate) {
    SolverConfig c = cfg;
    mutate(c);
    CHECK_THROWS_AS(solve(d, c), ParameterError);
  };
  bad([](SolverConfig& c) { c.rank = 0; });
  bad([](SolverConfig& c) { c.gamma = 1.0; });
  bad([](SolverConfig& c) { c.gamma = 0.0; });
  bad([](SolverConfig& c) { c.eps = 0.0; });
  bad([](SolverConfig& c) { c.c_rows = 0.0; });
  bad([](SolverConfig& c) { c.c_cols = -1.0; });
  bad([](SolverConfig& c) { c.max_iter = 0; });
  bad([](SolverConfig& c) { c.zeta0 = -1.0; });
  bad([](SolverConfig& c) { c.zeta0 = INFINITY; });
}

TEST_CASE("iteration cap is reported, not thrown") {
  const ProblemInstance p = make_problem({.n = 100, .rank = 3, .alpha = 0.2, .seed = RngSeed{1, 0}});
  SolverConfig cfg = config_for(3, 4.0, SamplingMode::Fixed, 0);
  cfg.max_iter = 2;
  const SolveResult res = solve(p.d, cfg);
  CHECK_FALSE(res.trace.converged);
  CHECK(res.trace.iterations == 2);
  CHECK(res.trace.errors.size() == 2);
}

TEST_CASE("solve is deterministic and records the threshold schedule") {
  const ProblemInstance p = make_problem({.n = 120, .rank = 3, .alpha = 0.1, .seed = RngSeed{4, 0}});
  for (SamplingMode mode : {SamplingMode::Fixed, SamplingMode::Resampled}) {
    SolverConfig cfg = config_for(3, 3.0, mode, 77);
    cfg.zeta0 = 2.0 * inf_norm(p.l);
    const SolveResult a = solve(p.d, cfg);
    const SolveResult b = solve(p.d, cfg);
    CHECK(a.trace.errors == b.trace.errors);
    CHECK(a.trace.thresholds == b.trace.thresholds);
    CHECK(same_bits(a.cur.c, b.cur.c));
    CHECK(same_bits(a.cur.r, b.cur.r));
    CHECK(a.cur.rows == b.cur.rows);
    for (std::size_t k = 1; k <= a.trace.iterations; ++k)
      CHECK(a.trace.thresholds[k - 1] == threshold_at(*cfg.zeta0, cfg.gamma, k - 1));
    if (a.trace.converged) CHECK(a.trace.final_error() <= cfg.eps);
  }
}

TEST_CASE("observer sees rank-bounded, consistent iterates") {
  const std::size_t n = 100;
  const ProblemInstance p = make_problem({.n = n, .rank = 3, .alpha = 0.1, .seed = RngSeed{6, 0}});
  for (SamplingMode mode : {SamplingMode::Fixed, SamplingMode::Resampled}) {
    SolverConfig cfg = config_for(3, 4.0, mode, 2);
    cfg.zeta0 = 2.0 * inf_norm(p.l);
    std::size_t calls = 0;
    DenseMatrix prev = DenseMatrix::zeros(n, n);
    std::size_t contained_checks = 0;
    const SolveResult res = solve(p.d, cfg, [&](std::size_t k, const CurFactors& cur, const SparseEstimate& s,
                                                 double zeta) {
      ++calls;
      CHECK(k == calls);
      CHECK(cur.core_pinv.rank() <= 3);
      CHECK(s.rows == cur.rows);
      for (std::size_t a = 0; a < s.rows.size(); ++a)
        for (std::size_t b = 0; b < s.cols.size(); ++b)
          CHECK(s.row_block(a, s.cols[b]) == s.col_block(s.rows[a], b));
      double gap = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gap = std::max(gap, std::abs(p.l(i, j) - prev(i, j)));
      if (zeta >= gap) {
        ++contained_checks;
        for (std::size_t a = 0; a < s.rows.size(); ++a)
          for (std::size_t j = 0; j < n; ++j)
            if (s.row_block(a, j) != 0.0) CHECK(p.s(s.rows[a], j) != 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t b = 0; b < s.cols.size(); ++b)
            if (s.col_block(i, b) != 0.0) CHECK(p.s(i, s.cols[b]) != 0.0);
      }
      prev = cur.materialize();
    });
    CHECK(calls == res.trace.iterations);
    CHECK(contained_checks >= 1);
  }
}

TEST_CASE("transient memory stays within the sampled footprint") {
  const std::size_t n = 1000;
  const SyntheticSpec spec{.n = n, .rank = 5, .alpha = 0.1, .seed = RngSeed{9, 0}};
  const Observation obs = make_observation(spec);
  SolverConfig cfg = config_for(5, 4.0, SamplingMode::Fixed, 3);
  cfg.zeta0 = 2.0 * obs.low_rank_inf_norm;
  std::size_t footprint = 0;
  const SolveResult res = solve(obs.d, cfg, [&](std::size_t, const CurFactors& cur, const SparseEstimate&, double) {
    footprint = std::max(footprint, cur.rows.size() + cur.cols.size());
  });
  CHECK(res.trace.converged);
  for (std::int64_t peak : res.trace.peak_transient)
    CHECK(peak <= static_cast<std::int64_t>(8 * footprint * n));
}
