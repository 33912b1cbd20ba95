#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ircur/convert.hpp"
#include "ircur/errors.hpp"
#include "ircur/linalg.hpp"
#include "ircur/synth.hpp"
#include "video.hpp"

namespace ircur::cli {

namespace fs = std::filesystem;

namespace {

std::string with_ext(const std::string& stem, MatrixFormat f) {
  return stem + (f == MatrixFormat::Bin ? ".bin" : ".csv");
}

void write_indices(const fs::path& path, const IndexSet& set) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  for (std::size_t i : set) out << i << '\n';
}

void write_vector(const fs::path& path, const std::vector<double>& v, MatrixFormat f) {
  DenseMatrix m(v.size(), 1);
  std::copy(v.begin(), v.end(), m.col(0).begin());
  write_matrix(path, m, f);
}

void write_svd(const fs::path& dir, const SvdFactors& svd, MatrixFormat f) {
  write_matrix(dir / with_ext("W", f), svd.left, f);
  write_vector(dir / with_ext("sigma", f), svd.sigma, f);
  write_matrix(dir / with_ext("V", f), svd.right, f);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

// Runs `body`, mapping library errors to exit code 1.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace

SamplingMode parse_mode(const std::string& name) {
  if (name == "fixed") return SamplingMode::Fixed;
  if (name == "resampled") return SamplingMode::Resampled;
  throw ParameterError("unknown mode '" + name + "' (expected fixed or resampled)");
}

const char* mode_name(SamplingMode mode) {
  return mode == SamplingMode::Fixed ? "fixed" : "resampled";
}

SolverConfig SolverFlags::to_config() const {
  SolverConfig c;
  c.rank = rank;
  c.eps = eps;
  c.zeta0 = zeta0;
  c.gamma = gamma;
  c.c_rows = c_rows;
  c.c_cols = c_cols;
  c.mode = parse_mode(mode);
  c.max_iter = max_iter;
  c.seed = RngSeed{seed, 0};
  c.validate();
  return c;
}

RngSeed instance_seed(std::uint64_t base, std::size_t alpha_index, std::size_t trial) {
  return RngSeed{base, alpha_index}.child(trial);
}

RngSeed sampler_seed(std::uint64_t base, std::size_t cell_index, std::size_t trial) {
  return RngSeed{base ^ 0x5ca1ab1eULL, cell_index}.child(trial);
}

std::optional<int> threads_from_env() {
  const char* raw = std::getenv("IRCUR_THREADS");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0) return std::nullopt;
  return static_cast<int>(v);
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  out << "k,zeta,error,millis\n" << std::setprecision(17);
  for (std::size_t k = 0; k < trace.iterations; ++k)
    out << k + 1 << ',' << trace.thresholds[k] << ',' << trace.errors[k] << ','
        << trace.iteration_millis[k] << '\n';
}

void write_phase_transition_csv(std::ostream& out, const std::vector<PhaseTransitionRow>& rows) {
  out << "c,alpha,successes,trials\n" << std::setprecision(17);
  for (const auto& r : rows) out << r.c << ',' << r.alpha << ',' << r.successes << ',' << r.trials << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,iterations,total_seconds,seconds_per_iteration,final_error\n" << std::setprecision(17);
  for (const auto& r : rows)
    out << r.n << ',' << r.iterations << ',' << r.total_seconds << ',' << r.seconds_per_iteration
        << ',' << r.final_error << '\n';
}

std::vector<PhaseTransitionRow> phase_transition_grid(const PhaseTransitionOptions& opt) {
  if (opt.trials == 0) throw ParameterError("phase-transition: trials must be at least 1");
  if (opt.c_values.empty() || opt.alphas.empty())
    throw ParameterError("phase-transition: grids must be nonempty");
  const SamplingMode mode = parse_mode(opt.mode);

  // Cells in grid order: alpha-major, c-minor.
  const std::size_t n_c = opt.c_values.size();
  const std::size_t n_cells = opt.alphas.size() * n_c;
  const std::size_t jobs = n_cells * opt.trials;
  std::vector<unsigned char> ok(jobs, 0);
  std::string failure;

  auto run_job = [&](std::size_t job) {
    const std::size_t cell = job / opt.trials;
    const std::size_t trial = job % opt.trials;
    const std::size_t ai = cell / n_c;
    const std::size_t ci = cell % n_c;
    const ProblemInstance p =
        make_problem({opt.n, opt.rank, opt.alphas[ai], instance_seed(opt.seed, ai, trial), {}});
    SolverConfig cfg;
    cfg.rank = opt.rank;
    cfg.eps = opt.eps;
    cfg.gamma = opt.gamma;
    cfg.c_rows = cfg.c_cols = opt.c_values[ci];
    cfg.mode = mode;
    cfg.max_iter = opt.max_iter;
    cfg.zeta0 = opt.zeta0_scale * inf_norm(p.l);
    cfg.seed = sampler_seed(opt.seed, cell, trial);
    const SolveResult res = solve(p.d, cfg);
    ok[job] = success_check(res.cur, p.l) ? 1 : 0;
  };

  const int threads = opt.threads.value_or(-1);
  if (threads == 0) {
    for (std::size_t job = 0; job < jobs; ++job) run_job(job);
  } else {
#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::int64_t job = 0; job < static_cast<std::int64_t>(jobs); ++job) {
      try {
        run_job(static_cast<std::size_t>(job));
      } catch (const std::exception& e) {
#pragma omp critical
        failure = e.what();
      }
    }
#else
    for (std::size_t job = 0; job < jobs; ++job) run_job(job);
#endif
  }
  if (!failure.empty()) throw Error(failure);

  std::vector<PhaseTransitionRow> rows;
  rows.reserve(n_cells);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    PhaseTransitionRow row{opt.c_values[cell % n_c], opt.alphas[cell / n_c], 0, opt.trials};
    for (std::size_t t = 0; t < opt.trials; ++t) row.successes += ok[cell * opt.trials + t];
    rows.push_back(row);
  }
  return rows;
}

std::vector<BenchRow> bench_rows(const BenchOptions& opt) {
  if (opt.sizes.empty()) throw ParameterError("bench: size list must be nonempty");
  std::vector<BenchRow> rows;
  for (std::size_t n : opt.sizes) {
    Observation obs = make_observation({n, opt.rank, opt.alpha, RngSeed{opt.seed, n}, {}});
    SolverConfig cfg;
    cfg.rank = opt.rank;
    cfg.eps = opt.eps;
    cfg.gamma = opt.gamma;
    cfg.c_rows = cfg.c_cols = opt.c;
    cfg.mode = parse_mode(opt.mode);
    cfg.max_iter = opt.max_iter;
    cfg.zeta0 = opt.zeta0_scale * obs.low_rank_inf_norm;
    cfg.seed = RngSeed{opt.seed, n}.child(7);

    const auto start = std::chrono::steady_clock::now();
    const SolveResult res = solve(obs.d, cfg);
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({n, res.trace.iterations, total, median(res.trace.iteration_millis) / 1000.0,
                    res.trace.final_error()});
  }
  return rows;
}

int run_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SolverConfig cfg = opt.solver.to_config();
    const MatrixFormat fmt = parse_matrix_format(opt.format);
    const DenseMatrix d = read_matrix(opt.input, format_for_path(opt.input));
    const SolveResult res = solve(d, cfg);

    fs::create_directories(opt.out_dir);
    write_matrix(opt.out_dir / with_ext("C", fmt), res.cur.c, fmt);
    write_matrix(opt.out_dir / with_ext("core", fmt), res.cur.core_pinv.core(), fmt);
    write_matrix(opt.out_dir / with_ext("R", fmt), res.cur.r, fmt);
    write_indices(opt.out_dir / "rows.txt", res.cur.rows);
    write_indices(opt.out_dir / "cols.txt", res.cur.cols);
    if (opt.svd) write_svd(opt.out_dir, cur_to_svd(res.cur), fmt);
    {
      auto trace = open_out(opt.out_dir / "trace.csv");
      write_trace_csv(trace, res.trace);
    }

    out << "solve: " << d.rows() << "x" << d.cols() << " rank=" << cfg.rank
        << " mode=" << mode_name(cfg.mode) << " iterations=" << res.trace.iterations
        << " error=" << res.trace.final_error()
        << (res.trace.converged ? " converged" : " NOT converged") << '\n';
    return res.trace.converged ? kExitOk : kExitNotConverged;
  });
}

int run_cur2svd(const Cur2SvdOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MatrixFormat fmt = parse_matrix_format(opt.format);
    const DenseMatrix c = read_matrix(opt.c, format_for_path(opt.c));
    const DenseMatrix core = read_matrix(opt.core, format_for_path(opt.core));
    const DenseMatrix r = read_matrix(opt.r, format_for_path(opt.r));
    const SvdFactors svd = cur_to_svd(c, pinv_factor(core), r);
    fs::create_directories(opt.out_dir);
    write_svd(opt.out_dir, svd, fmt);
    out << "cur2svd: rank " << svd.rank() << ", sigma_max "
        << (svd.sigma.empty() ? 0.0 : svd.sigma.front()) << '\n';
    return kExitOk;
  });
}

int run_phase_transition(const PhaseTransitionOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    write_phase_transition_csv(out, phase_transition_grid(opt));
    return kExitOk;
  });
}

int run_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    write_bench_csv(out, bench_rows(opt));
    return kExitOk;
  });
}

int run_video(const VideoOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SolverConfig cfg = opt.solver.to_config();
    const FrameSequence seq = read_frame_dir(opt.frames_dir);
    out << "video: " << seq.width << "x" << seq.height << ", " << seq.frames.size()
        << " frames, r=" << cfg.rank << ", c_rows=" << cfg.c_rows << ", c_cols=" << cfg.c_cols
        << ", mode=" << mode_name(cfg.mode) << '\n';
    const VideoSeparation sep = separate_video(seq, cfg);
    write_frame_dir(opt.out_dir / "background", sep.background, "bg");
    write_frame_dir(opt.out_dir / "foreground", sep.foreground, "fg");
    {
      auto trace = open_out(opt.out_dir / "trace.csv");
      write_trace_csv(trace, sep.trace);
    }
    out << "video: iterations=" << sep.trace.iterations << " error=" << sep.trace.final_error()
        << (sep.trace.converged ? " converged" : " NOT converged") << '\n';
    return sep.trace.converged ? kExitOk : kExitNotConverged;
  });
}

int run_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const MatrixFormat fmt = parse_matrix_format(opt.format);
    const ProblemInstance p = make_problem({opt.n, opt.rank, opt.alpha, RngSeed{opt.seed, 0}, {}});
    fs::create_directories(opt.out_dir);
    write_matrix(opt.out_dir / with_ext("D", fmt), p.d, fmt);
    write_matrix(opt.out_dir / with_ext("L", fmt), p.l, fmt);
    write_matrix(opt.out_dir / with_ext("S", fmt), p.s, fmt);
    out << "synth: n=" << opt.n << " r=" << opt.rank << " alpha=" << opt.alpha
        << " linf(L)=" << std::setprecision(17) << inf_norm(p.l) << '\n';
    return kExitOk;
  });
}

int run_synth_video(const SynthVideoOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SyntheticVideo v =
        make_synthetic_video(opt.width, opt.height, opt.frames, RngSeed{opt.seed, 0});
    write_frame_dir(opt.out_dir / "frames", v.frames, "frame");
    write_pgm(opt.out_dir / "background.pgm", v.background);
    out << "synth-video: " << opt.width << "x" << opt.height << ", " << opt.frames << " frames\n";
    return kExitOk;
  });
}

}  // namespace ircur::cli
