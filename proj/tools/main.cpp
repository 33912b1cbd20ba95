#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace ircur::cli;

namespace {

constexpr const char* kFooter = R"(Outputs
  solve             C, core, R (+ W, sigma, V with --svd) as .bin/.csv, rows.txt,
                    cols.txt, and trace.csv in --out-dir
  trace.csv         k,zeta,error,millis          one row per iteration
  phase-transition  c,alpha,successes,trials     one row per cell, alpha-major
  bench             n,iterations,total_seconds,seconds_per_iteration,final_error
                    (seconds_per_iteration is the median single-iteration time)
  video             background/bg_NNNNN.pgm, foreground/fg_NNNNN.pgm, trace.csv

Exit codes: 0 converged / success, 1 error, 2 iteration cap reached.
IRCUR_THREADS caps phase-transition parallelism (0 = serial).)";

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--rank", f.rank, "Target rank r")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--eps", f.eps, "Stop when e_k <= eps")->capture_default_str();
  cmd->add_option("--zeta0", f.zeta0, "Initial threshold (default: max |D_ij|)");
  cmd->add_option("--gamma", f.gamma, "Threshold decay in (0, 1)")->capture_default_str();
  cmd->add_option("--c-rows", f.c_rows, "Row sampling constant")->capture_default_str();
  cmd->add_option("--c-cols", f.c_cols, "Column sampling constant")->capture_default_str();
  cmd->add_option_function<double>(
      "--c", [&f](double c) { f.c_rows = f.c_cols = c; }, "Set both sampling constants");
  cmd->add_option("--mode", f.mode, "Index policy")
      ->check(CLI::IsMember({"fixed", "resampled"}))
      ->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Sampling seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ircur: robust PCA by iterated robust CUR"};
  app.footer(kFooter);
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Decompose a matrix file into CUR low-rank factors");
  solve_cmd->add_option("input", solve.input, "Input matrix (.bin or .csv)")->required();
  solve_cmd->add_option("--out-dir", solve.out_dir, "Output directory")->capture_default_str();
  solve_cmd->add_option("--format", solve.format, "Output matrix format")
      ->check(CLI::IsMember({"csv", "bin"}))
      ->capture_default_str();
  solve_cmd->add_flag("--svd", solve.svd, "Also write the compact SVD of the low-rank part");
  add_solver_flags(solve_cmd, solve.solver);

  Cur2SvdOptions c2s;
  auto* c2s_cmd = app.add_subcommand("cur2svd", "Convert C, core, R files into a compact SVD");
  c2s_cmd->add_option("--c", c2s.c, "C matrix file")->required();
  c2s_cmd->add_option("--core", c2s.core, "Core matrix file")->required();
  c2s_cmd->add_option("--r", c2s.r, "R matrix file")->required();
  c2s_cmd->add_option("--out-dir", c2s.out_dir, "Output directory")->capture_default_str();
  c2s_cmd->add_option("--format", c2s.format, "Output matrix format")
      ->check(CLI::IsMember({"csv", "bin"}))
      ->capture_default_str();

  PhaseTransitionOptions pt;
  pt.threads = threads_from_env();
  auto* pt_cmd = app.add_subcommand("phase-transition",
                                    "Success counts over a (sampling constant, corruption) grid");
  pt_cmd->add_option("--n", pt.n, "Matrix dimension")->capture_default_str();
  pt_cmd->add_option("--rank", pt.rank, "Rank")->capture_default_str();
  pt_cmd->add_option("--c-values", pt.c_values, "Sampling constants")->delimiter(',')->capture_default_str();
  pt_cmd->add_option("--alphas", pt.alphas, "Corruption rates")->delimiter(',')->capture_default_str();
  pt_cmd->add_option("--trials", pt.trials, "Trials per cell")->capture_default_str();
  pt_cmd->add_option("--mode", pt.mode, "Index policy")
      ->check(CLI::IsMember({"fixed", "resampled"}))
      ->capture_default_str();
  pt_cmd->add_option("--gamma", pt.gamma, "Threshold decay")->capture_default_str();
  pt_cmd->add_option("--eps", pt.eps, "Stopping tolerance")->capture_default_str();
  pt_cmd->add_option("--zeta0-scale", pt.zeta0_scale, "zeta0 = scale * max|L_ij|")->capture_default_str();
  pt_cmd->add_option("--max-iter", pt.max_iter, "Iteration cap")->capture_default_str();
  pt_cmd->add_option("--seed", pt.seed, "Base seed")->capture_default_str();
  auto* full_scale = pt_cmd->add_flag("--full-scale", "Use n = 1000");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Solver wall time across dimensions");
  bench_cmd->add_option("--sizes", bench.sizes, "Dimensions n")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--rank", bench.rank, "Rank")->capture_default_str();
  bench_cmd->add_option("--alpha", bench.alpha, "Corruption rate")->capture_default_str();
  bench_cmd->add_option("--c", bench.c, "Sampling constant (rows and columns)")->capture_default_str();
  bench_cmd->add_option("--mode", bench.mode, "Index policy")
      ->check(CLI::IsMember({"fixed", "resampled"}))
      ->capture_default_str();
  bench_cmd->add_option("--gamma", bench.gamma, "Threshold decay")->capture_default_str();
  bench_cmd->add_option("--eps", bench.eps, "Stopping tolerance")->capture_default_str();
  bench_cmd->add_option("--max-iter", bench.max_iter, "Iteration cap")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed")->capture_default_str();

  VideoOptions video;
  auto* video_cmd = app.add_subcommand("video", "Background/foreground separation of PGM frames");
  video_cmd->add_option("frames", video.frames_dir, "Directory of .pgm frames")->required();
  video_cmd->add_option("--out-dir", video.out_dir, "Output directory")->capture_default_str();
  add_solver_flags(video_cmd, video.solver);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic D = L + S instance");
  synth_cmd->add_option("--n", synth.n, "Dimension")->capture_default_str();
  synth_cmd->add_option("--rank", synth.rank, "Rank")->capture_default_str();
  synth_cmd->add_option("--alpha", synth.alpha, "Corruption rate")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->capture_default_str();
  synth_cmd->add_option("--format", synth.format, "Matrix format")
      ->check(CLI::IsMember({"csv", "bin"}))
      ->capture_default_str();

  SynthVideoOptions sv;
  auto* sv_cmd = app.add_subcommand("synth-video", "Write a moving-blob test sequence");
  sv_cmd->add_option("--width", sv.width, "Frame width")->capture_default_str();
  sv_cmd->add_option("--height", sv.height, "Frame height")->capture_default_str();
  sv_cmd->add_option("--frames", sv.frames, "Frame count")->capture_default_str();
  sv_cmd->add_option("--seed", sv.seed, "Seed")->capture_default_str();
  sv_cmd->add_option("--out-dir", sv.out_dir, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*solve_cmd) return run_solve(solve, std::cout, std::cerr);
  if (*c2s_cmd) return run_cur2svd(c2s, std::cout, std::cerr);
  if (*pt_cmd) {
    if (*full_scale) pt.n = 1000;
    return run_phase_transition(pt, std::cout, std::cerr);
  }
  if (*bench_cmd) return run_bench(bench, std::cout, std::cerr);
  if (*video_cmd) return run_video(video, std::cout, std::cerr);
  if (*synth_cmd) return run_synth(synth, std::cout, std::cerr);
  if (*sv_cmd) return run_synth_video(sv, std::cout, std::cerr);
  return kExitError;
}
