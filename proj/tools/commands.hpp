#pragma once

// Subcommand implementations behind the ircur executable. Each run_* returns
// the process exit code and writes human-readable diagnostics to `err`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ircur/mio.hpp"
#include "ircur/solver.hpp"

namespace ircur::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Solver flags shared by solve, bench and video.
struct SolverFlags {
  std::size_t rank = 5;
  double eps = 1e-5;
  std::optional<double> zeta0;
  double gamma = 0.65;
  double c_rows = 4.0;
  double c_cols = 4.0;
  std::string mode = "fixed";
  std::size_t max_iter = 200;
  std::uint64_t seed = 0;

  /// Throws ParameterError for an unknown mode.
  SolverConfig to_config() const;
};

SamplingMode parse_mode(const std::string& name);
const char* mode_name(SamplingMode mode);

struct SolveOptions {
  std::filesystem::path input;
  std::filesystem::path out_dir = ".";
  std::string format = "bin";
  bool svd = false;
  SolverFlags solver;
};

struct Cur2SvdOptions {
  std::filesystem::path c;
  std::filesystem::path core;
  std::filesystem::path r;
  std::filesystem::path out_dir = ".";
  std::string format = "bin";
};

struct PhaseTransitionOptions {
  std::size_t n = 300;
  std::size_t rank = 5;
  std::vector<double> c_values{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> alphas{0.0, 0.1, 0.2, 0.3};
  std::size_t trials = 50;
  std::string mode = "fixed";
  double gamma = 0.65;
  double eps = 1e-5;
  /// ζ0 = zeta0_scale · ‖L‖∞ of each generated instance.
  double zeta0_scale = 2.0;
  std::size_t max_iter = 200;
  std::uint64_t seed = 0;
  /// 0 = serial; unset = OpenMP default.
  std::optional<int> threads;
};

struct PhaseTransitionRow {
  double c = 0.0;
  double alpha = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
};

struct BenchOptions {
  std::vector<std::size_t> sizes{1000, 2000, 4000, 8000};
  std::size_t rank = 5;
  double alpha = 0.1;
  double c = 4.0;
  std::string mode = "fixed";
  double gamma = 0.65;
  double eps = 1e-5;
  double zeta0_scale = 2.0;
  std::size_t max_iter = 200;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t iterations = 0;
  double total_seconds = 0.0;
  /// Median wall time of a single iteration.
  double seconds_per_iteration = 0.0;
  double final_error = 0.0;
};

struct VideoOptions {
  std::filesystem::path frames_dir;
  std::filesystem::path out_dir = ".";
  // Fixed indices can lock a hole left by the first threshold into the spare
  // rank when the background is simpler than r; redrawing clears it.
  SolverFlags solver{.rank = 2, .mode = "resampled"};
};

struct SynthOptions {
  std::size_t n = 300;
  std::size_t rank = 5;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  std::string format = "bin";
};

struct SynthVideoOptions {
  std::size_t width = 160;
  std::size_t height = 120;
  std::size_t frames = 200;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
};

/// Seeds of one phase-transition trial. The instance depends on the α
/// index only, so every c column sees the same problems; the sampler depends
/// on the full cell.
RngSeed instance_seed(std::uint64_t base, std::size_t alpha_index, std::size_t trial);
RngSeed sampler_seed(std::uint64_t base, std::size_t cell_index, std::size_t trial);

/// Reads IRCUR_THREADS; nullopt when unset or unparsable.
std::optional<int> threads_from_env();

std::vector<PhaseTransitionRow> phase_transition_grid(const PhaseTransitionOptions& opt);
std::vector<BenchRow> bench_rows(const BenchOptions& opt);

void write_trace_csv(std::ostream& out, const SolverTrace& trace);
void write_phase_transition_csv(std::ostream& out, const std::vector<PhaseTransitionRow>& rows);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

int run_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);
int run_cur2svd(const Cur2SvdOptions& opt, std::ostream& out, std::ostream& err);
int run_phase_transition(const PhaseTransitionOptions& opt, std::ostream& out, std::ostream& err);
int run_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);
int run_video(const VideoOptions& opt, std::ostream& out, std::ostream& err);
int run_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);
int run_synth_video(const SynthVideoOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace ircur::cli
