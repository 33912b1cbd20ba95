#include "video.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ircur::cli {

namespace {
constexpr std::size_t kFrameBatch = 32;
}

VideoSeparation separate_video(const FrameSequence& seq, const SolverConfig& config) {
  const DenseMatrix d = frames_to_matrix(seq);
  SolveResult res = solve(d, config);

  VideoSeparation out;
  out.background = {seq.width, seq.height, {}};
  out.foreground = {seq.width, seq.height, {}};
  for (std::size_t first = 0; first < d.cols(); first += kFrameBatch) {
    const std::size_t count = std::min(kFrameBatch, d.cols() - first);
    std::vector<std::size_t> ids(count);
    std::iota(ids.begin(), ids.end(), first);
    const IndexSet batch(std::move(ids), d.cols());

    DenseMatrix low = cur_eval_cols(res.cur, batch);
    DenseMatrix fg(low.rows(), low.cols());
    for (std::size_t b = 0; b < count; ++b) {
      const auto dcol = d.col(first + b);
      const auto lcol = low.col(b);
      auto fcol = fg.col(b);
      double peak = 0.0;
      for (std::size_t i = 0; i < dcol.size(); ++i) {
        fcol[i] = std::abs(dcol[i] - lcol[i]);
        peak = std::max(peak, fcol[i]);
      }
      const double scale = peak > 0.0 ? 255.0 / peak : 0.0;
      for (double& v : fcol) v *= scale;
    }
    for (auto& f : matrix_to_frames(low, seq.width, seq.height).frames)
      out.background.frames.push_back(std::move(f));
    for (auto& f : matrix_to_frames(fg, seq.width, seq.height).frames)
      out.foreground.frames.push_back(std::move(f));
  }
  out.trace = std::move(res.trace);
  return out;
}

}  // namespace ircur::cli
