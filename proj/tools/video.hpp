#pragma once

#include "ircur/mio.hpp"
#include "ircur/solver.hpp"

namespace ircur::cli {

struct VideoSeparation {
  /// Low-rank part, rounded and clamped to [0, 255].
  FrameSequence background;
  /// |D − L| rescaled per frame so its largest value maps to 255.
  FrameSequence foreground;
  SolverTrace trace;
};

/// Solves on the stacked frames and renders both components. L is
/// evaluated a batch of columns at a time, never as a whole.
VideoSeparation separate_video(const FrameSequence& seq, const SolverConfig& config);

}  // namespace ircur::cli
