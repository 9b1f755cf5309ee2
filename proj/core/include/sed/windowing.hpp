#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sed/annotation.hpp"
#include "sed/matrix.hpp"
#include "sed/rng.hpp"
#include "sed/stream.hpp"

namespace sed {

// Observation-window geometry. A window observes tau_ms of history ending at
// the decision frame and predicts the label eta_ms back from that frame, so
// the detector can be trained to recognize an episode eta_ms before its
// label time. Both spans must be non-negative multiples of the frame period
// and tau_ms >= eta_ms keeps the label frame inside the window.
struct WindowConfig {
  std::int64_t tau_ms = 5000;
  std::int64_t eta_ms = 0;
  std::int64_t frame_ms = 500;

  void validate() const;

  // Frames per window: tau_ms/frame_ms + 1 (both endpoints included).
  std::size_t width_frames() const;
  // Frames between the decision frame and the label frame.
  std::size_t lag_frames() const;
};

// Frame indices of one window: [first_frame, end_frame] inclusive, label read
// at label_frame = end_frame - lag.
struct WindowSpan {
  std::size_t first_frame = 0;
  std::size_t end_frame = 0;
  std::size_t label_frame = 0;
};

// All admissible windows for an interaction with frame_count frames. End
// frames run from width-1 to frame_count-1, so there are
// max(0, frame_count - tau_ms/frame_ms) of them.
std::vector<WindowSpan> enumerate_windows(std::size_t frame_count,
                                          const WindowConfig& cfg);

// A copied window block ready for model consumption.
struct LabeledWindow {
  std::string interaction_id;
  std::size_t end_frame = 0;
  RowMatrix block;  // width_frames x feature_dim
  unsigned char label = 0;
  unsigned char agreed = 1;
};

// Cuts every admissible window out of a preprocessed frame sequence, reading
// label and agreement at the lagged label frame.
std::vector<LabeledWindow> build_windows(const FrameSequence& seq,
                                         const ConsensusLabels& labels,
                                         const WindowConfig& cfg);

// Interaction-level cross-validation plan: ids shuffled once, then dealt
// round-robin so fold sizes differ by at most one.
struct FoldPlan {
  std::vector<std::vector<std::string>> folds;
};

FoldPlan make_folds(std::vector<std::string> interaction_ids, std::size_t k,
                    std::uint64_t seed);

// Inverse-frequency class weights w_c = N / (2 * N_c) over binary labels.
// Weighted class masses then match: w_0*N_0 == w_1*N_1 == N/2.
std::vector<double> class_weights(const std::vector<unsigned char>& labels);

}  // namespace sed
