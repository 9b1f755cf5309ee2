#include "sed/windowing.hpp"

#include <algorithm>
#include <cstring>

#include "sed/error.hpp"

namespace sed {

void WindowConfig::validate() const {
  if (frame_ms <= 0) throw ConfigError("frame period must be positive");
  if (tau_ms < 0 || eta_ms < 0)
    throw ConfigError("window spans must be non-negative");
  if (tau_ms % frame_ms != 0)
    throw ConfigError("observation span must be a multiple of the frame period");
  if (eta_ms % frame_ms != 0)
    throw ConfigError("label lag must be a multiple of the frame period");
  if (tau_ms < eta_ms)
    throw ConfigError("label lag cannot exceed the observation span");
}

std::size_t WindowConfig::width_frames() const {
  validate();
  return static_cast<std::size_t>(tau_ms / frame_ms) + 1;
}

std::size_t WindowConfig::lag_frames() const {
  validate();
  return static_cast<std::size_t>(eta_ms / frame_ms);
}

std::vector<WindowSpan> enumerate_windows(std::size_t frame_count,
                                          const WindowConfig& cfg) {
  const std::size_t width = cfg.width_frames();
  const std::size_t lag = cfg.lag_frames();

  std::vector<WindowSpan> spans;
  if (frame_count < width) return spans;
  spans.reserve(frame_count - width + 1);
  for (std::size_t end = width - 1; end < frame_count; ++end) {
    WindowSpan s;
    s.end_frame = end;
    s.first_frame = end - (width - 1);
    s.label_frame = end - lag;
    spans.push_back(s);
  }
  return spans;
}

std::vector<LabeledWindow> build_windows(const FrameSequence& seq,
                                         const ConsensusLabels& labels,
                                         const WindowConfig& cfg) {
  if (labels.sed.size() != seq.frames.rows ||
      labels.agreed.size() != seq.frames.rows)
    throw ValidationError("label sequence length does not match frame count");
  if (seq.frame_ms != cfg.frame_ms)
    throw ConfigError("window frame period differs from sequence frame period");

  const std::size_t dim = seq.frames.cols;
  const std::vector<WindowSpan> spans = enumerate_windows(seq.frames.rows, cfg);

  std::vector<LabeledWindow> out;
  out.reserve(spans.size());
  for (const WindowSpan& s : spans) {
    LabeledWindow w;
    w.interaction_id = seq.interaction_id;
    w.end_frame = s.end_frame;
    w.label = labels.sed[s.label_frame];
    w.agreed = labels.agreed[s.label_frame];
    const std::size_t width = s.end_frame - s.first_frame + 1;
    w.block = RowMatrix(width, dim);
    std::memcpy(w.block.data.data(), seq.frames.row(s.first_frame),
                width * dim * sizeof(double));
    out.push_back(std::move(w));
  }
  return out;
}

FoldPlan make_folds(std::vector<std::string> interaction_ids, std::size_t k,
                    std::uint64_t seed) {
  if (k == 0) throw ConfigError("fold count must be positive");
  if (interaction_ids.size() < k)
    throw ValidationError("fewer interactions than folds");

  Rng rng(Rng::derive(seed, 0x666f6c64));  // "fold"
  rng.shuffle(interaction_ids);

  FoldPlan plan;
  plan.folds.resize(k);
  for (std::size_t i = 0; i < interaction_ids.size(); ++i)
    plan.folds[i % k].push_back(interaction_ids[i]);
  return plan;
}

std::vector<double> class_weights(const std::vector<unsigned char>& labels) {
  double n1 = 0.0;
  for (unsigned char l : labels)
    if (l) n1 += 1.0;
  const double n = static_cast<double>(labels.size());
  const double n0 = n - n1;
  if (n0 == 0.0 || n1 == 0.0)
    throw ValidationError("class weights need both classes present");
  return {n / (2.0 * n0), n / (2.0 * n1)};
}

}  // namespace sed
