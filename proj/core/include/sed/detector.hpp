#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "sed/layout.hpp"
#include "sed/models/model_io.hpp"
#include "sed/stream.hpp"

namespace sed {

// One online classification. t_ms is the start boundary of the decision
// frame (frame_index * frame_ms); labeled_t_ms = t_ms - eta_ms points at the
// moment the prediction is about.
struct Decision {
  std::string interaction_id;
  std::size_t frame_index = 0;
  std::int64_t t_ms = 0;
  std::int64_t labeled_t_ms = 0;
  unsigned char label = 0;  // p_sed > 0.5
  double p_sed = 0.0;
};

// Incremental frame pooling plus windowed scoring over a single time-ordered
// sample feed. A frame closes as soon as a sample at or past its upper
// boundary arrives (the feed is ordered, so nothing can land in it anymore),
// or at finish(). Closed frames run through the exact pooling, imputation
// and normalization routines the batch pipeline uses, so for identical input
// the emitted probabilities are bit-identical to batch scores.
class StreamingDetector {
public:
  StreamingDetector(const TrainedModel& model, const FeatureLayout& layout,
                    std::string interaction_id);

  // Samples must arrive with non-decreasing timestamps.
  void push(const StreamSample& sample);

  // Closes the frame containing the last sample. Call once at end of feed.
  void finish();

  const std::vector<Decision>& decisions() const { return decisions_; }
  std::size_t frames_closed() const { return next_frame_; }

private:
  void close_frame_();

  const TrainedModel& model_;
  const FeatureLayout& layout_;
  std::string interaction_id_;
  std::int64_t frame_ms_;
  std::size_t width_;

  std::size_t next_frame_ = 0;  // index of the frame currently filling
  std::int64_t last_t_ = -1;
  bool any_sample_ = false;
  std::int64_t last_sample_t_ = 0;

  // Sample vectors buffered for the filling frame, one list per stream.
  std::vector<std::vector<std::vector<double>>> pending_;
  std::deque<std::vector<double>> window_;  // last `width_` processed frames
  std::vector<Decision> decisions_;
};

// Feeds every sample in order, finishes, and returns the decisions.
std::vector<Decision> detect_stream(const TrainedModel& model,
                                    const FeatureLayout& layout,
                                    const std::string& interaction_id,
                                    const std::vector<StreamSample>& samples);

}  // namespace sed
