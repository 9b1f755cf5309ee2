#include "sed/detector.hpp"

#include "sed/error.hpp"

namespace sed {

StreamingDetector::StreamingDetector(const TrainedModel& model,
                                     const FeatureLayout& layout,
                                     std::string interaction_id)
    : model_(model),
      layout_(layout),
      interaction_id_(std::move(interaction_id)),
      frame_ms_(model.window.frame_ms),
      width_(model.window.width_frames()),
      pending_(kStreamCount) {
  if (layout.hash() != model.layout_hash)
    throw ValidationError(
        "model was trained on a different feature layout");
  if (model.imputation.fill.size() != layout.pooled_dim() ||
      model.normalization.mean.size() != layout.pooled_dim())
    throw ValidationError(
        "model preprocessing does not match the feature layout");
}

void StreamingDetector::push(const StreamSample& sample) {
  if (sample.t_ms < 0) throw ValidationError("negative timestamp");
  if (sample.t_ms < last_t_)
    throw ValidationError("samples must arrive in timestamp order");
  last_t_ = sample.t_ms;
  if (sample.values.size() != layout_.dim(sample.stream))
    throw ValidationError("sample dimension mismatch for stream " +
                          std::string(stream_name(sample.stream)));

  // The arriving sample proves every earlier frame is complete.
  while (sample.t_ms >=
         static_cast<std::int64_t>(next_frame_ + 1) * frame_ms_)
    close_frame_();

  any_sample_ = true;
  last_sample_t_ = sample.t_ms;
  pending_[static_cast<std::size_t>(sample.stream)].push_back(sample.values);
}

void StreamingDetector::finish() {
  if (!any_sample_) return;
  const std::size_t total =
      frame_count_for(last_sample_t_, frame_ms_);
  while (next_frame_ < total) close_frame_();
}

void StreamingDetector::close_frame_() {
  // Pool each stream's buffered samples exactly like the batch aligner:
  // zeros and a missing mask, then the training-time fill and scaling.
  std::vector<double> frame(layout_.pooled_dim(), 0.0);
  std::vector<unsigned char> missing(layout_.pooled_dim(), 1);

  for (std::size_t s = 0; s < kStreamCount; ++s) {
    const StreamId id = static_cast<StreamId>(s);
    const std::size_t dim = layout_.dim(id);
    const std::size_t offset = layout_.pooled_offset(id);

    std::vector<const double*> bin;
    bin.reserve(pending_[s].size());
    for (const std::vector<double>& v : pending_[s]) bin.push_back(v.data());
    const PooledBlock block = pool_samples(bin, dim);
    for (std::size_t c = 0; c < dim; ++c) {
      if (block.present[c]) {
        frame[offset + c] = block.mean[c];
        frame[offset + dim + c] = block.var[c];
        missing[offset + c] = 0;
        missing[offset + dim + c] = 0;
      }
    }
    pending_[s].clear();
  }

  for (std::size_t c = 0; c < frame.size(); ++c)
    if (missing[c]) frame[c] = model_.imputation.fill[c];
  model_.normalization.apply(frame);

  window_.push_back(std::move(frame));
  if (window_.size() > width_) window_.pop_front();

  const std::size_t frame_index = next_frame_++;
  if (window_.size() == width_) {
    std::vector<double> flat;
    flat.reserve(width_ * layout_.pooled_dim());
    for (const std::vector<double>& f : window_)
      flat.insert(flat.end(), f.begin(), f.end());

    Decision d;
    d.interaction_id = interaction_id_;
    d.frame_index = frame_index;
    d.t_ms = static_cast<std::int64_t>(frame_index) * frame_ms_;
    d.labeled_t_ms = d.t_ms - model_.window.eta_ms;
    d.p_sed = model_.score_window(flat);
    d.label = d.p_sed > 0.5 ? 1 : 0;
    decisions_.push_back(std::move(d));
  }
}

std::vector<Decision> detect_stream(const TrainedModel& model,
                                    const FeatureLayout& layout,
                                    const std::string& interaction_id,
                                    const std::vector<StreamSample>& samples) {
  StreamingDetector det(model, layout, interaction_id);
  for (const StreamSample& s : samples) det.push(s);
  det.finish();
  return det.decisions();
}

}  // namespace sed
