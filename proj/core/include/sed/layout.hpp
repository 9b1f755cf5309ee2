#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sed {

// Source streams in canonical order. This order fixes both the raw feature
// vector layout and the pooled feature vector layout.
enum class StreamId { kDistance = 0, kGaze, kHead, kFace, kSpeech };

constexpr std::size_t kStreamCount = 5;

const char* stream_name(StreamId id);
StreamId stream_from_name(const std::string& name);

// Describes which named features each stream carries and how per-window
// pooled vectors are laid out: for every stream, the per-feature means come
// first, then the per-feature variances, streams concatenated in order.
class FeatureLayout {
public:
  // Sensor set used by the shipped pipeline (48 raw, 96 pooled features).
  static FeatureLayout standard();

  // Alternate face tracker emitting 5 expression scores instead of action
  // units (36 raw, 72 pooled). Same layout rules, used with data captured by
  // the older tracker.
  static FeatureLayout okao();

  const std::vector<std::string>& features(StreamId id) const {
    return features_[static_cast<std::size_t>(id)];
  }
  std::size_t dim(StreamId id) const {
    return features_[static_cast<std::size_t>(id)].size();
  }

  // Raw (per-sample) vector size: sum of stream dims.
  std::size_t raw_dim() const;
  // Pooled (per-window) vector size: 2 * raw_dim().
  std::size_t pooled_dim() const { return 2 * raw_dim(); }

  // Offset of a stream's block inside a raw vector.
  std::size_t raw_offset(StreamId id) const;
  // Offset of a stream's (mean, var) block inside a pooled vector.
  std::size_t pooled_offset(StreamId id) const;

  std::size_t mean_index(StreamId id, std::size_t feature) const;
  std::size_t var_index(StreamId id, std::size_t feature) const;

  // "<stream>.<feature>.mean" / "<stream>.<feature>.var".
  std::string pooled_name(std::size_t pooled_index) const;

  // FNV-1a over the canonical layout description. Stored in model files so a
  // model is never applied to data with a different layout.
  std::uint64_t hash() const;

private:
  std::array<std::vector<std::string>, kStreamCount> features_;
};

}  // namespace sed
