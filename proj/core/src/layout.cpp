#include "sed/layout.hpp"

#include "sed/error.hpp"

namespace sed {

const char* stream_name(StreamId id) {
  switch (id) {
    case StreamId::kDistance: return "distance";
    case StreamId::kGaze: return "gaze";
    case StreamId::kHead: return "head";
    case StreamId::kFace: return "face";
    case StreamId::kSpeech: return "speech";
  }
  throw ConfigError("unknown stream id");
}

StreamId stream_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kStreamCount; ++i) {
    const StreamId id = static_cast<StreamId>(i);
    if (name == stream_name(id)) return id;
  }
  throw ValidationError("unknown stream name: " + name);
}

namespace {

std::vector<std::string> distance_features() {
  return {"front_sonar", "face_distance", "head_x",
          "head_y",      "head_z",        "engagement_zone"};
}

std::vector<std::string> gaze_features() {
  return {"yaw", "pitch", "is_looking"};
}

std::vector<std::string> head_features() { return {"yaw", "pitch", "roll"}; }

std::vector<std::string> face_au_features() {
  return {"au01", "au02", "au04", "au05", "au06", "au07", "au09", "au10",
          "au12", "au14", "au15", "au17", "au20", "au23", "au25", "au26",
          "au45"};
}

std::vector<std::string> face_expression_features() {
  return {"expression_neutral", "expression_happiness", "expression_surprise",
          "expression_anger", "expression_sadness"};
}

std::vector<std::string> speech_features() {
  std::vector<std::string> f = {"voicing", "f0", "loudness", "log_energy"};
  for (int i = 1; i <= 12; ++i) f.push_back("mfcc" + std::to_string(i));
  f.push_back("is_robot_speaking");
  f.push_back("robot_speech_dur");
  f.push_back("user_speech_dur");
  return f;
}

}  // namespace

FeatureLayout FeatureLayout::standard() {
  FeatureLayout l;
  l.features_[0] = distance_features();
  l.features_[1] = gaze_features();
  l.features_[2] = head_features();
  l.features_[3] = face_au_features();
  l.features_[4] = speech_features();
  return l;
}

FeatureLayout FeatureLayout::okao() {
  FeatureLayout l = standard();
  l.features_[static_cast<std::size_t>(StreamId::kFace)] =
      face_expression_features();
  return l;
}

std::size_t FeatureLayout::raw_dim() const {
  std::size_t n = 0;
  for (const auto& f : features_) n += f.size();
  return n;
}

std::size_t FeatureLayout::raw_offset(StreamId id) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(id); ++i)
    off += features_[i].size();
  return off;
}

std::size_t FeatureLayout::pooled_offset(StreamId id) const {
  return 2 * raw_offset(id);
}

std::size_t FeatureLayout::mean_index(StreamId id, std::size_t feature) const {
  if (feature >= dim(id)) throw ConfigError("feature index out of range");
  return pooled_offset(id) + feature;
}

std::size_t FeatureLayout::var_index(StreamId id, std::size_t feature) const {
  if (feature >= dim(id)) throw ConfigError("feature index out of range");
  return pooled_offset(id) + dim(id) + feature;
}

std::string FeatureLayout::pooled_name(std::size_t pooled_index) const {
  for (std::size_t i = 0; i < kStreamCount; ++i) {
    const StreamId id = static_cast<StreamId>(i);
    const std::size_t off = pooled_offset(id);
    const std::size_t d = dim(id);
    if (pooled_index >= off && pooled_index < off + 2 * d) {
      const std::size_t rel = pooled_index - off;
      const bool is_var = rel >= d;
      const std::size_t feat = is_var ? rel - d : rel;
      return std::string(stream_name(id)) + "." + features_[i][feat] +
             (is_var ? ".var" : ".mean");
    }
  }
  throw ConfigError("pooled index out of range");
}

std::uint64_t FeatureLayout::hash() const {
  // FNV-1a 64 over "<stream>:<f0>,<f1>,...;" per stream in order.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t i = 0; i < kStreamCount; ++i) {
    mix(stream_name(static_cast<StreamId>(i)));
    mix(":");
    for (std::size_t j = 0; j < features_[i].size(); ++j) {
      if (j) mix(",");
      mix(features_[i][j]);
    }
    mix(";");
  }
  return h;
}

}  // namespace sed
