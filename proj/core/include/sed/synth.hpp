#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sed/annotation.hpp"
#include "sed/stream.hpp"

namespace sed {

// Knobs of the synthetic interaction generator. Durations are in seconds,
// rates in Hz. Episode lengths are gamma-distributed; the last episode of an
// interaction draws from a longer-tailed distribution and may run to the end
// of the interaction.
struct GeneratorConfig {
  std::size_t interactions = 20;

  double duration_mean_s = 180.0;
  double duration_sd_s = 90.0;
  double duration_min_s = 60.0;

  double episode_rate_mean = 6.0;  // expected episodes at the reference length
  double episode_rate_reference_s = 420.0;
  double episode_duration_mean_s = 6.0;
  double episode_duration_sd_s = 9.0;
  double final_episode_duration_mean_s = 9.0;
  double final_episode_duration_sd_s = 15.0;
  double episode_min_duration_s = 1.5;
  double episode_time_cap = 0.35;  // max fraction of the interaction
  double min_gap_s = 2.2;          // shortest engaged stretch between episodes
  double run_to_end_prob = 0.4;    // last episode extends to the end
  double onset_ramp_s = 2.0;       // behavior drifts into the episode pattern

  double multiparty_fraction = 0.4;

  // Annotator simulation.
  double annotator_jitter_sd_ms = 250.0;
  double annotator_jitter_max_ms = 600.0;
  double flicker_prob = 0.3;       // chance of a sub-second hole per episode
  double flicker_margin_s = 0.7;   // holes keep this distance from the edges

  // Sampling rates per stream.
  double rate_distance_hz = 5.0;
  double rate_gaze_hz = 10.0;
  double rate_head_hz = 10.0;
  double rate_face_hz = 10.0;
  double rate_speech_hz = 100.0;

  // Missing data: per-sample loss plus tracker dropout bursts.
  double miss_distance = 0.02;
  double miss_gaze = 0.08;
  double miss_head = 0.08;
  double miss_face = 0.10;
  double miss_speech = 0.01;
  double burst_rate_per_min = 2.0;
  double burst_mean_s = 1.5;

  void validate() const;
};

// One generated interaction: raw streams, exact episode boundaries, and two
// noisy annotator tracks derived from them.
struct SyntheticInteraction {
  std::string id;
  std::int64_t duration_ms = 0;
  bool multiparty = false;
  std::vector<StreamSeries> streams;
  std::vector<Segment> truth;
  AnnotationTrack annotator_a;
  AnnotationTrack annotator_b;
};

// Deterministic: interaction i derives its own generator state from
// (seed, i), so corpora are reproducible and order-independent.
SyntheticInteraction generate_interaction(const GeneratorConfig& cfg,
                                          const std::string& id,
                                          std::uint64_t seed,
                                          std::uint64_t index);

std::vector<SyntheticInteraction> generate_corpus(const GeneratorConfig& cfg,
                                                  std::uint64_t seed);

// JSON round-trip for generator settings (schema sed.genconfig.v1).
GeneratorConfig load_generator_config(const std::string& path);
void save_generator_config(const GeneratorConfig& cfg,
                           const std::string& path);

}  // namespace sed
