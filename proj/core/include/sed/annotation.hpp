#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sed {

// One annotated disengagement episode. Cues, affects and cause are free-form
// vocabulary terms carried through from the annotation files.
struct Segment {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::vector<std::string> cues;
  std::vector<std::string> affects;
  std::string cause;  // empty when unattributed
};

// All episodes of one annotator for one interaction.
struct AnnotationTrack {
  std::string annotator;
  std::string interaction_id;
  std::vector<Segment> segments;
};

// Fuses episodes separated by strictly less than min_gap_ms of non-episode
// time into a single episode. One left-to-right pass with a carry segment;
// because merging can only extend the carry rightward, the pass reaches the
// fixpoint. Cue/affect terms are concatenated without duplicates, the first
// non-empty cause wins.
AnnotationTrack merge_short_gaps(const AnnotationTrack& track,
                                 std::int64_t min_gap_ms);

// Per-frame binary labels: frame k is positive iff its midpoint
// (k + 0.5) * frame_ms falls inside [start_ms, end_ms) of some episode.
std::vector<unsigned char> frame_labels(const AnnotationTrack& track,
                                        std::size_t frame_count,
                                        std::int64_t frame_ms);

// Two annotators reduced to a consensus: positive where both marked the
// frame, with a mask of frames where they assigned the same label.
struct ConsensusLabels {
  std::vector<unsigned char> sed;
  std::vector<unsigned char> agreed;
};

ConsensusLabels combine_labels(const std::vector<unsigned char>& a,
                               const std::vector<unsigned char>& b);

// Chance-corrected agreement between two binary label sequences. When
// expected agreement is 1 (both raters constant and identical) the value is
// 1 by convention.
double cohen_kappa(const std::vector<unsigned char>& a,
                   const std::vector<unsigned char>& b);

// Descriptive statistics over a set of tracks.
struct AnnotationStats {
  std::size_t segment_count = 0;
  double duration_mean_s = 0.0;
  double duration_sd_s = 0.0;  // population
  double sed_time_fraction = 0.0;
  std::map<std::string, std::size_t> cue_counts;
  std::map<std::string, std::size_t> affect_counts;
  std::map<std::string, std::size_t> cause_counts;
};

// total_time_ms is the summed interaction time the tracks cover; it anchors
// sed_time_fraction.
AnnotationStats annotation_stats(const std::vector<AnnotationTrack>& tracks,
                                 std::int64_t total_time_ms);

}  // namespace sed
