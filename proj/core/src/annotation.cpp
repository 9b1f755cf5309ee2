#include "sed/annotation.hpp"

#include <algorithm>
#include <cmath>

#include "sed/error.hpp"

namespace sed {

namespace {

void append_unique(std::vector<std::string>& dst,
                   const std::vector<std::string>& src) {
  for (const std::string& s : src) {
    if (std::find(dst.begin(), dst.end(), s) == dst.end()) dst.push_back(s);
  }
}

void validate_segment(const Segment& s) {
  if (s.end_ms <= s.start_ms)
    throw ValidationError("segment must have positive duration");
  if (s.start_ms < 0) throw ValidationError("segment starts before time 0");
}

}  // namespace

AnnotationTrack merge_short_gaps(const AnnotationTrack& track,
                                 std::int64_t min_gap_ms) {
  AnnotationTrack out;
  out.annotator = track.annotator;
  out.interaction_id = track.interaction_id;
  if (track.segments.empty()) return out;

  std::vector<Segment> sorted = track.segments;
  for (const Segment& s : sorted) validate_segment(s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Segment& a, const Segment& b) {
                     return a.start_ms < b.start_ms;
                   });

  Segment carry = sorted.front();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const Segment& next = sorted[i];
    if (next.start_ms - carry.end_ms < min_gap_ms) {
      carry.end_ms = std::max(carry.end_ms, next.end_ms);
      append_unique(carry.cues, next.cues);
      append_unique(carry.affects, next.affects);
      if (carry.cause.empty()) carry.cause = next.cause;
    } else {
      out.segments.push_back(carry);
      carry = next;
    }
  }
  out.segments.push_back(carry);
  return out;
}

std::vector<unsigned char> frame_labels(const AnnotationTrack& track,
                                        std::size_t frame_count,
                                        std::int64_t frame_ms) {
  if (frame_ms <= 0) throw ConfigError("frame period must be positive");
  std::vector<unsigned char> labels(frame_count, 0);
  for (const Segment& s : track.segments) {
    validate_segment(s);
    for (std::size_t k = 0; k < frame_count; ++k) {
      // Midpoint in milliseconds is k*frame_ms + frame_ms/2; compare doubled
      // to stay in integers when frame_ms is odd.
      const std::int64_t mid2 =
          2 * static_cast<std::int64_t>(k) * frame_ms + frame_ms;
      if (mid2 >= 2 * s.start_ms && mid2 < 2 * s.end_ms) labels[k] = 1;
    }
  }
  return labels;
}

ConsensusLabels combine_labels(const std::vector<unsigned char>& a,
                               const std::vector<unsigned char>& b) {
  if (a.size() != b.size())
    throw ValidationError("label sequences differ in length");
  ConsensusLabels out;
  out.sed.resize(a.size());
  out.agreed.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.sed[i] = (a[i] && b[i]) ? 1 : 0;
    out.agreed[i] = (a[i] == b[i]) ? 1 : 0;
  }
  return out;
}

double cohen_kappa(const std::vector<unsigned char>& a,
                   const std::vector<unsigned char>& b) {
  if (a.size() != b.size())
    throw ValidationError("label sequences differ in length");
  if (a.empty()) throw ValidationError("kappa of empty sequences");

  const double n = static_cast<double>(a.size());
  double agree = 0.0, a1 = 0.0, b1 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] != 0) == (b[i] != 0)) agree += 1.0;
    if (a[i]) a1 += 1.0;
    if (b[i]) b1 += 1.0;
  }
  const double po = agree / n;
  const double pa1 = a1 / n, pb1 = b1 / n;
  const double pe = pa1 * pb1 + (1.0 - pa1) * (1.0 - pb1);
  if (pe >= 1.0) return 1.0;
  return (po - pe) / (1.0 - pe);
}

AnnotationStats annotation_stats(const std::vector<AnnotationTrack>& tracks,
                                 std::int64_t total_time_ms) {
  AnnotationStats st;
  double sum = 0.0;
  std::int64_t sed_ms = 0;
  std::vector<double> durations;

  for (const AnnotationTrack& t : tracks) {
    for (const Segment& s : t.segments) {
      validate_segment(s);
      const double dur_s =
          static_cast<double>(s.end_ms - s.start_ms) / 1000.0;
      durations.push_back(dur_s);
      sum += dur_s;
      sed_ms += s.end_ms - s.start_ms;
      for (const std::string& c : s.cues) ++st.cue_counts[c];
      for (const std::string& c : s.affects) ++st.affect_counts[c];
      if (!s.cause.empty()) ++st.cause_counts[s.cause];
    }
  }
  st.segment_count = durations.size();
  if (!durations.empty()) {
    st.duration_mean_s = sum / static_cast<double>(durations.size());
    double ss = 0.0;
    for (double d : durations) {
      const double dd = d - st.duration_mean_s;
      ss += dd * dd;
    }
    st.duration_sd_s = std::sqrt(ss / static_cast<double>(durations.size()));
  }
  if (total_time_ms > 0)
    st.sed_time_fraction =
        static_cast<double>(sed_ms) / static_cast<double>(total_time_ms);
  return st;
}

}  // namespace sed
