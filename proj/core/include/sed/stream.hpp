#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sed/layout.hpp"
#include "sed/matrix.hpp"

namespace sed {

// One timestamped sample from one source stream. `values` has the stream's
// dimensionality from the layout; non-finite entries mark dropped readings.
struct StreamSample {
  std::int64_t t_ms = 0;
  StreamId stream = StreamId::kDistance;
  std::vector<double> values;
};

// All samples of one stream, ordered by timestamp.
struct StreamSeries {
  StreamId stream = StreamId::kDistance;
  std::vector<StreamSample> samples;
};

// Pooled statistics of one stream over one frame interval.
struct PooledBlock {
  std::vector<double> mean;
  std::vector<double> var;
  std::vector<unsigned char> present;
};

// Pools sample vectors coordinate-wise: mean and population variance over the
// finite entries, two passes, accumulation in the order given. Coordinates
// with no finite entry are flagged absent. Both the batch aligner and the
// online detector call this exact routine, which is what makes their outputs
// bit-identical.
PooledBlock pool_samples(const std::vector<const double*>& samples,
                         std::size_t dim);

// Synchronized per-frame feature matrix for one interaction.
// frames is T x pooled_dim; missing marks coordinates with no observation.
struct FrameSequence {
  std::string interaction_id;
  std::int64_t frame_ms = 500;
  RowMatrix frames;
  BoolMatrix missing;
};

// Number of frames covering samples up to and including last_t_ms, with
// frames [k*frame_ms, (k+1)*frame_ms).
std::size_t frame_count_for(std::int64_t last_t_ms, std::int64_t frame_ms);

// Bins every stream into half-open frame intervals and pools each bin.
// Samples are stable-sorted by timestamp per stream, so already-ordered input
// is processed in arrival order. frame_count fixes T explicitly (pass
// frame_count_for(...) of the latest sample across streams).
FrameSequence align_streams(const FeatureLayout& layout,
                            const std::vector<StreamSeries>& series,
                            std::size_t frame_count, std::int64_t frame_ms,
                            const std::string& interaction_id);

}  // namespace sed
