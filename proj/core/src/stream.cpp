#include "sed/stream.hpp"

#include <algorithm>
#include <cmath>

#include "sed/error.hpp"

namespace sed {

PooledBlock pool_samples(const std::vector<const double*>& samples,
                         std::size_t dim) {
  PooledBlock out;
  out.mean.assign(dim, 0.0);
  out.var.assign(dim, 0.0);
  out.present.assign(dim, 0);

  std::vector<std::size_t> counts(dim, 0);
  for (const double* s : samples) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (std::isfinite(s[c])) {
        out.mean[c] += s[c];
        ++counts[c];
      }
    }
  }
  for (std::size_t c = 0; c < dim; ++c) {
    if (counts[c] > 0) {
      out.mean[c] /= static_cast<double>(counts[c]);
      out.present[c] = 1;
    }
  }
  for (const double* s : samples) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (std::isfinite(s[c])) {
        const double d = s[c] - out.mean[c];
        out.var[c] += d * d;
      }
    }
  }
  for (std::size_t c = 0; c < dim; ++c) {
    if (counts[c] > 0) out.var[c] /= static_cast<double>(counts[c]);
  }
  return out;
}

std::size_t frame_count_for(std::int64_t last_t_ms, std::int64_t frame_ms) {
  if (frame_ms <= 0) throw ConfigError("frame period must be positive");
  if (last_t_ms < 0) throw ValidationError("negative timestamp");
  return static_cast<std::size_t>(last_t_ms / frame_ms) + 1;
}

FrameSequence align_streams(const FeatureLayout& layout,
                            const std::vector<StreamSeries>& series,
                            std::size_t frame_count, std::int64_t frame_ms,
                            const std::string& interaction_id) {
  if (frame_ms <= 0) throw ConfigError("frame period must be positive");

  FrameSequence seq;
  seq.interaction_id = interaction_id;
  seq.frame_ms = frame_ms;
  seq.frames = RowMatrix(frame_count, layout.pooled_dim(), 0.0);
  seq.missing = BoolMatrix(frame_count, layout.pooled_dim(), true);

  for (const StreamSeries& s : series) {
    const std::size_t dim = layout.dim(s.stream);
    const std::size_t offset = layout.pooled_offset(s.stream);

    std::vector<const StreamSample*> ordered;
    ordered.reserve(s.samples.size());
    for (const StreamSample& sample : s.samples) {
      if (sample.values.size() != dim)
        throw ValidationError("sample dimension mismatch for stream " +
                              std::string(stream_name(s.stream)));
      if (sample.t_ms < 0) throw ValidationError("negative timestamp");
      ordered.push_back(&sample);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const StreamSample* a, const StreamSample* b) {
                       return a->t_ms < b->t_ms;
                     });

    std::size_t i = 0;
    for (std::size_t k = 0; k < frame_count; ++k) {
      const std::int64_t hi = static_cast<std::int64_t>(k + 1) * frame_ms;
      std::vector<const double*> bin;
      while (i < ordered.size() && ordered[i]->t_ms < hi) {
        bin.push_back(ordered[i]->values.data());
        ++i;
      }
      const PooledBlock block = pool_samples(bin, dim);
      for (std::size_t c = 0; c < dim; ++c) {
        if (block.present[c]) {
          seq.frames.at(k, offset + c) = block.mean[c];
          seq.frames.at(k, offset + dim + c) = block.var[c];
          seq.missing.set(k, offset + c, false);
          seq.missing.set(k, offset + dim + c, false);
        }
      }
    }
  }
  return seq;
}

}  // namespace sed
