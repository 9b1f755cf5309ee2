#include "sed/preprocess.hpp"

#include <cmath>
#include <string>

#include "sed/error.hpp"

namespace sed {

ImputationModel ImputationModel::fit(
    const std::vector<const FrameSequence*>& seqs) {
  if (seqs.empty()) throw ValidationError("imputation fit on empty set");
  const std::size_t dim = seqs.front()->frames.cols;

  ImputationModel m;
  m.fill.assign(dim, 0.0);
  std::vector<std::size_t> counts(dim, 0);

  for (const FrameSequence* seq : seqs) {
    if (seq->frames.cols != dim)
      throw ValidationError("imputation fit: inconsistent feature dimension");
    for (std::size_t r = 0; r < seq->frames.rows; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        if (!seq->missing.at(r, c)) {
          m.fill[c] += seq->frames.at(r, c);
          ++counts[c];
        }
      }
    }
  }
  for (std::size_t c = 0; c < dim; ++c) {
    if (counts[c] == 0)
      throw ValidationError("coordinate " + std::to_string(c) +
                            " never observed in fitting set");
    m.fill[c] /= static_cast<double>(counts[c]);
  }
  return m;
}

void ImputationModel::apply(FrameSequence& seq) const {
  if (seq.frames.cols != fill.size())
    throw ValidationError("imputation apply: feature dimension mismatch");
  for (std::size_t r = 0; r < seq.frames.rows; ++r) {
    for (std::size_t c = 0; c < seq.frames.cols; ++c) {
      if (seq.missing.at(r, c)) {
        seq.frames.at(r, c) = fill[c];
        seq.missing.set(r, c, false);
      }
    }
  }
}

NormalizationModel NormalizationModel::fit(
    const std::vector<const FrameSequence*>& seqs) {
  if (seqs.empty()) throw ValidationError("normalization fit on empty set");
  const std::size_t dim = seqs.front()->frames.cols;

  NormalizationModel m;
  m.mean.assign(dim, 0.0);
  m.sd.assign(dim, 0.0);

  std::size_t total = 0;
  for (const FrameSequence* seq : seqs) {
    if (seq->frames.cols != dim)
      throw ValidationError("normalization fit: inconsistent dimension");
    total += seq->frames.rows;
    for (std::size_t r = 0; r < seq->frames.rows; ++r)
      for (std::size_t c = 0; c < dim; ++c) m.mean[c] += seq->frames.at(r, c);
  }
  if (total == 0) throw ValidationError("normalization fit on zero frames");
  for (std::size_t c = 0; c < dim; ++c)
    m.mean[c] /= static_cast<double>(total);

  for (const FrameSequence* seq : seqs) {
    for (std::size_t r = 0; r < seq->frames.rows; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        const double d = seq->frames.at(r, c) - m.mean[c];
        m.sd[c] += d * d;
      }
    }
  }
  for (std::size_t c = 0; c < dim; ++c) {
    m.sd[c] = std::sqrt(m.sd[c] / static_cast<double>(total));
    // Constant coordinates map to exactly 0 instead of dividing by ~0.
    if (!(m.sd[c] > 0.0) || !std::isfinite(m.sd[c])) m.sd[c] = 1.0;
  }
  return m;
}

void NormalizationModel::apply(FrameSequence& seq) const {
  if (seq.frames.cols != mean.size())
    throw ValidationError("normalization apply: dimension mismatch");
  for (std::size_t r = 0; r < seq.frames.rows; ++r) {
    double* row = seq.frames.row(r);
    for (std::size_t c = 0; c < seq.frames.cols; ++c)
      row[c] = (row[c] - mean[c]) / sd[c];
  }
}

void NormalizationModel::apply(std::vector<double>& frame) const {
  if (frame.size() != mean.size())
    throw ValidationError("normalization apply: dimension mismatch");
  for (std::size_t c = 0; c < frame.size(); ++c)
    frame[c] = (frame[c] - mean[c]) / sd[c];
}

void NormalizationModel::invert(std::vector<double>& frame) const {
  if (frame.size() != mean.size())
    throw ValidationError("normalization invert: dimension mismatch");
  for (std::size_t c = 0; c < frame.size(); ++c)
    frame[c] = frame[c] * sd[c] + mean[c];
}

}  // namespace sed
