#pragma once

#include <vector>

#include "sed/matrix.hpp"
#include "sed/stream.hpp"

namespace sed {

// Per-coordinate means of observed values across the fitting set. Applied to
// a frame sequence it fills coordinates flagged missing.
struct ImputationModel {
  std::vector<double> fill;

  // Means over all frames of all sequences, skipping masked entries. A
  // coordinate never observed anywhere in the fitting set is an error: there
  // is no defensible fill value for it.
  static ImputationModel fit(const std::vector<const FrameSequence*>& seqs);

  void apply(FrameSequence& seq) const;
};

// Per-coordinate z-scoring fitted on (imputed) training frames. Coordinates
// with degenerate spread keep sd := 1 so their output is exactly 0.
struct NormalizationModel {
  std::vector<double> mean;
  std::vector<double> sd;

  static NormalizationModel fit(const std::vector<const FrameSequence*>& seqs);

  void apply(FrameSequence& seq) const;
  void apply(std::vector<double>& frame) const;

  // Undoes apply(); used when inspecting model inputs in original units.
  void invert(std::vector<double>& frame) const;
};

}  // namespace sed
