#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sed/layout.hpp"
#include "sed/metrics.hpp"
#include "sed/models/network.hpp"
#include "sed/stream.hpp"

namespace sed {

// Threshold metrics computed on class-balanced resamples. The majority class
// is split into floor(N_maj / N_min) disjoint shuffled subsets of minority
// size; each subset plus the full minority class forms one resample.
// Accuracy and F1 are averaged over resamples; the rank metric is computed
// once on the full unbalanced score set (it is insensitive to class balance).
struct ResampleEval {
  std::size_t resamples = 0;
  bool degenerate = false;  // majority smaller than minority: one resample
  double accuracy_mean = 0.0;
  double accuracy_sd = 0.0;
  double f1_mean = 0.0;
  double f1_sd = 0.0;
  double auc_full = 0.0;
  ConfusionMatrix pooled;  // summed over resamples
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ResampleEval balanced_resample_eval(const std::vector<double>& scores,
                                    const std::vector<unsigned char>& labels,
                                    std::uint64_t seed);

// Feature-level group comparison between positive and negative frames,
// strongest differences first.
struct FeatureContrast {
  std::size_t feature = 0;
  std::string name;
  WelchResult stats;
  std::string stars;
};

std::vector<FeatureContrast> behavior_contrast(
    const std::vector<const FrameSequence*>& seqs,
    const std::vector<const std::vector<unsigned char>*>& labels,
    const FeatureLayout& layout);

// One grid cell of a window-geometry sweep, aggregated over folds.
struct SweepCell {
  std::int64_t tau_ms = 0;
  std::int64_t eta_ms = 0;
  std::size_t folds = 0;
  double auc_mean = 0.0;
  double auc_sd = 0.0;
  double accuracy_mean = 0.0;
  double f1_mean = 0.0;
};

struct SweepTable {
  ModelKind kind = ModelKind::kLstm;
  std::vector<SweepCell> cells;
};

void write_sweep_csv(const SweepTable& table, const std::string& path);

// Fixed-width text grid (tau rows, eta columns) of mean rank metric.
std::string format_sweep_table(const SweepTable& table);

}  // namespace sed
