#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sed/models/logreg.hpp"
#include "sed/models/network.hpp"
#include "sed/preprocess.hpp"
#include "sed/windowing.hpp"

namespace sed {

// A deployable detector: preprocessing fitted on the training folds, the
// classifier weights, and the window geometry they were trained for. The
// layout hash pins the feature layout so a model cannot silently score data
// with different feature semantics.
struct TrainedModel {
  ModelKind kind = ModelKind::kLstm;
  WindowConfig window;
  std::uint64_t layout_hash = 0;
  ImputationModel imputation;
  NormalizationModel normalization;
  NetworkConfig net_config;   // unused when kind == kLogReg
  NetworkParams net_params;   // unused when kind == kLogReg
  LogRegModel linear;         // unused otherwise
  std::map<std::string, double> train_meta;

  // Positive-class probability for one flattened, preprocessed window.
  double score_window(const std::vector<double>& flat) const;
};

// JSON with keys in fixed order and shortest round-trip number formatting:
// saving, loading and saving again produces byte-identical files, and a
// loaded model scores byte-identically to the one saved.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace sed
