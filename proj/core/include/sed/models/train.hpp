#pragma once

#include <cstdint>
#include <vector>

#include "sed/models/network.hpp"
#include "sed/windowing.hpp"

namespace sed {

struct TrainConfig {
  double learning_rate = 1e-3;
  double rho = 0.9;        // squared-gradient decay
  double epsilon = 1e-7;   // added outside the root
  double clip_norm = 5.0;  // global gradient 2-norm ceiling
  double dropout = 0.1;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  double val_fraction = 0.10;
  std::size_t patience = 5;  // epochs without a new best before stopping
  std::uint64_t seed = 1;
  std::vector<double> class_weights = {1.0, 1.0};
};

struct EpochStats {
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainReport {
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;  // 1-based
  double best_val_accuracy = 0.0;
  std::vector<EpochStats> history;
};

struct TrainedNetwork {
  NetworkConfig config;
  NetworkParams params;
  TrainReport report;
};

// Minibatch training with root-mean-square gradient scaling and early
// stopping on validation accuracy. The validation split is made at the
// interaction level so no interaction contributes windows to both sides
// (single-interaction data falls back to a window split). The weights from
// the best validation epoch are restored at the end. A non-finite loss
// raises TrainingError naming the epoch.
TrainedNetwork train_network(const NetworkConfig& cfg,
                             const std::vector<LabeledWindow>& windows,
                             const TrainConfig& tc);

}  // namespace sed
