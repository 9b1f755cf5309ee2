#include "sed/models/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "sed/error.hpp"

namespace sed {

namespace {

// Windows flattened frame-major into dataset rows.
RowMatrix flatten_windows(const std::vector<LabeledWindow>& windows,
                          const std::vector<std::size_t>& idx) {
  const std::size_t width = windows[idx[0]].block.size();
  RowMatrix out(idx.size(), width);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const RowMatrix& b = windows[idx[r]].block;
    if (b.size() != width)
      throw ValidationError("windows differ in shape");
    std::memcpy(out.row(r), b.data.data(), width * sizeof(double));
  }
  return out;
}

double validation_accuracy(const NetworkConfig& cfg,
                           const NetworkParams& params,
                           const std::vector<LabeledWindow>& windows,
                           const std::vector<std::size_t>& val_idx) {
  std::size_t correct = 0;
  const std::size_t chunk = 256;
  for (std::size_t start = 0; start < val_idx.size(); start += chunk) {
    const std::size_t stop = std::min(start + chunk, val_idx.size());
    std::vector<std::size_t> part(val_idx.begin() + start,
                                  val_idx.begin() + stop);
    const RowMatrix batch = flatten_windows(windows, part);
    const RowMatrix probs = network_forward(cfg, params, batch);
    for (std::size_t r = 0; r < part.size(); ++r) {
      const bool pred = probs.at(r, 1) > 0.5;
      if (pred == (windows[part[r]].label != 0)) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(val_idx.size());
}

}  // namespace

TrainedNetwork train_network(const NetworkConfig& cfg,
                             const std::vector<LabeledWindow>& windows,
                             const TrainConfig& tc) {
  cfg.validate();
  if (windows.empty()) throw ValidationError("no training windows");
  if (tc.class_weights.size() != 2)
    throw ConfigError("expected one class weight per class");
  if (tc.batch_size == 0) throw ConfigError("batch size must be positive");
  if (tc.val_fraction <= 0.0 || tc.val_fraction >= 1.0)
    throw ConfigError("validation fraction must be in (0, 1)");
  for (const LabeledWindow& w : windows) {
    if (w.block.rows != cfg.frames || w.block.cols != cfg.frame_dim)
      throw ValidationError("window shape does not match the network shape");
  }

  // Interaction-level validation split.
  std::vector<std::string> ids;
  for (const LabeledWindow& w : windows) {
    if (std::find(ids.begin(), ids.end(), w.interaction_id) == ids.end())
      ids.push_back(w.interaction_id);
  }

  std::vector<std::size_t> train_idx, val_idx;
  if (ids.size() >= 2) {
    Rng split_rng(Rng::derive(tc.seed, 0x73706c69));
    split_rng.shuffle(ids);
    std::size_t n_val = static_cast<std::size_t>(
        std::floor(tc.val_fraction * static_cast<double>(ids.size()) + 0.5));
    n_val = std::max<std::size_t>(1, std::min(n_val, ids.size() - 1));
    std::vector<std::string> val_ids(ids.begin(),
                                     ids.begin() + static_cast<long>(n_val));
    for (std::size_t i = 0; i < windows.size(); ++i) {
      const bool in_val =
          std::find(val_ids.begin(), val_ids.end(),
                    windows[i].interaction_id) != val_ids.end();
      (in_val ? val_idx : train_idx).push_back(i);
    }
  } else {
    std::size_t n_val = static_cast<std::size_t>(std::floor(
        tc.val_fraction * static_cast<double>(windows.size()) + 0.5));
    n_val = std::max<std::size_t>(1, std::min(n_val, windows.size() - 1));
    for (std::size_t i = 0; i + n_val < windows.size(); ++i)
      train_idx.push_back(i);
    for (std::size_t i = windows.size() - n_val; i < windows.size(); ++i)
      val_idx.push_back(i);
  }
  if (train_idx.empty() || val_idx.empty())
    throw ValidationError("too few windows to carve out a validation split");

  TrainedNetwork out;
  out.config = cfg;
  out.params = init_network(cfg, tc.seed);

  NetworkParams grads = out.params.zeros_like();
  std::vector<double> rms(out.params.total_size(), 0.0);

  Rng rng(Rng::derive(tc.seed, 0x74726169));
  NetworkParams best = out.params;
  double best_acc = -1.0;
  std::size_t best_epoch = 0;
  std::size_t stale = 0;

  TrainReport report;
  for (std::size_t epoch = 1; epoch <= tc.max_epochs; ++epoch) {
    rng.shuffle(train_idx);

    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < train_idx.size();
         start += tc.batch_size) {
      const std::size_t stop =
          std::min(start + tc.batch_size, train_idx.size());
      std::vector<std::size_t> part(train_idx.begin() + start,
                                    train_idx.begin() + stop);
      const RowMatrix batch = flatten_windows(windows, part);
      std::vector<unsigned char> labels(part.size());
      std::vector<double> weights(part.size());
      for (std::size_t i = 0; i < part.size(); ++i) {
        labels[i] = windows[part[i]].label;
        weights[i] = tc.class_weights[labels[i] ? 1 : 0];
      }

      for (ParamBlock& b : grads.blocks)
        std::fill(b.m.data.begin(), b.m.data.end(), 0.0);
      const double loss =
          network_loss_and_grad(cfg, out.params, batch, labels, weights,
                                tc.dropout, &rng, &grads);
      if (!std::isfinite(loss))
        throw TrainingError("loss diverged at epoch " +
                            std::to_string(epoch));
      loss_sum += loss * static_cast<double>(part.size());
      seen += part.size();

      // Global-norm clip across every block, then the scaled update.
      double norm2 = 0.0;
      for (const ParamBlock& b : grads.blocks)
        for (double v : b.m.data) norm2 += v * v;
      const double norm = std::sqrt(norm2);
      const double scale =
          (tc.clip_norm > 0.0 && norm > tc.clip_norm) ? tc.clip_norm / norm
                                                      : 1.0;

      std::size_t off = 0;
      for (std::size_t bi = 0; bi < grads.blocks.size(); ++bi) {
        std::vector<double>& gv = grads.blocks[bi].m.data;
        std::vector<double>& pv = out.params.blocks[bi].m.data;
        for (std::size_t j = 0; j < gv.size(); ++j) {
          const double gclip = gv[j] * scale;
          double& v = rms[off + j];
          v = tc.rho * v + (1.0 - tc.rho) * gclip * gclip;
          pv[j] -= tc.learning_rate * gclip / (std::sqrt(v) + tc.epsilon);
        }
        off += gv.size();
      }
    }

    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(seen);
    stats.val_accuracy =
        validation_accuracy(cfg, out.params, windows, val_idx);
    report.history.push_back(stats);
    report.epochs_run = epoch;

    if (stats.val_accuracy > best_acc) {
      best_acc = stats.val_accuracy;
      best_epoch = epoch;
      best = out.params;
      stale = 0;
    } else {
      ++stale;
      if (stale >= tc.patience) break;
    }
  }

  out.params = best;
  report.best_epoch = best_epoch;
  report.best_val_accuracy = best_acc;
  out.report = report;
  return out;
}

}  // namespace sed
