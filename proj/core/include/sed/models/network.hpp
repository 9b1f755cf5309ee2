#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sed/matrix.hpp"
#include "sed/rng.hpp"

namespace sed {

enum class ModelKind { kLogReg, kDnn, kGru, kLstm };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

// Shape of the window classifier. Inputs are windows of `frames` frames with
// `frame_dim` features each, flattened frame-major into rows of
// frames*frame_dim. Recurrent variants run two stacked layers (hidden1 then
// hidden2 units) over the frames and classify from the final state; the
// feed-forward variant runs two dense layers over the flattened window. The
// classifier head is shared: relu -> affine -> softmax over `classes`.
struct NetworkConfig {
  ModelKind kind = ModelKind::kLstm;
  std::size_t frames = 11;
  std::size_t frame_dim = 96;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 2;
  std::size_t classes = 2;

  std::size_t input_dim() const { return frames * frame_dim; }
  void validate() const;
};

// A named parameter tensor. Block order inside NetworkParams is fixed per
// kind, which fixes initialization draw order and the optimizer state layout.
struct ParamBlock {
  std::string name;
  RowMatrix m;
};

struct NetworkParams {
  std::vector<ParamBlock> blocks;

  ParamBlock& at(const std::string& name);
  const ParamBlock& at(const std::string& name) const;
  std::size_t total_size() const;

  // Grad/optimizer containers with the same shapes, zero filled.
  NetworkParams zeros_like() const;
};

// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights drawn in block order,
// zero biases. The lstm forget-gate bias starts at +1 so early training does
// not flush cell state.
NetworkParams init_network(const NetworkConfig& cfg, std::uint64_t seed);

// Class probabilities for a batch of flattened windows (rows). Inference
// path: no dropout.
RowMatrix network_forward(const NetworkConfig& cfg, const NetworkParams& params,
                          const RowMatrix& batch);

// Probability of the positive class for one flattened window. The online
// detector and the batch evaluator both score through this exact routine.
double network_score(const NetworkConfig& cfg, const NetworkParams& params,
                     const std::vector<double>& window);

// Mean over the batch of sample_weight * cross_entropy, plus analytic
// gradients into `grads` (shapes of params). With dropout_rate > 0 and a
// non-null rng, inverted dropout masks are drawn per sample, frame and unit
// on the feed-forward connections only; recurrent state transitions are
// never masked. The finite-difference checker calls this same function with
// dropout disabled, so the gradients under test are the training gradients.
double network_loss_and_grad(const NetworkConfig& cfg,
                             const NetworkParams& params,
                             const RowMatrix& batch,
                             const std::vector<unsigned char>& labels,
                             const std::vector<double>& sample_weights,
                             double dropout_rate, Rng* rng,
                             NetworkParams* grads);

}  // namespace sed
