#pragma once

#include <string>
#include <vector>

#include "sed/models/logreg.hpp"
#include "sed/models/network.hpp"

namespace sed {

struct GradCheckBlock {
  std::string name;
  double max_rel_err = 0.0;
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::vector<GradCheckBlock> blocks;

  bool pass(double tol) const { return max_rel_err < tol; }
};

// Central-difference verification of the analytic gradients, coordinate by
// coordinate, through the same loss function the trainer steps on (dropout
// disabled). Error per coordinate is |ga - gn| / max(|ga|, |gn|, 1e-6).
GradCheckReport check_network_gradients(
    const NetworkConfig& cfg, const NetworkParams& params,
    const RowMatrix& batch, const std::vector<unsigned char>& labels,
    const std::vector<double>& sample_weights, double step = 1e-5);

// Same check for the linear model; blocks are "w" and "b".
GradCheckReport check_logreg_gradients(
    const LogRegModel& model, const RowMatrix& x,
    const std::vector<unsigned char>& y,
    const std::vector<double>& sample_weights, double inverse_reg,
    double step = 1e-5);

}  // namespace sed
