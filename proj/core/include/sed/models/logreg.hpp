#pragma once

#include <cstddef>
#include <vector>

#include "sed/matrix.hpp"

namespace sed {

// L2-regularized weighted logistic regression on flattened windows.
struct LogRegConfig {
  double inverse_reg = 1.0;  // larger C, weaker penalty; bias unpenalized
  double grad_tol = 1e-6;    // stop when the gradient 2-norm drops below
  std::size_t max_iter = 500;
  std::size_t history = 10;  // quasi-Newton memory
  std::vector<double> class_weights = {1.0, 1.0};
};

struct LogRegModel {
  std::vector<double> w;
  double b = 0.0;
};

struct LogRegReport {
  std::size_t iterations = 0;
  double final_loss = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Objective: (sum_i sw_i * ce_i + |w|^2 / (2C)) / sum_i sw_i, with sw_i the
// class weight of sample i. Normalizing by the weight mass keeps the
// effective regularization independent of the training-set size. Exposed so
// the finite-difference checker exercises the gradients the trainer uses.
double logreg_loss_and_grad(const LogRegModel& m, const RowMatrix& x,
                            const std::vector<unsigned char>& y,
                            const std::vector<double>& sample_weights,
                            double inverse_reg, std::vector<double>* grad_w,
                            double* grad_b);

// Limited-memory BFGS with backtracking line search from a zero start (all
// initial scores are exactly 0.5).
LogRegModel train_logreg(const RowMatrix& x,
                         const std::vector<unsigned char>& y,
                         const LogRegConfig& cfg,
                         LogRegReport* report = nullptr);

double logreg_score(const LogRegModel& m, const std::vector<double>& x);

}  // namespace sed
