#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sed {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  double accuracy() const;
  double precision() const;
  double recall() const;
  double f1() const;  // 2TP / (2TP + FP + FN)
};

// Thresholds scores at a strict p > threshold: a score exactly on the
// threshold is called negative.
ConfusionMatrix confusion(const std::vector<double>& scores,
                          const std::vector<unsigned char>& labels,
                          double threshold = 0.5);

// Rank-based AUC (ties get midranks, i.e. count one half). Numerically equal,
// bit for bit, to the quadratic positive-vs-negative pair count because both
// reduce to the same exactly-representable numerator over n_pos * n_neg.
double auc(const std::vector<double>& scores,
           const std::vector<unsigned char>& labels);

// Two-sample t-test without the equal-variance assumption.
struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
  double mean_a = 0.0;
  double mean_b = 0.0;
};

WelchResult welch_t_test(const std::vector<double>& a,
                         const std::vector<double>& b);

// "****" p<1e-4, "***" p<1e-3, "**" p<1e-2, "*" p<5e-2, "-" otherwise.
std::string significance_stars(double p);

// Regularized incomplete beta I_x(a, b); exposed for test oracles.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace sed
