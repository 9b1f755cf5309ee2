#include "sed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sed/error.hpp"

namespace sed {

double ConfusionMatrix::accuracy() const {
  const std::size_t n = total();
  return n ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0.0;
}

double ConfusionMatrix::precision() const {
  const std::size_t d = tp + fp;
  return d ? static_cast<double>(tp) / static_cast<double>(d) : 0.0;
}

double ConfusionMatrix::recall() const {
  const std::size_t d = tp + fn;
  return d ? static_cast<double>(tp) / static_cast<double>(d) : 0.0;
}

double ConfusionMatrix::f1() const {
  const std::size_t d = 2 * tp + fp + fn;
  return d ? static_cast<double>(2 * tp) / static_cast<double>(d) : 0.0;
}

ConfusionMatrix confusion(const std::vector<double>& scores,
                          const std::vector<unsigned char>& labels,
                          double threshold) {
  if (scores.size() != labels.size())
    throw ValidationError("scores and labels differ in length");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] > threshold;
    if (pred && labels[i]) ++m.tp;
    else if (pred && !labels[i]) ++m.fp;
    else if (!pred && labels[i]) ++m.fn;
    else ++m.tn;
  }
  return m;
}

double auc(const std::vector<double>& scores,
           const std::vector<unsigned char>& labels) {
  if (scores.size() != labels.size())
    throw ValidationError("scores and labels differ in length");

  std::size_t n1 = 0;
  for (unsigned char l : labels)
    if (l) ++n1;
  const std::size_t n0 = labels.size() - n1;
  if (n0 == 0 || n1 == 0)
    throw ValidationError("area under the curve needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) {
                     return scores[a] < scores[b];
                   });

  // Midranks: a run of equal scores spanning 1-based ranks [lo+1, hi+1]
  // each gets (lo + hi) / 2 + 1. Rank sums stay exact in floating point
  // (integers and halves), so this matches the pairwise count exactly.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           scores[order[j + 1]] == scores[order[i]])
      ++j;
    const double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      if (labels[order[k]]) rank_sum_pos += midrank;
    i = j + 1;
  }

  const double numer =
      rank_sum_pos -
      static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
  return numer / (static_cast<double>(n0) * static_cast<double>(n1));
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
  const int kMaxIter = 300;
  const double kEps = 3e-16;
  const double kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0)
    throw ConfigError("incomplete beta requires positive shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

WelchResult welch_t_test(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw ValidationError("t-test needs at least two values per group");

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  WelchResult r;
  r.mean_a = std::accumulate(a.begin(), a.end(), 0.0) / na;
  r.mean_b = std::accumulate(b.begin(), b.end(), 0.0) / nb;

  double va = 0.0, vb = 0.0;
  for (double x : a) va += (x - r.mean_a) * (x - r.mean_a);
  for (double x : b) vb += (x - r.mean_b) * (x - r.mean_b);
  va /= na - 1.0;
  vb /= nb - 1.0;

  const double se2 = va / na + vb / nb;
  if (se2 <= 0.0) {
    // Both groups constant: identical means are a non-result, different
    // means are an infinitely confident one.
    r.t = r.mean_a == r.mean_b
              ? 0.0
              : std::copysign(HUGE_VAL, r.mean_a - r.mean_b);
    r.df = na + nb - 2.0;
    r.p = r.mean_a == r.mean_b ? 1.0 : 0.0;
    return r;
  }

  r.t = (r.mean_a - r.mean_b) / std::sqrt(se2);
  r.df = se2 * se2 /
         ((va / na) * (va / na) / (na - 1.0) +
          (vb / nb) * (vb / nb) / (nb - 1.0));
  r.p = regularized_incomplete_beta(r.df / 2.0, 0.5,
                                    r.df / (r.df + r.t * r.t));
  return r;
}

std::string significance_stars(double p) {
  if (p < 1e-4) return "****";
  if (p < 1e-3) return "***";
  if (p < 1e-2) return "**";
  if (p < 5e-2) return "*";
  return "-";
}

}  // namespace sed
