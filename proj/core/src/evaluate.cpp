#include "sed/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "sed/error.hpp"
#include "sed/rng.hpp"

namespace sed {

ResampleEval balanced_resample_eval(const std::vector<double>& scores,
                                    const std::vector<unsigned char>& labels,
                                    std::uint64_t seed) {
  if (scores.size() != labels.size())
    throw ValidationError("scores and labels differ in length");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty())
    throw ValidationError("balanced evaluation needs both classes");

  ResampleEval out;
  out.positives = pos.size();
  out.negatives = neg.size();
  out.auc_full = auc(scores, labels);

  std::vector<std::size_t>& maj = neg.size() >= pos.size() ? neg : pos;
  std::vector<std::size_t>& min_cls = neg.size() >= pos.size() ? pos : neg;

  const std::size_t k = maj.size() / min_cls.size();
  Rng rng(Rng::derive(seed, 0x62616c61));
  rng.shuffle(maj);

  std::vector<double> accs, f1s;
  if (k == 0) {
    // Fewer majority samples than minority: nothing to subsample, evaluate
    // the fold as-is and say so.
    out.degenerate = true;
    const ConfusionMatrix m = confusion(scores, labels);
    accs.push_back(m.accuracy());
    f1s.push_back(m.f1());
    out.pooled = m;
  } else {
    for (std::size_t r = 0; r < k; ++r) {
      std::vector<double> s;
      std::vector<unsigned char> l;
      s.reserve(2 * min_cls.size());
      l.reserve(2 * min_cls.size());
      for (std::size_t i : min_cls) {
        s.push_back(scores[i]);
        l.push_back(labels[i]);
      }
      for (std::size_t j = 0; j < min_cls.size(); ++j) {
        const std::size_t i = maj[r * min_cls.size() + j];
        s.push_back(scores[i]);
        l.push_back(labels[i]);
      }
      const ConfusionMatrix m = confusion(s, l);
      accs.push_back(m.accuracy());
      f1s.push_back(m.f1());
      out.pooled.tp += m.tp;
      out.pooled.fp += m.fp;
      out.pooled.fn += m.fn;
      out.pooled.tn += m.tn;
    }
  }

  out.resamples = accs.size();
  auto mean_sd = [](const std::vector<double>& v, double* mean, double* sd) {
    double s = 0.0;
    for (double x : v) s += x;
    *mean = s / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - *mean) * (x - *mean);
    *sd = std::sqrt(ss / static_cast<double>(v.size()));
  };
  mean_sd(accs, &out.accuracy_mean, &out.accuracy_sd);
  mean_sd(f1s, &out.f1_mean, &out.f1_sd);
  return out;
}

std::vector<FeatureContrast> behavior_contrast(
    const std::vector<const FrameSequence*>& seqs,
    const std::vector<const std::vector<unsigned char>*>& labels,
    const FeatureLayout& layout) {
  if (seqs.size() != labels.size())
    throw ValidationError("one label sequence per frame sequence expected");
  if (seqs.empty()) throw ValidationError("no frame sequences given");

  const std::size_t dim = layout.pooled_dim();
  std::vector<std::vector<double>> pos(dim), neg(dim);
  for (std::size_t s = 0; s < seqs.size(); ++s) {
    const FrameSequence& seq = *seqs[s];
    const std::vector<unsigned char>& lab = *labels[s];
    if (lab.size() != seq.frames.rows)
      throw ValidationError("labels do not match frame count");
    if (seq.frames.cols != dim)
      throw ValidationError("frames do not match the layout width");
    for (std::size_t r = 0; r < seq.frames.rows; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        if (seq.missing.at(r, c)) continue;
        (lab[r] ? pos[c] : neg[c]).push_back(seq.frames.at(r, c));
      }
    }
  }

  std::vector<FeatureContrast> out;
  for (std::size_t c = 0; c < dim; ++c) {
    if (pos[c].size() < 2 || neg[c].size() < 2) continue;
    FeatureContrast fc;
    fc.feature = c;
    fc.name = layout.pooled_name(c);
    fc.stats = welch_t_test(pos[c], neg[c]);
    fc.stars = significance_stars(fc.stats.p);
    out.push_back(std::move(fc));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureContrast& a, const FeatureContrast& b) {
                     return std::fabs(a.stats.t) > std::fabs(b.stats.t);
                   });
  return out;
}

void write_sweep_csv(const SweepTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "model,tau_ms,eta_ms,folds,auc_mean,auc_sd,accuracy_mean,f1_mean\n";
  char buf[256];
  for (const SweepCell& c : table.cells) {
    std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%zu,%.6f,%.6f,%.6f,%.6f\n",
                  model_kind_name(table.kind),
                  static_cast<long long>(c.tau_ms),
                  static_cast<long long>(c.eta_ms), c.folds, c.auc_mean,
                  c.auc_sd, c.accuracy_mean, c.f1_mean);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string format_sweep_table(const SweepTable& table) {
  std::set<std::int64_t> taus, etas;
  std::map<std::pair<std::int64_t, std::int64_t>, double> grid;
  for (const SweepCell& c : table.cells) {
    taus.insert(c.tau_ms);
    etas.insert(c.eta_ms);
    grid[{c.tau_ms, c.eta_ms}] = c.auc_mean;
  }

  std::string s = "model ";
  s += model_kind_name(table.kind);
  s += ": mean rank metric, observation span (rows) x label lag (cols)\n";
  char buf[64];
  s += "        ";
  for (std::int64_t e : etas) {
    std::snprintf(buf, sizeof(buf), " %6.1fs", static_cast<double>(e) / 1000.0);
    s += buf;
  }
  s += "\n";
  for (std::int64_t t : taus) {
    std::snprintf(buf, sizeof(buf), "%7.1fs", static_cast<double>(t) / 1000.0);
    s += buf;
    for (std::int64_t e : etas) {
      auto it = grid.find({t, e});
      if (it == grid.end()) {
        s += "       -";
      } else {
        std::snprintf(buf, sizeof(buf), " %7.4f", it->second);
        s += buf;
      }
    }
    s += "\n";
  }
  return s;
}

}  // namespace sed
