// Acceptance gate for the engagement-decrease detection engine. Each check
// prints exactly one [PASS]/[FAIL] line with its runtime and key numbers;
// the process exits with the number of failed checks. Optional arguments
// select a subset by 1-based index (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "sed/annotation.hpp"
#include "sed/detector.hpp"
#include "sed/evaluate.hpp"
#include "sed/io.hpp"
#include "sed/metrics.hpp"
#include "sed/models/cells.hpp"
#include "sed/models/gradcheck.hpp"
#include "sed/models/logreg.hpp"
#include "sed/models/network.hpp"
#include "sed/pipeline.hpp"
#include "sed/rng.hpp"
#include "sed/synth.hpp"
#include "sed/windowing.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace sed;

namespace {

struct CheckResult {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double pop_sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

// Corpora sized for the acceptance budget: about a minute of interaction
// with roughly three episodes each.
GeneratorConfig acceptance_config(std::size_t interactions) {
  GeneratorConfig cfg;
  cfg.interactions = interactions;
  cfg.duration_mean_s = 60.0;
  cfg.duration_sd_s = 15.0;
  cfg.duration_min_s = 45.0;
  cfg.episode_rate_reference_s = 120.0;
  return cfg;
}

// ------------------------------------------------------------- check 1

// Analytic gradients of every model kind against central differences on toy
// shapes, plus a control proving the comparison would flag a 2% error.
CheckResult check_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool ok = true;

  Rng rng(501);
  std::vector<ModelKind> kinds = {ModelKind::kDnn, ModelKind::kGru,
                                  ModelKind::kLstm};
  NetworkConfig last_cfg;
  NetworkParams last_params;
  RowMatrix last_batch;
  std::vector<unsigned char> last_labels;
  std::vector<double> last_weights;
  for (ModelKind kind : kinds) {
    NetworkConfig cfg;
    cfg.kind = kind;
    cfg.frames = 3;
    cfg.frame_dim = 5;
    cfg.hidden1 = 4;
    cfg.hidden2 = 3;
    const NetworkParams params = init_network(cfg, 91 + (int)kind);

    RowMatrix batch(6, cfg.frames * cfg.frame_dim);
    for (double& v : batch.data) v = rng.uniform(-1.5, 1.5);
    std::vector<unsigned char> labels = {0, 1, 1, 0, 1, 0};
    std::vector<double> weights = {1.0, 3.0, 0.5, 1.0, 2.0, 1.0};

    const GradCheckReport rep =
        check_network_gradients(cfg, params, batch, labels, weights);
    worst = std::max(worst, rep.max_rel_err);
    ok = ok && rep.pass(1e-4);

    last_cfg = cfg;
    last_params = params;
    last_batch = batch;
    last_labels = labels;
    last_weights = weights;
  }

  {
    LogRegModel m;
    m.w.resize(7);
    for (double& v : m.w) v = rng.uniform(-1.0, 1.0);
    m.b = 0.3;
    RowMatrix x(8, 7);
    for (double& v : x.data) v = rng.uniform(-2.0, 2.0);
    std::vector<unsigned char> y = {0, 1, 0, 1, 1, 0, 0, 1};
    std::vector<double> sw = {1.0, 2.0, 1.0, 0.5, 1.0, 1.0, 3.0, 1.0};
    const GradCheckReport rep = check_logreg_gradients(m, x, y, sw, 2.5);
    worst = std::max(worst, rep.max_rel_err);
    ok = ok && rep.pass(1e-4);
  }

  // Control: a 2% corruption of the largest analytic coordinate must land
  // far outside the tolerance, so the comparison has teeth.
  {
    NetworkParams grads = last_params;
    const double loss0 = network_loss_and_grad(
        last_cfg, last_params, last_batch, last_labels, last_weights, 0.0,
        nullptr, &grads);
    (void)loss0;
    std::size_t bi = 0, ci = 0;
    double best = -1.0;
    for (std::size_t b = 0; b < grads.blocks.size(); ++b)
      for (std::size_t c = 0; c < grads.blocks[b].m.data.size(); ++c)
        if (std::fabs(grads.blocks[b].m.data[c]) > best) {
          best = std::fabs(grads.blocks[b].m.data[c]);
          bi = b;
          ci = c;
        }
    const double ga = grads.blocks[bi].m.data[ci] * 1.02;
    NetworkParams lo = last_params, hi = last_params, scratch = last_params;
    const double h = 1e-5;
    lo.blocks[bi].m.data[ci] -= h;
    hi.blocks[bi].m.data[ci] += h;
    const double fl = network_loss_and_grad(last_cfg, lo, last_batch,
                                            last_labels, last_weights, 0.0,
                                            nullptr, &scratch);
    const double fh = network_loss_and_grad(last_cfg, hi, last_batch,
                                            last_labels, last_weights, 0.0,
                                            nullptr, &scratch);
    const double gn = (fh - fl) / (2.0 * h);
    const double rel =
        std::fabs(ga - gn) / std::max({std::fabs(ga), std::fabs(gn), 1e-6});
    ok = ok && rel > 1e-4;
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ok = ok && secs < 10.0;
  return {ok, fmt("max_rel_err=%.2e runtime=%.2fs (budget 10s)", worst, secs)};
}

// ------------------------------------------------------------- check 2

CheckResult check_cells() {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(Rng::derive(601, static_cast<std::uint64_t>(trial)));
    const std::size_t units = 1 + rng.below(8);
    const std::size_t in_dim = 1 + rng.below(10);

    std::vector<double> x(in_dim), h(units), c(units);
    for (double& v : x) v = rng.uniform(-2.0, 2.0);
    for (double& v : h) v = rng.uniform(-1.0, 1.0);
    for (double& v : c) v = rng.uniform(-1.0, 1.0);

    {
      RecurrentParams p;
      p.w_x = testutil::random_matrix(rng, in_dim, 4 * units, 0.9);
      p.w_h = testutil::random_matrix(rng, units, 4 * units, 0.9);
      p.bias.resize(4 * units);
      for (double& v : p.bias) v = rng.uniform(-0.5, 0.5);

      std::vector<double> h_lib(units), c_lib(units), h_ref, c_ref;
      lstm_cell_forward(p, x.data(), in_dim, h.data(), c.data(), units,
                        h_lib.data(), c_lib.data());
      oracle::lstm_step(p, x, h, c, &h_ref, &c_ref);
      for (std::size_t u = 0; u < units; ++u) {
        worst = std::max(worst, std::fabs(h_lib[u] - h_ref[u]));
        worst = std::max(worst, std::fabs(c_lib[u] - c_ref[u]));
      }
    }
    {
      RecurrentParams p;
      p.w_x = testutil::random_matrix(rng, in_dim, 3 * units, 0.9);
      p.w_h = testutil::random_matrix(rng, units, 3 * units, 0.9);
      p.bias.resize(3 * units);
      for (double& v : p.bias) v = rng.uniform(-0.5, 0.5);

      std::vector<double> h_lib(units), h_ref;
      gru_cell_forward(p, x.data(), in_dim, h.data(), units, h_lib.data());
      oracle::gru_step(p, x, h, &h_ref);
      for (std::size_t u = 0; u < units; ++u)
        worst = std::max(worst, std::fabs(h_lib[u] - h_ref[u]));
    }
  }
  return {worst < 1e-12, fmt("max_abs_diff=%.2e over 100 draws", worst)};
}

// ------------------------------------------------------------- check 3

CheckResult check_metrics() {
  std::size_t auc_equal = 0;
  const std::size_t sets = 1000;
  for (std::size_t s = 0; s < sets; ++s) {
    Rng rng(Rng::derive(701, s));
    const std::size_t n = 2 + rng.below(199);
    std::vector<double> scores(n);
    std::vector<unsigned char> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      // A coarse score grid forces heavy ties, the hard case for rank AUC.
      scores[i] = static_cast<double>(rng.below(12)) / 11.0;
      labels[i] = rng.bernoulli(0.5) ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    if (auc(scores, labels) == oracle::pairwise_auc(scores, labels))
      ++auc_equal;
  }

  bool kappa_ok =
      cohen_kappa({1, 1, 0, 0}, {1, 0, 0, 0}) == 0.5;
  Rng rng(707);
  for (int t = 0; t < 20 && kappa_ok; ++t) {
    const std::size_t n = 3 + rng.below(60);
    std::vector<unsigned char> x(n);
    for (auto& v : x) v = rng.bernoulli(0.5) ? 1 : 0;
    x[0] = 1;
    x[1] = 0;
    kappa_ok = kappa_ok && cohen_kappa(x, x) == 1.0;
  }

  return {auc_equal == sets && kappa_ok,
          fmt("auc_exact=%zu/%zu kappa_example=%s", auc_equal, sets,
              kappa_ok ? "ok" : "bad")};
}

// ------------------------------------------------------------- check 4

CheckResult check_window_indexing() {
  GeneratorConfig cfg = acceptance_config(20);
  cfg.duration_mean_s = 30.0;
  cfg.duration_sd_s = 20.0;
  cfg.duration_min_s = 6.0;  // short interactions exercise the empty case
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 77));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);

  bool ok = true;
  std::size_t compared = 0;
  for (int tf = 0; tf <= 6 && ok; ++tf) {
    for (int ef = 0; ef <= 5 && ok; ++ef) {
      if (ef > tf) continue;
      WindowConfig w;
      w.tau_ms = tf * 500;
      w.eta_ms = ef * 500;
      w.frame_ms = 500;
      ok = ok && w.width_frames() == static_cast<std::size_t>(tf) + 1;
      ok = ok && w.lag_frames() == static_cast<std::size_t>(ef);

      for (const PreparedInteraction& p : prepared) {
        const std::size_t frames = p.frames.frames.rows;
        const std::vector<WindowSpan> spans = enumerate_windows(frames, w);
        const std::vector<oracle::WindowRef> ref =
            oracle::windows_by_clock(frames, w.tau_ms, w.eta_ms, 500);
        if (spans.size() != ref.size()) {
          ok = false;
          break;
        }
        for (std::size_t j = 0; j < spans.size(); ++j) {
          ok = ok && spans[j].first_frame == ref[j].first &&
               spans[j].end_frame == ref[j].end &&
               spans[j].label_frame == ref[j].label;
        }

        const std::vector<LabeledWindow> built =
            build_windows(p.frames, p.labels, w);
        ok = ok && built.size() == spans.size();
        const std::size_t stride = std::max<std::size_t>(1, built.size() / 7);
        for (std::size_t j = 0; j < built.size() && ok; j += stride) {
          ok = ok && built[j].end_frame == spans[j].end_frame;
          ok = ok && built[j].label == p.labels.sed[spans[j].label_frame];
          ok = ok && built[j].agreed == p.labels.agreed[spans[j].label_frame];
          for (std::size_t r = 0; r < w.width_frames() && ok; ++r)
            ok = ok &&
                 std::memcmp(built[j].block.row(r),
                             p.frames.frames.row(spans[j].first_frame + r),
                             sizeof(double) * p.frames.frames.cols) == 0;
        }
        compared += spans.size();
      }
    }
  }
  return {ok, fmt("windows_checked=%zu over 27 geometries x 20 interactions",
                  compared)};
}

// ------------------------------------------------------------- check 5

CheckResult check_stream_batch() {
  testutil::TempDir dir("sed-acc-stream");
  const std::vector<SyntheticInteraction> synth =
      generate_corpus(acceptance_config(20), 88);
  write_corpus_files(synth, dir.str(), 500);
  const Corpus corpus = load_corpus(dir.file("manifest.json"));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);

  std::vector<std::string> test_ids;
  for (std::size_t i = 15; i < prepared.size(); ++i)
    test_ids.push_back(prepared[i].id);
  const FoldPrep fold = preprocess_fold(prepared, test_ids);
  const CorpusManifest manifest = read_manifest(dir.file("manifest.json"));

  struct Setting {
    ModelKind kind;
    std::int64_t tau_ms;
    std::int64_t eta_ms;
  };
  const std::vector<Setting> settings = {
      {ModelKind::kLstm, 5000, 0},
      {ModelKind::kGru, 5000, 2000},
      {ModelKind::kLogReg, 3000, 1000},
  };

  bool ok = true;
  std::size_t decisions_total = 0, mismatches = 0;
  for (const Setting& st : settings) {
    ModelSpec spec;
    spec.kind = st.kind;
    spec.window = WindowConfig{st.tau_ms, st.eta_ms, 500};
    spec.hidden1 = 8;
    spec.hidden2 = 2;
    spec.train.max_epochs = 2;
    spec.train.patience = 2;
    spec.train.batch_size = 64;
    spec.train.seed = 17;
    const TrainedModel model = train_fold_model(corpus.layout, fold, spec);

    for (const CorpusEntry& entry : manifest.entries) {
      const PreparedInteraction* prep = nullptr;
      for (const PreparedInteraction& p : prepared)
        if (p.id == entry.id) prep = &p;
      if (prep == nullptr) {
        ok = false;
        continue;
      }

      FrameSequence frames = prep->frames;
      model.imputation.apply(frames);
      model.normalization.apply(frames);
      const std::vector<LabeledWindow> windows =
          build_windows(frames, prep->labels, model.window);

      const std::vector<StreamSample> feed =
          read_stream_file(dir.file(entry.stream_file));
      const std::vector<Decision> decisions =
          detect_stream(model, corpus.layout, entry.id, feed);

      if (decisions.size() != windows.size()) {
        ok = false;
        continue;
      }
      for (std::size_t i = 0; i < decisions.size(); ++i) {
        ++decisions_total;
        const double batch_p = model.score_window(windows[i].block.data);
        if (decisions[i].p_sed != batch_p ||
            decisions[i].frame_index != windows[i].end_frame)
          ++mismatches;
      }
    }
  }
  ok = ok && mismatches == 0 && decisions_total > 0;
  return {ok, fmt("decisions=%zu mismatches=%zu over 3 settings x 20 "
                  "interactions",
                  decisions_total, mismatches)};
}

// ------------------------------------------------------------- check 6

// Directional reproduction of the published ordering on synthetic data: at a
// 5 s observation span, adding a 1-3 s label lag beats no lag, and the
// recurrent model beats the linear baseline, both by more than the spread
// over three training seeds. Budget: 20 minutes single-threaded.
CheckResult check_trend() {
  const auto t0 = std::chrono::steady_clock::now();

  const Corpus corpus =
      corpus_from_synth(generate_corpus(acceptance_config(120), 42));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  std::vector<std::string> test_ids;
  for (std::size_t i = 0; i < prepared.size(); i += 4)
    test_ids.push_back(prepared[i].id);
  const FoldPrep fold = preprocess_fold(prepared, test_ids);

  const std::vector<std::int64_t> etas = {0, 1000, 2000, 3000};

  // The linear model trains from a zero start with a deterministic solver,
  // so its scores carry no seed dependence: one fit per geometry.
  std::vector<double> auc_linear;
  for (std::int64_t eta : etas) {
    ModelSpec spec;
    spec.kind = ModelKind::kLogReg;
    spec.window = WindowConfig{5000, eta, 500};
    const TrainedModel model = train_fold_model(corpus.layout, fold, spec);
    auc_linear.push_back(evaluate_fold_model(model, fold, 5).eval.auc_full);
  }

  const std::vector<std::uint64_t> seeds = {201, 202, 203};
  std::vector<double> lag_margin, model_margin;
  std::vector<std::vector<double>> auc_lstm_by_seed;
  for (std::uint64_t seed : seeds) {
    std::vector<double> auc_lstm;
    for (std::int64_t eta : etas) {
      ModelSpec spec;
      spec.kind = ModelKind::kLstm;
      spec.window = WindowConfig{5000, eta, 500};
      spec.hidden1 = 16;
      spec.hidden2 = 2;
      spec.train.batch_size = 64;
      spec.train.max_epochs = 8;
      spec.train.patience = 3;
      spec.train.seed = seed;
      const TrainedModel model = train_fold_model(corpus.layout, fold, spec);
      auc_lstm.push_back(evaluate_fold_model(model, fold, 5).eval.auc_full);
    }
    const double lagged =
        (auc_lstm[1] + auc_lstm[2] + auc_lstm[3]) / 3.0;
    lag_margin.push_back(lagged - auc_lstm[0]);
    model_margin.push_back(mean_of(auc_lstm) - mean_of(auc_linear));
    auc_lstm_by_seed.push_back(auc_lstm);
  }

  const double lag_mean = mean_of(lag_margin);
  const double lag_sd = pop_sd_of(lag_margin);
  const double model_mean = mean_of(model_margin);
  const double model_sd = pop_sd_of(model_margin);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const bool ok = lag_mean > 0.0 && lag_mean > lag_sd && model_mean > 0.0 &&
                  model_mean > model_sd && secs < 1200.0;
  return {ok,
          fmt("lag_margin=%.4f (sd %.4f) model_margin=%.4f (sd %.4f) "
              "lstm@eta0=%.3f,%.3f,%.3f linear_mean=%.3f runtime=%.0fs",
              lag_mean, lag_sd, model_mean, model_sd, auc_lstm_by_seed[0][0],
              auc_lstm_by_seed[1][0], auc_lstm_by_seed[2][0],
              mean_of(auc_linear), secs)};
}

// ------------------------------------------------------------- check 7

CheckResult check_merge_effect() {
  std::size_t improved_or_equal = 0;
  double min_delta = 1e9;
  const std::size_t corpora = 50;
  for (std::size_t c = 0; c < corpora; ++c) {
    GeneratorConfig cfg = acceptance_config(8);
    cfg.rate_speech_hz = 20.0;  // only the annotations matter here
    const std::vector<SyntheticInteraction> synth =
        generate_corpus(cfg, 3000 + c);

    std::vector<unsigned char> a_raw, b_raw, a_merged, b_merged;
    for (const SyntheticInteraction& it : synth) {
      const std::size_t frames = frame_count_for(it.duration_ms - 1, 500);
      auto append = [&](std::vector<unsigned char>& dst,
                        const std::vector<unsigned char>& src) {
        dst.insert(dst.end(), src.begin(), src.end());
      };
      append(a_raw, frame_labels(it.annotator_a, frames, 500));
      append(b_raw, frame_labels(it.annotator_b, frames, 500));
      append(a_merged,
             frame_labels(merge_short_gaps(it.annotator_a, 1000), frames, 500));
      append(b_merged,
             frame_labels(merge_short_gaps(it.annotator_b, 1000), frames, 500));
    }
    const double before = cohen_kappa(a_raw, b_raw);
    const double after = cohen_kappa(a_merged, b_merged);
    if (after >= before) ++improved_or_equal;
    min_delta = std::min(min_delta, after - before);
  }
  return {improved_or_equal == corpora,
          fmt("kappa_after>=before on %zu/%zu corpora, min_delta=%+.5f",
              improved_or_equal, corpora, min_delta)};
}

// ------------------------------------------------------------- check 8

CheckResult check_imbalance() {
  bool ok = true;

  std::vector<unsigned char> labels(512, 0);
  labels.insert(labels.end(), 64, 1);
  const std::vector<double> w = class_weights(labels);
  ok = ok && w[0] == 576.0 / 1024.0 && w[1] == 576.0 / 128.0;
  ok = ok && w[0] * 512.0 == w[1] * 64.0;  // equal weighted mass, exactly

  // 90/10 fold with unique majority scores, one of them past the decision
  // threshold. Nine disjoint resamples must use each majority sample exactly
  // once, so the hot one contributes exactly one false positive.
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    std::vector<double> scores;
    std::vector<unsigned char> lab;
    const std::size_t hot = 11 * (seed + 1);
    for (std::size_t i = 0; i < 90; ++i) {
      scores.push_back(i == hot ? 0.9 : 0.4 - static_cast<double>(i) * 0.001);
      lab.push_back(0);
    }
    for (int i = 0; i < 10; ++i) {
      scores.push_back(0.3);
      lab.push_back(1);
    }
    const ResampleEval ev = balanced_resample_eval(scores, lab, seed);
    ok = ok && ev.resamples == 9 && !ev.degenerate;
    ok = ok && ev.pooled.total() == 180;
    ok = ok && ev.pooled.fp == 1 && ev.pooled.tn == 89;
  }

  // A constant classifier must sit at chance on balanced resamples.
  Rng rng(808);
  std::vector<double> scores(100, 0.5);
  std::vector<unsigned char> lab(100, 0);
  for (int i = 0; i < 10; ++i) lab[rng.below(100)] = 1;
  std::size_t pos = 0;
  for (auto v : lab) pos += v;
  while (pos < 10) {
    lab[rng.below(100)] = 1;
    pos = 0;
    for (auto v : lab) pos += v;
  }
  const ResampleEval ev = balanced_resample_eval(scores, lab, 9);
  ok = ok && std::fabs(ev.accuracy_mean - 0.5) <= 0.02;
  ok = ok && ev.auc_full == 0.5;  // all scores tied: exact midrank chance

  return {ok, fmt("w=(%.4f,%.4f) const_acc=%.3f resamples=%zu",
                  w[0], w[1], ev.accuracy_mean, ev.resamples)};
}

// ------------------------------------------------------------- check 9

CheckResult check_determinism() {
  testutil::TempDir dir("sed-acc-det");
  const Corpus corpus =
      corpus_from_synth(generate_corpus(acceptance_config(12), 99));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  std::vector<std::string> test_ids;
  for (std::size_t i = 9; i < prepared.size(); ++i)
    test_ids.push_back(prepared[i].id);
  const FoldPrep fold = preprocess_fold(prepared, test_ids);

  ModelSpec spec;
  spec.kind = ModelKind::kLstm;
  spec.window = WindowConfig{3000, 1000, 500};
  spec.hidden1 = 8;
  spec.hidden2 = 2;
  spec.train.max_epochs = 4;
  spec.train.patience = 2;
  spec.train.batch_size = 64;
  spec.train.seed = 7;

  bool ok = true;

  const TrainedModel m1 = train_fold_model(corpus.layout, fold, spec);
  const TrainedModel m2 = train_fold_model(corpus.layout, fold, spec);
  ok = ok && testutil::params_equal(m1.net_params, m2.net_params);
  ok = ok && m1.train_meta == m2.train_meta;

  const FoldEval e1 = evaluate_fold_model(m1, fold, 31);
  const FoldEval e2 = evaluate_fold_model(m2, fold, 31);
  ok = ok && e1.scores == e2.scores && e1.labels == e2.labels;
  ok = ok && e1.eval.accuracy_mean == e2.eval.accuracy_mean;
  ok = ok && e1.eval.auc_full == e2.eval.auc_full;

  // Persistence: byte-stable files, bit-stable scores.
  const std::string p1 = dir.file("model.json");
  const std::string p2 = dir.file("model-resaved.json");
  save_model(m1, p1);
  const TrainedModel loaded = load_model(p1);
  save_model(loaded, p2);
  ok = ok && testutil::read_file(p1) == testutil::read_file(p2);

  const std::vector<LabeledWindow> windows =
      collect_windows(fold.test, m1.window, true);
  std::size_t score_mismatch = 0;
  for (const LabeledWindow& w : windows)
    if (m1.score_window(w.block.data) != loaded.score_window(w.block.data))
      ++score_mismatch;
  ok = ok && score_mismatch == 0 && !windows.empty();

  ModelSpec lin = spec;
  lin.kind = ModelKind::kLogReg;
  const TrainedModel l1 = train_fold_model(corpus.layout, fold, lin);
  const TrainedModel l2 = train_fold_model(corpus.layout, fold, lin);
  ok = ok && l1.linear.w == l2.linear.w && l1.linear.b == l2.linear.b;

  return {ok, fmt("retrain_identical=%s resave_identical=%s "
                  "loaded_score_mismatches=%zu",
                  testutil::params_equal(m1.net_params, m2.net_params)
                      ? "yes" : "no",
                  testutil::read_file(p1) == testutil::read_file(p2)
                      ? "yes" : "no",
                  score_mismatch)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Check {
    const char* name;
    CheckResult (*fn)();
  };
  const std::vector<Check> checks = {
      {"analytic gradients match central differences", check_gradients},
      {"recurrent cells match scalar oracles", check_cells},
      {"rank metrics match brute-force oracles", check_metrics},
      {"window indexing matches brute-force enumeration",
       check_window_indexing},
      {"streaming decisions bit-identical to batch", check_stream_batch},
      {"label lag and model ordering hold directionally", check_trend},
      {"gap merging does not lower agreement", check_merge_effect},
      {"class weighting and balanced resampling behave", check_imbalance},
      {"seeded runs and saved models reproduce exactly", check_determinism},
  };

  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int v = std::atoi(argv[i]);
    if (v >= 1 && v <= static_cast<int>(checks.size()))
      selected.push_back(static_cast<std::size_t>(v - 1));
  }
  if (selected.empty())
    for (std::size_t i = 0; i < checks.size(); ++i) selected.push_back(i);

  int failures = 0;
  for (std::size_t idx : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = checks[idx].fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] %zu. %s [%.1fs] %s\n", r.ok ? "PASS" : "FAIL", idx + 1,
                checks[idx].name, secs, r.detail.c_str());
    std::fflush(stdout);
    if (!r.ok) ++failures;
  }
  return failures;
}
