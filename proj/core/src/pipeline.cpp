#include "sed/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>

#include "sed/error.hpp"
#include "sed/io.hpp"

namespace sed {

namespace {

namespace fs = std::filesystem;

std::vector<StreamSeries> split_by_stream(
    const std::vector<StreamSample>& samples) {
  std::vector<StreamSeries> series(kStreamCount);
  for (std::size_t i = 0; i < kStreamCount; ++i)
    series[i].stream = static_cast<StreamId>(i);
  for (const StreamSample& s : samples)
    series[static_cast<std::size_t>(s.stream)].samples.push_back(s);
  return series;
}

std::int64_t last_timestamp(const std::vector<StreamSeries>& streams) {
  std::int64_t last = -1;
  for (const StreamSeries& s : streams)
    for (const StreamSample& sample : s.samples)
      last = std::max(last, sample.t_ms);
  return last;
}

}  // namespace

Corpus corpus_from_synth(const std::vector<SyntheticInteraction>& synth,
                         std::int64_t frame_ms) {
  Corpus corpus;
  corpus.frame_ms = frame_ms;
  for (const SyntheticInteraction& s : synth) {
    Interaction it;
    it.id = s.id;
    it.duration_ms = s.duration_ms;
    it.multiparty = s.multiparty;
    it.streams = s.streams;
    it.annotations = {s.annotator_a, s.annotator_b};
    corpus.interactions.push_back(std::move(it));
  }
  return corpus;
}

Corpus load_corpus(const std::string& manifest_path) {
  const CorpusManifest manifest = read_manifest(manifest_path);
  if (manifest.layout != "standard")
    throw ValidationError("unsupported corpus layout: " + manifest.layout);

  const fs::path base = fs::path(manifest_path).parent_path();
  Corpus corpus;
  corpus.frame_ms = manifest.frame_ms;
  for (const CorpusEntry& e : manifest.entries) {
    Interaction it;
    it.id = e.id;
    it.duration_ms = e.duration_ms;
    it.multiparty = e.multiparty;
    it.streams = split_by_stream(
        read_stream_file((base / e.stream_file).string()));
    it.annotations = read_annotation_file((base / e.annotation_file).string());
    if (it.annotations.size() < 2)
      throw ValidationError("interaction " + e.id +
                            " needs two annotator tracks");
    corpus.interactions.push_back(std::move(it));
  }
  return corpus;
}

std::vector<PreparedInteraction> prepare_corpus(const Corpus& corpus,
                                                std::int64_t merge_gap_ms) {
  std::vector<PreparedInteraction> out;
  for (const Interaction& it : corpus.interactions) {
    if (it.annotations.size() < 2)
      throw ValidationError("interaction " + it.id +
                            " needs two annotator tracks");

    const std::int64_t last = last_timestamp(it.streams);
    if (last < 0) continue;  // no samples at all
    const std::size_t frames = frame_count_for(last, corpus.frame_ms);

    PreparedInteraction p;
    p.id = it.id;
    p.frames =
        align_streams(corpus.layout, it.streams, frames, corpus.frame_ms, it.id);

    const AnnotationTrack a =
        merge_short_gaps(it.annotations[0], merge_gap_ms);
    const AnnotationTrack b =
        merge_short_gaps(it.annotations[1], merge_gap_ms);
    p.labels = combine_labels(frame_labels(a, frames, corpus.frame_ms),
                              frame_labels(b, frames, corpus.frame_ms));
    out.push_back(std::move(p));
  }
  if (out.empty()) throw ValidationError("corpus has no usable interactions");
  return out;
}

FoldPrep preprocess_fold(const std::vector<PreparedInteraction>& all,
                         const std::vector<std::string>& test_ids) {
  FoldPrep fold;
  for (const PreparedInteraction& p : all) {
    const bool is_test = std::find(test_ids.begin(), test_ids.end(), p.id) !=
                         test_ids.end();
    (is_test ? fold.test : fold.train).push_back(p);
  }
  if (fold.train.empty())
    throw ValidationError("fold has no training interactions");

  std::vector<const FrameSequence*> train_seqs;
  for (const PreparedInteraction& p : fold.train)
    train_seqs.push_back(&p.frames);
  fold.imputation = ImputationModel::fit(train_seqs);
  fold.normalization = [&] {
    // Normalization statistics are computed on imputed training frames, so
    // imputation must run first on a scratch copy.
    std::vector<FrameSequence> filled;
    filled.reserve(fold.train.size());
    for (const PreparedInteraction& p : fold.train) {
      FrameSequence f = p.frames;
      fold.imputation.apply(f);
      filled.push_back(std::move(f));
    }
    std::vector<const FrameSequence*> ptrs;
    for (const FrameSequence& f : filled) ptrs.push_back(&f);
    return NormalizationModel::fit(ptrs);
  }();

  for (PreparedInteraction& p : fold.train) {
    fold.imputation.apply(p.frames);
    fold.normalization.apply(p.frames);
  }
  for (PreparedInteraction& p : fold.test) {
    fold.imputation.apply(p.frames);
    fold.normalization.apply(p.frames);
  }
  return fold;
}

std::vector<LabeledWindow> collect_windows(
    const std::vector<PreparedInteraction>& part, const WindowConfig& wcfg,
    bool agreed_only) {
  std::vector<LabeledWindow> out;
  for (const PreparedInteraction& p : part) {
    std::vector<LabeledWindow> w = build_windows(p.frames, p.labels, wcfg);
    for (LabeledWindow& lw : w) {
      if (agreed_only && !lw.agreed) continue;
      out.push_back(std::move(lw));
    }
  }
  return out;
}

TrainedModel train_fold_model(const FeatureLayout& layout,
                              const FoldPrep& fold, const ModelSpec& spec) {
  spec.window.validate();
  std::vector<LabeledWindow> windows =
      collect_windows(fold.train, spec.window, true);
  if (windows.empty())
    throw ValidationError("no agreed training windows in this fold");

  std::vector<unsigned char> labels(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) labels[i] = windows[i].label;
  const std::vector<double> weights = class_weights(labels);

  TrainedModel model;
  model.kind = spec.kind;
  model.window = spec.window;
  model.layout_hash = layout.hash();
  model.imputation = fold.imputation;
  model.normalization = fold.normalization;
  model.train_meta["train_windows"] = static_cast<double>(windows.size());

  if (spec.kind == ModelKind::kLogReg) {
    LogRegConfig lrc = spec.logreg;
    lrc.class_weights = weights;

    const std::size_t width = spec.window.width_frames() * layout.pooled_dim();
    RowMatrix x(windows.size(), width);
    for (std::size_t r = 0; r < windows.size(); ++r)
      std::memcpy(x.row(r), windows[r].block.data.data(),
                  width * sizeof(double));

    LogRegReport rep;
    model.linear = train_logreg(x, labels, lrc, &rep);
    model.train_meta["iterations"] = static_cast<double>(rep.iterations);
    model.train_meta["final_loss"] = rep.final_loss;
    model.train_meta["grad_norm"] = rep.grad_norm;
    model.train_meta["converged"] = rep.converged ? 1.0 : 0.0;
  } else {
    NetworkConfig ncfg;
    ncfg.kind = spec.kind;
    ncfg.frames = spec.window.width_frames();
    ncfg.frame_dim = layout.pooled_dim();
    ncfg.hidden1 = spec.hidden1;
    ncfg.hidden2 = spec.hidden2;

    TrainConfig tc = spec.train;
    tc.class_weights = weights;

    TrainedNetwork tn = train_network(ncfg, windows, tc);
    model.net_config = tn.config;
    model.net_params = std::move(tn.params);
    model.train_meta["epochs_run"] =
        static_cast<double>(tn.report.epochs_run);
    model.train_meta["best_epoch"] = static_cast<double>(tn.report.best_epoch);
    model.train_meta["best_val_accuracy"] = tn.report.best_val_accuracy;
    model.train_meta["seed"] = static_cast<double>(tc.seed);
  }
  return model;
}

namespace {

FoldEval score_windows(const TrainedModel& model,
                       const std::vector<LabeledWindow>& windows,
                       std::uint64_t seed) {
  if (windows.empty())
    throw ValidationError("no agreed windows to evaluate");
  FoldEval fe;
  fe.scores.reserve(windows.size());
  fe.labels.reserve(windows.size());
  std::vector<double> flat;
  for (const LabeledWindow& w : windows) {
    flat.assign(w.block.data.begin(), w.block.data.end());
    fe.scores.push_back(model.score_window(flat));
    fe.labels.push_back(w.label);
  }
  fe.eval = balanced_resample_eval(fe.scores, fe.labels, seed);
  return fe;
}

}  // namespace

FoldEval evaluate_fold_model(const TrainedModel& model, const FoldPrep& fold,
                             std::uint64_t seed) {
  return score_windows(model, collect_windows(fold.test, model.window, true),
                       seed);
}

FoldEval evaluate_model_on_corpus(const TrainedModel& model,
                                  const Corpus& corpus, std::uint64_t seed) {
  if (corpus.layout.hash() != model.layout_hash)
    throw ValidationError("model was trained on a different feature layout");
  if (corpus.frame_ms != model.window.frame_ms)
    throw ValidationError("corpus frame period differs from the model's");

  std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  for (PreparedInteraction& p : prepared) {
    model.imputation.apply(p.frames);
    model.normalization.apply(p.frames);
  }
  return score_windows(model, collect_windows(prepared, model.window, true),
                       seed);
}

CvResult cross_validate(const Corpus& corpus, const ModelSpec& spec,
                        std::size_t folds, std::uint64_t seed) {
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);

  std::vector<std::string> ids;
  for (const PreparedInteraction& p : prepared) ids.push_back(p.id);
  const FoldPlan plan = make_folds(ids, folds, seed);

  CvResult cv;
  double acc_sum = 0.0, f1_sum = 0.0;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    FoldPrep fold = preprocess_fold(prepared, plan.folds[f]);

    ModelSpec fold_spec = spec;
    fold_spec.train.seed = Rng::derive(seed, 0xf01d0000ULL + f);
    const TrainedModel model =
        train_fold_model(corpus.layout, fold, fold_spec);
    const FoldEval fe =
        evaluate_fold_model(model, fold, Rng::derive(seed, 0xe7a10000ULL + f));

    cv.fold_auc.push_back(fe.eval.auc_full);
    cv.fold_eval.push_back(fe.eval);
    acc_sum += fe.eval.accuracy_mean;
    f1_sum += fe.eval.f1_mean;
  }

  const double n = static_cast<double>(cv.fold_auc.size());
  for (double a : cv.fold_auc) cv.auc_mean += a;
  cv.auc_mean /= n;
  double ss = 0.0;
  for (double a : cv.fold_auc) ss += (a - cv.auc_mean) * (a - cv.auc_mean);
  cv.auc_sd = std::sqrt(ss / n);
  cv.accuracy_mean = acc_sum / n;
  cv.f1_mean = f1_sum / n;
  return cv;
}

SweepTable run_sweep(const Corpus& corpus, const SweepRequest& req) {
  if (req.taus_ms.empty() || req.etas_ms.empty())
    throw ConfigError("sweep needs at least one span and one lag");

  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  std::vector<std::string> ids;
  for (const PreparedInteraction& p : prepared) ids.push_back(p.id);
  const FoldPlan plan = make_folds(ids, req.folds, req.seed);

  std::vector<FoldPrep> folds;
  folds.reserve(plan.folds.size());
  for (const std::vector<std::string>& test_ids : plan.folds)
    folds.push_back(preprocess_fold(prepared, test_ids));

  SweepTable table;
  table.kind = req.kind;
  for (std::int64_t tau : req.taus_ms) {
    for (std::int64_t eta : req.etas_ms) {
      if (eta > tau) continue;  // label frame would leave the window

      ModelSpec spec;
      spec.kind = req.kind;
      spec.window.tau_ms = tau;
      spec.window.eta_ms = eta;
      spec.window.frame_ms = corpus.frame_ms;
      spec.hidden1 = req.hidden1;
      spec.hidden2 = req.hidden2;
      spec.train = req.train;
      spec.logreg = req.logreg;

      SweepCell cell;
      cell.tau_ms = tau;
      cell.eta_ms = eta;

      std::vector<double> aucs;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        ModelSpec fold_spec = spec;
        fold_spec.train.seed = Rng::derive(req.seed, 0xf01d0000ULL + f);
        const TrainedModel model =
            train_fold_model(corpus.layout, folds[f], fold_spec);
        const FoldEval fe = evaluate_fold_model(
            model, folds[f], Rng::derive(req.seed, 0xe7a10000ULL + f));
        aucs.push_back(fe.eval.auc_full);
        cell.accuracy_mean += fe.eval.accuracy_mean;
        cell.f1_mean += fe.eval.f1_mean;
      }
      cell.folds = aucs.size();
      const double n = static_cast<double>(aucs.size());
      for (double a : aucs) cell.auc_mean += a;
      cell.auc_mean /= n;
      double ss = 0.0;
      for (double a : aucs) ss += (a - cell.auc_mean) * (a - cell.auc_mean);
      cell.auc_sd = std::sqrt(ss / n);
      cell.accuracy_mean /= n;
      cell.f1_mean /= n;
      table.cells.push_back(cell);
    }
  }
  return table;
}

std::vector<FeatureContrast> contrast_corpus(const Corpus& corpus) {
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  std::vector<const FrameSequence*> seqs;
  std::vector<const std::vector<unsigned char>*> labels;
  for (const PreparedInteraction& p : prepared) {
    seqs.push_back(&p.frames);
    labels.push_back(&p.labels.sed);
  }
  return behavior_contrast(seqs, labels, corpus.layout);
}

}  // namespace sed
