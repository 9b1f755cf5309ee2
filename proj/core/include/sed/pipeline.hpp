#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sed/annotation.hpp"
#include "sed/evaluate.hpp"
#include "sed/layout.hpp"
#include "sed/models/logreg.hpp"
#include "sed/models/model_io.hpp"
#include "sed/models/train.hpp"
#include "sed/preprocess.hpp"
#include "sed/stream.hpp"
#include "sed/synth.hpp"
#include "sed/windowing.hpp"

namespace sed {

struct Interaction {
  std::string id;
  std::int64_t duration_ms = 0;
  bool multiparty = false;
  std::vector<StreamSeries> streams;
  std::vector<AnnotationTrack> annotations;  // two tracks expected
};

struct Corpus {
  FeatureLayout layout = FeatureLayout::standard();
  std::int64_t frame_ms = 500;
  std::vector<Interaction> interactions;
};

// In-memory bridge from the generator (no files involved).
Corpus corpus_from_synth(const std::vector<SyntheticInteraction>& synth,
                         std::int64_t frame_ms = 500);

// From a manifest on disk.
Corpus load_corpus(const std::string& manifest_path);

// Pooled frames plus consensus labels for one interaction. Annotator tracks
// are gap-merged before frame labeling.
struct PreparedInteraction {
  std::string id;
  FrameSequence frames;  // pooled, not yet imputed or normalized
  ConsensusLabels labels;
};

std::vector<PreparedInteraction> prepare_corpus(
    const Corpus& corpus, std::int64_t merge_gap_ms = 1000);

// Preprocessing fitted on the training side only, then applied to both
// sides. Window-geometry independent, so one fold preparation serves every
// (span, lag) cell of a sweep.
struct FoldPrep {
  ImputationModel imputation;
  NormalizationModel normalization;
  std::vector<PreparedInteraction> train;
  std::vector<PreparedInteraction> test;
};

FoldPrep preprocess_fold(const std::vector<PreparedInteraction>& all,
                         const std::vector<std::string>& test_ids);

// Windows cut from prepared interactions; training and evaluation keep only
// frames both annotators agree on.
std::vector<LabeledWindow> collect_windows(
    const std::vector<PreparedInteraction>& part, const WindowConfig& wcfg,
    bool agreed_only);

struct ModelSpec {
  ModelKind kind = ModelKind::kLstm;
  WindowConfig window;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 2;
  TrainConfig train;     // used by the network kinds
  LogRegConfig logreg;   // used by the linear kind
};

// Trains on the fold's training windows. Class weights are derived from the
// fold's own label counts, overriding whatever the spec carries.
TrainedModel train_fold_model(const FeatureLayout& layout,
                              const FoldPrep& fold, const ModelSpec& spec);

struct FoldEval {
  ResampleEval eval;
  std::vector<double> scores;
  std::vector<unsigned char> labels;
};

FoldEval evaluate_fold_model(const TrainedModel& model, const FoldPrep& fold,
                             std::uint64_t seed);

// Scores a saved model on a whole corpus using the preprocessing stored in
// the model (nothing is refitted).
FoldEval evaluate_model_on_corpus(const TrainedModel& model,
                                  const Corpus& corpus, std::uint64_t seed);

struct CvResult {
  std::vector<double> fold_auc;
  std::vector<ResampleEval> fold_eval;
  double auc_mean = 0.0;
  double auc_sd = 0.0;  // across folds, population
  double accuracy_mean = 0.0;
  double f1_mean = 0.0;
};

CvResult cross_validate(const Corpus& corpus, const ModelSpec& spec,
                        std::size_t folds, std::uint64_t seed);

struct SweepRequest {
  ModelKind kind = ModelKind::kLstm;
  std::vector<std::int64_t> taus_ms;
  std::vector<std::int64_t> etas_ms;
  std::size_t folds = 3;
  std::uint64_t seed = 1;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 2;
  TrainConfig train;
  LogRegConfig logreg;
};

// Full cross-validated grid over every admissible (span, lag) combination.
SweepTable run_sweep(const Corpus& corpus, const SweepRequest& req);

// Feature contrasts between episode and non-episode frames over the corpus.
std::vector<FeatureContrast> contrast_corpus(const Corpus& corpus);

}  // namespace sed
