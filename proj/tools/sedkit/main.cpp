// sedkit: corpus generation, training, evaluation and online detection for
// engagement-decrease classifiers over multimodal behavior streams.
//
// Every run that produces artifacts also writes a JSON run record (schema
// sed.run.v1) with the configuration, seeds, layout hash and headline
// metrics, so any result can be regenerated from the archive alone. Errors
// exit nonzero with one machine-parsable line: "error: <category>: <detail>".

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sed/annotation.hpp"
#include "sed/detector.hpp"
#include "sed/error.hpp"
#include "sed/evaluate.hpp"
#include "sed/io.hpp"
#include "sed/metrics.hpp"
#include "sed/pipeline.hpp"
#include "sed/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace sed;

namespace {

constexpr const char* kRunSchema = "sed.run.v1";

ModelKind kind_from_name(const std::string& name) {
  if (name == "logreg") return ModelKind::kLogReg;
  if (name == "dnn") return ModelKind::kDnn;
  if (name == "gru") return ModelKind::kGru;
  if (name == "lstm") return ModelKind::kLstm;
  throw ConfigError("unknown model kind: " + name +
                    " (expected logreg, dnn, gru or lstm)");
}

FeatureLayout layout_from_name(const std::string& name) {
  if (name == "standard") return FeatureLayout::standard();
  if (name == "okao") return FeatureLayout::okao();
  throw ConfigError("unknown layout: " + name + " (expected standard or okao)");
}

// Seconds on the half-second frame grid, e.g. "--tau 2.5" -> 2500 ms.
std::int64_t seconds_to_ms(double seconds, const char* flag) {
  const double ms = seconds * 1000.0;
  const std::int64_t rounded = std::llround(ms);
  if (rounded < 0 || std::fabs(ms - static_cast<double>(rounded)) > 1e-6 ||
      rounded % 500 != 0)
    throw ConfigError(std::string(flag) +
                      " must be a non-negative multiple of 0.5 seconds");
  return rounded;
}

// --data accepts the manifest file or the corpus directory holding it.
std::string resolve_manifest(const std::string& data) {
  if (fs::is_directory(data)) return (fs::path(data) / "manifest.json").string();
  return data;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

json base_record(const std::string& command, std::uint64_t seed) {
  json rec;
  rec["schema"] = kRunSchema;
  rec["command"] = command;
  rec["seed"] = seed;
  return rec;
}

json eval_to_json(const ResampleEval& ev) {
  json j;
  j["resamples"] = ev.resamples;
  j["degenerate"] = ev.degenerate;
  j["accuracy_mean"] = ev.accuracy_mean;
  j["accuracy_sd"] = ev.accuracy_sd;
  j["f1_mean"] = ev.f1_mean;
  j["f1_sd"] = ev.f1_sd;
  j["auc"] = ev.auc_full;
  j["positives"] = ev.positives;
  j["negatives"] = ev.negatives;
  j["pooled_confusion"] = {{"tp", ev.pooled.tp},
                           {"fp", ev.pooled.fp},
                           {"fn", ev.pooled.fn},
                           {"tn", ev.pooled.tn}};
  return j;
}

void print_eval(const ResampleEval& ev) {
  std::printf("balanced resamples: %zu%s (%zu positive / %zu negative "
              "windows)\n",
              ev.resamples, ev.degenerate ? " (degenerate)" : "",
              ev.positives, ev.negatives);
  std::printf("accuracy: %.4f +/- %.4f\n", ev.accuracy_mean, ev.accuracy_sd);
  std::printf("f1:       %.4f +/- %.4f\n", ev.f1_mean, ev.f1_sd);
  std::printf("auc:      %.4f\n", ev.auc_full);
  std::printf("pooled confusion: tp=%zu fp=%zu fn=%zu tn=%zu\n", ev.pooled.tp,
              ev.pooled.fp, ev.pooled.fn, ev.pooled.tn);
}

json generator_to_json(const GeneratorConfig& cfg) {
  json j;
  j["interactions"] = cfg.interactions;
  j["duration_mean_s"] = cfg.duration_mean_s;
  j["duration_sd_s"] = cfg.duration_sd_s;
  j["duration_min_s"] = cfg.duration_min_s;
  j["episode_rate_mean"] = cfg.episode_rate_mean;
  j["episode_rate_reference_s"] = cfg.episode_rate_reference_s;
  j["annotator_jitter_sd_ms"] = cfg.annotator_jitter_sd_ms;
  j["flicker_prob"] = cfg.flicker_prob;
  return j;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::string out;
  std::string config;
  std::uint64_t seed = 1;
  std::size_t count = 0;  // 0: keep the config value
  std::int64_t frame_ms = 500;
};

void run_synth(const SynthArgs& a) {
  GeneratorConfig cfg;
  if (!a.config.empty()) cfg = load_generator_config(a.config);
  if (a.count > 0) cfg.interactions = a.count;
  cfg.validate();

  const std::vector<SyntheticInteraction> corpus =
      generate_corpus(cfg, a.seed);
  fs::create_directories(a.out);
  write_corpus_files(corpus, a.out, a.frame_ms);
  save_generator_config(cfg, (fs::path(a.out) / "genconfig.json").string());

  std::size_t segments = 0;
  std::int64_t total_ms = 0;
  for (const SyntheticInteraction& it : corpus) {
    segments += it.truth.size();
    total_ms += it.duration_ms;
  }

  json rec = base_record("synth", a.seed);
  rec["config"] = generator_to_json(cfg);
  rec["frame_ms"] = a.frame_ms;
  rec["layout_hash"] = FeatureLayout::standard().hash();
  rec["interactions"] = corpus.size();
  rec["episodes"] = segments;
  rec["total_duration_ms"] = total_ms;
  write_json_file((fs::path(a.out) / "run.json").string(), rec);

  std::printf("wrote %zu interactions (%.1f min, %zu episodes) to %s\n",
              corpus.size(), static_cast<double>(total_ms) / 60000.0,
              segments, a.out.c_str());
}

// ------------------------------------------------------------------ train

struct TrainArgs {
  std::string data;
  std::string out;
  std::string kind = "lstm";
  double tau_s = 5.0;
  double eta_s = 0.0;
  std::size_t folds = 3;
  std::uint64_t seed = 1;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 2;
  std::size_t epochs = 100;
  std::size_t batch = 32;
  double lr = 1e-3;
  double dropout = 0.1;
  std::size_t patience = 5;
  double inverse_reg = 1.0;
};

ModelSpec spec_from_args(const TrainArgs& a) {
  ModelSpec spec;
  spec.kind = kind_from_name(a.kind);
  spec.window = WindowConfig{seconds_to_ms(a.tau_s, "--tau"),
                             seconds_to_ms(a.eta_s, "--eta"), 500};
  spec.window.validate();
  spec.hidden1 = a.hidden1;
  spec.hidden2 = a.hidden2;
  spec.train.learning_rate = a.lr;
  spec.train.dropout = a.dropout;
  spec.train.batch_size = a.batch;
  spec.train.max_epochs = a.epochs;
  spec.train.patience = a.patience;
  spec.train.seed = a.seed;
  spec.logreg.inverse_reg = a.inverse_reg;
  return spec;
}

void run_train(const TrainArgs& a) {
  const Corpus corpus = load_corpus(resolve_manifest(a.data));
  const ModelSpec spec = spec_from_args(a);

  json rec = base_record("train", a.seed);
  rec["data"] = resolve_manifest(a.data);
  rec["model_kind"] = a.kind;
  rec["tau_ms"] = spec.window.tau_ms;
  rec["eta_ms"] = spec.window.eta_ms;
  rec["layout_hash"] = corpus.layout.hash();

  if (a.folds > 0) {
    const CvResult cv = cross_validate(corpus, spec, a.folds, a.seed);
    std::printf("%zu-fold cross-validation (%s, tau=%.1fs, eta=%.1fs)\n",
                a.folds, a.kind.c_str(), a.tau_s, a.eta_s);
    for (std::size_t f = 0; f < cv.fold_auc.size(); ++f)
      std::printf("  fold %zu: auc=%.4f acc=%.4f f1=%.4f\n", f,
                  cv.fold_auc[f], cv.fold_eval[f].accuracy_mean,
                  cv.fold_eval[f].f1_mean);
    std::printf("  mean:   auc=%.4f +/- %.4f acc=%.4f f1=%.4f\n", cv.auc_mean,
                cv.auc_sd, cv.accuracy_mean, cv.f1_mean);
    json cvj;
    cvj["folds"] = a.folds;
    cvj["auc_mean"] = cv.auc_mean;
    cvj["auc_sd"] = cv.auc_sd;
    cvj["accuracy_mean"] = cv.accuracy_mean;
    cvj["f1_mean"] = cv.f1_mean;
    cvj["fold_auc"] = cv.fold_auc;
    rec["cross_validation"] = cvj;
  }

  // The deployable model trains on every interaction; early stopping still
  // holds out validation interactions internally.
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  const FoldPrep all = preprocess_fold(prepared, {});
  const TrainedModel model = train_fold_model(corpus.layout, all, spec);
  save_model(model, a.out);

  rec["train_meta"] = model.train_meta;
  rec["model_file"] = a.out;
  write_json_file(a.out + ".run.json", rec);
  std::printf("model written to %s\n", a.out.c_str());
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string model;
  std::string data;
  std::string out;
  std::uint64_t seed = 1;
};

void run_eval(const EvalArgs& a) {
  const TrainedModel model = load_model(a.model);
  const Corpus corpus = load_corpus(resolve_manifest(a.data));
  const FoldEval ev = evaluate_model_on_corpus(model, corpus, a.seed);

  std::printf("%s on %s (%zu interactions)\n",
              model_kind_name(model.kind), a.data.c_str(),
              corpus.interactions.size());
  print_eval(ev.eval);

  if (!a.out.empty()) {
    json rec = base_record("eval", a.seed);
    rec["model_file"] = a.model;
    rec["data"] = resolve_manifest(a.data);
    rec["model_kind"] = model_kind_name(model.kind);
    rec["tau_ms"] = model.window.tau_ms;
    rec["eta_ms"] = model.window.eta_ms;
    rec["layout_hash"] = model.layout_hash;
    rec["metrics"] = eval_to_json(ev.eval);
    write_json_file(a.out, rec);
    std::printf("report written to %s\n", a.out.c_str());
  }
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
  std::string data;
  std::string out;
  std::string kind = "lstm";
  std::vector<double> taus_s = {1, 2, 3, 4, 5, 6};
  std::vector<double> etas_s = {0, 1, 2, 3};
  std::size_t folds = 3;
  std::uint64_t seed = 1;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 2;
  std::size_t epochs = 100;
  std::size_t batch = 32;
  std::size_t patience = 5;
};

void run_sweep_cmd(const SweepArgs& a) {
  const Corpus corpus = load_corpus(resolve_manifest(a.data));
  SweepRequest req;
  req.kind = kind_from_name(a.kind);
  for (double t : a.taus_s) req.taus_ms.push_back(seconds_to_ms(t, "--taus"));
  for (double e : a.etas_s) req.etas_ms.push_back(seconds_to_ms(e, "--etas"));
  req.folds = a.folds;
  req.seed = a.seed;
  req.hidden1 = a.hidden1;
  req.hidden2 = a.hidden2;
  req.train.max_epochs = a.epochs;
  req.train.batch_size = a.batch;
  req.train.patience = a.patience;
  req.train.seed = a.seed;

  const SweepTable table = run_sweep(corpus, req);
  write_sweep_csv(table, a.out);
  std::fputs(format_sweep_table(table).c_str(), stdout);

  json rec = base_record("sweep", a.seed);
  rec["data"] = resolve_manifest(a.data);
  rec["model_kind"] = a.kind;
  rec["folds"] = a.folds;
  rec["layout_hash"] = corpus.layout.hash();
  json cells = json::array();
  for (const SweepCell& c : table.cells)
    cells.push_back({{"tau_ms", c.tau_ms},
                     {"eta_ms", c.eta_ms},
                     {"auc_mean", c.auc_mean},
                     {"auc_sd", c.auc_sd},
                     {"accuracy_mean", c.accuracy_mean},
                     {"f1_mean", c.f1_mean}});
  rec["cells"] = cells;
  rec["csv_file"] = a.out;
  write_json_file(a.out + ".run.json", rec);
  std::printf("grid written to %s (%zu cells)\n", a.out.c_str(),
              table.cells.size());
}

// ------------------------------------------------------------------ detect

struct DetectArgs {
  std::string model;
  std::string stream;
  std::string out;
  std::string id = "stream";
  std::string layout = "standard";
  bool renorm_clock = false;
};

void run_detect(const DetectArgs& a) {
  const TrainedModel model = load_model(a.model);
  const FeatureLayout layout = layout_from_name(a.layout);
  std::vector<StreamSample> samples = read_stream_file(a.stream);
  if (a.renorm_clock) normalize_clock(samples);

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Decision> decisions =
      detect_stream(model, layout, a.id, samples);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const std::string model_name = fs::path(a.model).stem().string();
  write_decisions(a.out, decisions, model_name);

  std::size_t positive = 0;
  for (const Decision& d : decisions) positive += d.label;
  json rec = base_record("detect", 0);
  rec["model_file"] = a.model;
  rec["stream_file"] = a.stream;
  rec["interaction"] = a.id;
  rec["layout_hash"] = model.layout_hash;
  rec["samples"] = samples.size();
  rec["decisions"] = decisions.size();
  rec["positives"] = positive;
  write_json_file(a.out + ".run.json", rec);

  std::printf("%zu decisions (%zu flagged) from %zu samples -> %s\n",
              decisions.size(), positive, samples.size(), a.out.c_str());
  if (!decisions.empty())
    std::printf("compute: %.1f us per decision\n",
                secs * 1e6 / static_cast<double>(decisions.size()));
}

// ------------------------------------------------------------------ kappa

struct KappaArgs {
  std::string data;
  std::string out;
  double merge_gap_s = 1.0;
};

void run_kappa(const KappaArgs& a) {
  const Corpus corpus = load_corpus(resolve_manifest(a.data));
  const std::int64_t gap_ms = std::llround(a.merge_gap_s * 1000.0);
  if (gap_ms < 0) throw ConfigError("--merge-gap must be non-negative");

  std::vector<unsigned char> a_raw, b_raw, a_merged, b_merged;
  std::vector<AnnotationTrack> all_tracks;
  std::int64_t total_ms = 0, track_ms = 0;
  std::printf("%-16s %10s %10s\n", "interaction", "kappa", "merged");
  for (const Interaction& it : corpus.interactions) {
    if (it.annotations.size() < 2)
      throw ValidationError("interaction " + it.id +
                            " needs two annotator tracks");
    const std::size_t frames =
        frame_count_for(it.duration_ms - 1, corpus.frame_ms);
    const auto la = frame_labels(it.annotations[0], frames, corpus.frame_ms);
    const auto lb = frame_labels(it.annotations[1], frames, corpus.frame_ms);
    const auto ma = frame_labels(merge_short_gaps(it.annotations[0], gap_ms),
                                 frames, corpus.frame_ms);
    const auto mb = frame_labels(merge_short_gaps(it.annotations[1], gap_ms),
                                 frames, corpus.frame_ms);
    std::printf("%-16s %10.4f %10.4f\n", it.id.c_str(), cohen_kappa(la, lb),
                cohen_kappa(ma, mb));
    a_raw.insert(a_raw.end(), la.begin(), la.end());
    b_raw.insert(b_raw.end(), lb.begin(), lb.end());
    a_merged.insert(a_merged.end(), ma.begin(), ma.end());
    b_merged.insert(b_merged.end(), mb.begin(), mb.end());
    for (const AnnotationTrack& t : it.annotations) {
      all_tracks.push_back(t);
      track_ms += it.duration_ms;  // each track covers the interaction once
    }
    total_ms += it.duration_ms;
  }

  const double k_raw = cohen_kappa(a_raw, b_raw);
  const double k_merged = cohen_kappa(a_merged, b_merged);
  std::printf("%-16s %10.4f %10.4f\n", "corpus", k_raw, k_merged);

  const AnnotationStats stats = annotation_stats(all_tracks, track_ms);
  std::printf("segments: %zu, duration %.1f +/- %.1f s, flagged fraction "
              "%.3f\n",
              stats.segment_count, stats.duration_mean_s, stats.duration_sd_s,
              stats.sed_time_fraction);

  if (!a.out.empty()) {
    json rec = base_record("kappa", 0);
    rec["data"] = resolve_manifest(a.data);
    rec["merge_gap_ms"] = gap_ms;
    rec["kappa"] = k_raw;
    rec["kappa_merged"] = k_merged;
    rec["segments"] = stats.segment_count;
    rec["sed_time_fraction"] = stats.sed_time_fraction;
    write_json_file(a.out, rec);
    std::printf("report written to %s\n", a.out.c_str());
  }
}

// ---------------------------------------------------------------- contrast

struct ContrastArgs {
  std::string data;
  std::string out;
  std::size_t top = 15;
};

void run_contrast(const ContrastArgs& a) {
  const Corpus corpus = load_corpus(resolve_manifest(a.data));
  const std::vector<FeatureContrast> contrasts = contrast_corpus(corpus);

  std::printf("%-28s %10s %10s %9s %12s %s\n", "feature", "flagged",
              "engaged", "t", "p", "sig");
  const std::size_t n = std::min(a.top, contrasts.size());
  for (std::size_t i = 0; i < n; ++i) {
    const FeatureContrast& fc = contrasts[i];
    std::printf("%-28s %10.3f %10.3f %9.2f %12.3e %s\n", fc.name.c_str(),
                fc.stats.mean_a, fc.stats.mean_b, fc.stats.t, fc.stats.p,
                fc.stars.c_str());
  }

  if (!a.out.empty()) {
    json rec = base_record("contrast", 0);
    rec["data"] = resolve_manifest(a.data);
    rec["layout_hash"] = corpus.layout.hash();
    json rows = json::array();
    for (const FeatureContrast& fc : contrasts)
      rows.push_back({{"feature", fc.name},
                      {"mean_flagged", fc.stats.mean_a},
                      {"mean_engaged", fc.stats.mean_b},
                      {"t", fc.stats.t},
                      {"p", fc.stats.p},
                      {"stars", fc.stars}});
    rec["contrasts"] = rows;
    write_json_file(a.out, rec);
    std::printf("report written to %s\n", a.out.c_str());
  }
}

// ------------------------------------------------------------------ stats

struct StatsArgs {
  std::string data;
  std::string out;
};

void run_stats(const StatsArgs& a) {
  const Corpus corpus = load_corpus(resolve_manifest(a.data));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);

  std::int64_t total_ms = 0;
  std::size_t multiparty = 0, samples = 0;
  for (const Interaction& it : corpus.interactions) {
    total_ms += it.duration_ms;
    multiparty += it.multiparty ? 1 : 0;
    for (const StreamSeries& s : it.streams) samples += s.samples.size();
  }
  std::size_t frames = 0, flagged = 0, agreed = 0;
  for (const PreparedInteraction& p : prepared) {
    frames += p.labels.sed.size();
    for (std::size_t i = 0; i < p.labels.sed.size(); ++i) {
      flagged += p.labels.sed[i];
      agreed += p.labels.agreed[i];
    }
  }

  std::printf("interactions:    %zu (%zu multiparty)\n",
              corpus.interactions.size(), multiparty);
  std::printf("total duration:  %.1f min\n",
              static_cast<double>(total_ms) / 60000.0);
  std::printf("raw samples:     %zu\n", samples);
  std::printf("pooled frames:   %zu (%lld ms each, %zu features)\n", frames,
              static_cast<long long>(corpus.frame_ms),
              corpus.layout.pooled_dim());
  std::printf("flagged frames:  %zu (%.1f%% of consensus)\n", flagged,
              frames ? 100.0 * static_cast<double>(flagged) /
                           static_cast<double>(frames)
                     : 0.0);
  std::printf("agreed frames:   %zu (%.1f%%)\n", agreed,
              frames ? 100.0 * static_cast<double>(agreed) /
                           static_cast<double>(frames)
                     : 0.0);

  if (!a.out.empty()) {
    json rec = base_record("stats", 0);
    rec["data"] = resolve_manifest(a.data);
    rec["layout_hash"] = corpus.layout.hash();
    rec["interactions"] = corpus.interactions.size();
    rec["multiparty"] = multiparty;
    rec["total_duration_ms"] = total_ms;
    rec["raw_samples"] = samples;
    rec["frames"] = frames;
    rec["flagged_frames"] = flagged;
    rec["agreed_frames"] = agreed;
    write_json_file(a.out, rec);
    std::printf("report written to %s\n", a.out.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"engagement-decrease detection toolkit"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a labeled synthetic interaction corpus");
  synth->add_option("--out", synth_args.out, "output corpus directory")
      ->required();
  synth->add_option("--seed", synth_args.seed, "generator seed");
  synth->add_option("--count", synth_args.count,
                    "number of interactions (overrides --config)");
  synth->add_option("--config", synth_args.config,
                    "generator settings JSON (sed.genconfig.v1)");
  synth->add_option("--frame-ms", synth_args.frame_ms,
                    "integration frame period in ms");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand(
      "train", "cross-validate and fit a classifier on a corpus");
  train->add_option("--data", train_args.data, "corpus manifest or directory")
      ->required();
  train->add_option("--out", train_args.out, "model file to write")
      ->required();
  train->add_option("--model", train_args.kind,
                    "classifier kind: logreg, dnn, gru or lstm");
  train->add_option("--tau", train_args.tau_s, "observation span in seconds");
  train->add_option("--eta", train_args.eta_s, "label lag in seconds");
  train->add_option("--folds", train_args.folds,
                    "cross-validation folds (0 skips the estimate)");
  train->add_option("--seed", train_args.seed, "training seed");
  train->add_option("--hidden1", train_args.hidden1, "first layer width");
  train->add_option("--hidden2", train_args.hidden2, "second layer width");
  train->add_option("--epochs", train_args.epochs, "epoch budget");
  train->add_option("--batch", train_args.batch, "minibatch size");
  train->add_option("--lr", train_args.lr, "learning rate");
  train->add_option("--dropout", train_args.dropout, "feed-forward dropout");
  train->add_option("--patience", train_args.patience,
                    "early-stopping patience in epochs");
  train->add_option("--c", train_args.inverse_reg,
                    "inverse regularization (logreg)");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "score a saved model on a corpus with balanced resampling");
  eval->add_option("--model", eval_args.model, "model file")->required();
  eval->add_option("--data", eval_args.data, "corpus manifest or directory")
      ->required();
  eval->add_option("--seed", eval_args.seed, "resampling seed");
  eval->add_option("--out", eval_args.out, "report JSON to write");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "cross-validated grid over window span and label lag");
  sweep->add_option("--data", sweep_args.data, "corpus manifest or directory")
      ->required();
  sweep->add_option("--out", sweep_args.out, "grid CSV to write")->required();
  sweep->add_option("--model", sweep_args.kind, "classifier kind");
  sweep->add_option("--taus", sweep_args.taus_s,
                    "observation spans in seconds")
      ->delimiter(',');
  sweep->add_option("--etas", sweep_args.etas_s, "label lags in seconds")
      ->delimiter(',');
  sweep->add_option("--folds", sweep_args.folds, "cross-validation folds");
  sweep->add_option("--seed", sweep_args.seed, "seed");
  sweep->add_option("--hidden1", sweep_args.hidden1, "first layer width");
  sweep->add_option("--hidden2", sweep_args.hidden2, "second layer width");
  sweep->add_option("--epochs", sweep_args.epochs, "epoch budget");
  sweep->add_option("--batch", sweep_args.batch, "minibatch size");
  sweep->add_option("--patience", sweep_args.patience,
                    "early-stopping patience");

  DetectArgs detect_args;
  CLI::App* detect = app.add_subcommand(
      "detect", "replay a sample feed through the online detector");
  detect->add_option("--model", detect_args.model, "model file")->required();
  detect->add_option("--stream", detect_args.stream, "sample JSONL feed")
      ->required();
  detect->add_option("--out", detect_args.out, "decision JSONL to write")
      ->required();
  detect->add_option("--id", detect_args.id, "interaction id for the log");
  detect->add_option("--layout", detect_args.layout,
                     "feature layout: standard or okao");
  detect->add_flag("--normalize-clock", detect_args.renorm_clock,
                   "shift timestamps so the feed starts at zero");

  KappaArgs kappa_args;
  CLI::App* kappa = app.add_subcommand(
      "kappa", "inter-annotator agreement before and after gap merging");
  kappa->add_option("--data", kappa_args.data, "corpus manifest or directory")
      ->required();
  kappa->add_option("--merge-gap", kappa_args.merge_gap_s,
                    "merge gaps shorter than this many seconds");
  kappa->add_option("--out", kappa_args.out, "report JSON to write");

  ContrastArgs contrast_args;
  CLI::App* contrast = app.add_subcommand(
      "contrast", "rank features separating flagged from engaged frames");
  contrast->add_option("--data", contrast_args.data,
                       "corpus manifest or directory")
      ->required();
  contrast->add_option("--top", contrast_args.top, "rows to print");
  contrast->add_option("--out", contrast_args.out, "report JSON to write");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand(
      "stats", "corpus summary: durations, frames, labels, agreement");
  stats->add_option("--data", stats_args.data, "corpus manifest or directory")
      ->required();
  stats->add_option("--out", stats_args.out, "report JSON to write");

  try {
    app.parse(argc, argv);
    if (synth->parsed()) run_synth(synth_args);
    if (train->parsed()) run_train(train_args);
    if (eval->parsed()) run_eval(eval_args);
    if (sweep->parsed()) run_sweep_cmd(sweep_args);
    if (detect->parsed()) run_detect(detect_args);
    if (kappa->parsed()) run_kappa(kappa_args);
    if (contrast->parsed()) run_contrast(contrast_args);
    if (stats->parsed()) run_stats(stats_args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "error: usage: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.category().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
  return 0;
}
