#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "sed/detector.hpp"
#include "sed/error.hpp"
#include "sed/evaluate.hpp"
#include "sed/io.hpp"
#include "sed/pipeline.hpp"
#include "sed/synth.hpp"
#include "support/testutil.hpp"

using namespace sed;

namespace {

// Small fast settings for tests: short interactions, a few episodes each.
GeneratorConfig small_config() {
  GeneratorConfig cfg;
  cfg.interactions = 4;
  cfg.duration_mean_s = 60.0;
  cfg.duration_sd_s = 15.0;
  cfg.duration_min_s = 45.0;
  cfg.episode_rate_reference_s = 120.0;
  cfg.rate_speech_hz = 25.0;
  return cfg;
}

bool samples_equal(const StreamSample& a, const StreamSample& b) {
  if (a.t_ms != b.t_ms || a.stream != b.stream) return false;
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const bool na = std::isnan(a.values[i]), nb = std::isnan(b.values[i]);
    if (na != nb) return false;
    if (!na && a.values[i] != b.values[i]) return false;
  }
  return true;
}

bool tracks_equal(const AnnotationTrack& a, const AnnotationTrack& b) {
  if (a.annotator != b.annotator || a.segments.size() != b.segments.size())
    return false;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const Segment& x = a.segments[i];
    const Segment& y = b.segments[i];
    if (x.start_ms != y.start_ms || x.end_ms != y.end_ms) return false;
    if (x.cues != y.cues || x.affects != y.affects || x.cause != y.cause)
      return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- generator

TEST_CASE("generation is deterministic per seed and index") {
  const GeneratorConfig cfg = small_config();
  const SyntheticInteraction a = generate_interaction(cfg, "x", 9, 3);
  const SyntheticInteraction b = generate_interaction(cfg, "x", 9, 3);
  CHECK(a.duration_ms == b.duration_ms);
  REQUIRE(a.streams.size() == b.streams.size());
  for (std::size_t s = 0; s < a.streams.size(); ++s) {
    REQUIRE(a.streams[s].samples.size() == b.streams[s].samples.size());
    for (std::size_t i = 0; i < a.streams[s].samples.size(); ++i)
      CHECK(samples_equal(a.streams[s].samples[i], b.streams[s].samples[i]));
  }
  CHECK(tracks_equal(a.annotator_a, b.annotator_a));
  CHECK(tracks_equal(a.annotator_b, b.annotator_b));

  const SyntheticInteraction c = generate_interaction(cfg, "x", 9, 4);
  bool differs = a.duration_ms != c.duration_ms;
  for (std::size_t s = 0; s < a.streams.size() && !differs; ++s) {
    const std::vector<StreamSample>& sa = a.streams[s].samples;
    const std::vector<StreamSample>& sc = c.streams[s].samples;
    if (sa.size() != sc.size()) differs = true;
    for (std::size_t i = 0; i < sa.size() && !differs; ++i)
      differs = !samples_equal(sa[i], sc[i]);
  }
  CHECK(differs);  // a different index draws a different interaction
}

TEST_CASE("generated interactions respect the configured shape") {
  GeneratorConfig cfg = small_config();
  cfg.interactions = 6;
  const std::vector<SyntheticInteraction> corpus = generate_corpus(cfg, 11);
  REQUIRE(corpus.size() == 6);

  for (const SyntheticInteraction& it : corpus) {
    CHECK(it.duration_ms >= 45000);
    CHECK(it.duration_ms % 100 == 0);
    REQUIRE(it.streams.size() == kStreamCount);

    std::int64_t episode_total = 0;
    for (std::size_t i = 0; i < it.truth.size(); ++i) {
      const Segment& s = it.truth[i];
      CHECK(s.start_ms >= 0);
      CHECK(s.end_ms > s.start_ms);
      CHECK(s.end_ms <= it.duration_ms);
      CHECK(!s.cause.empty());
      episode_total += s.end_ms - s.start_ms;
      if (i > 0) {
        // Engaged stretches between episodes stay long enough that episode
        // boundaries never blur together (grid rounding eats at most 100 ms
        // per edge).
        CHECK(s.start_ms - it.truth[i - 1].end_ms >= 2000);
      }
    }
    CHECK(episode_total <= it.duration_ms);
  }
}

TEST_CASE("streams sample on their configured grids") {
  const GeneratorConfig cfg = small_config();
  const SyntheticInteraction it = generate_interaction(cfg, "g", 5, 0);

  for (const StreamSeries& s : it.streams) {
    double rate = 0.0;
    switch (s.stream) {
      case StreamId::kDistance: rate = cfg.rate_distance_hz; break;
      case StreamId::kGaze: rate = cfg.rate_gaze_hz; break;
      case StreamId::kHead: rate = cfg.rate_head_hz; break;
      case StreamId::kFace: rate = cfg.rate_face_hz; break;
      case StreamId::kSpeech: rate = cfg.rate_speech_hz; break;
    }
    const std::int64_t period =
        static_cast<std::int64_t>(std::llround(1000.0 / rate));
    std::int64_t prev = -1;
    for (const StreamSample& smp : s.samples) {
      CHECK(smp.t_ms % period == 0);
      CHECK(smp.t_ms < it.duration_ms);
      CHECK(smp.t_ms > prev);
      prev = smp.t_ms;
    }
    // Per-sample loss and dropout bursts only remove samples; the grid is
    // never exceeded.
    CHECK(s.samples.size() <=
          static_cast<std::size_t>((it.duration_ms + period - 1) / period));
    CHECK(s.samples.size() > 0);
  }
}

TEST_CASE("face readings go missing as gap rows rather than lost samples") {
  const GeneratorConfig cfg = small_config();
  const SyntheticInteraction it = generate_interaction(cfg, "f", 21, 1);
  const StreamSeries& face = it.streams[static_cast<std::size_t>(StreamId::kFace)];
  std::size_t nan_rows = 0;
  for (const StreamSample& s : face.samples) {
    const bool any_nan = std::isnan(s.values[0]);
    for (double v : s.values) CHECK(std::isnan(v) == any_nan);
    if (any_nan) ++nan_rows;
  }
  CHECK(nan_rows > 0);
}

TEST_CASE("annotators stay near the true boundaries") {
  GeneratorConfig cfg = small_config();
  cfg.duration_mean_s = 120.0;
  const SyntheticInteraction it = generate_interaction(cfg, "a", 31, 2);

  for (const AnnotationTrack* t : {&it.annotator_a, &it.annotator_b}) {
    CHECK(t->segments.size() >= it.truth.size());
    for (const Segment& s : t->segments) {
      CHECK(s.end_ms - s.start_ms >= 400);
      // Every annotated segment overlaps some true episode: jitter is
      // clamped well below the inter-episode spacing.
      bool overlaps = false;
      for (const Segment& truth : it.truth)
        overlaps = overlaps || (s.start_ms < truth.end_ms + 600 &&
                                s.end_ms > truth.start_ms - 600);
      CHECK(overlaps);
    }
  }
}

TEST_CASE("generator settings round-trip through their file form") {
  testutil::TempDir dir("sed-genconfig");
  GeneratorConfig cfg = small_config();
  cfg.interactions = 17;
  cfg.flicker_prob = 0.45;
  const std::string path = dir.file("gen.json");
  save_generator_config(cfg, path);
  const GeneratorConfig r = load_generator_config(path);
  CHECK(r.interactions == 17);
  CHECK(r.flicker_prob == 0.45);
  CHECK(r.duration_mean_s == cfg.duration_mean_s);
  CHECK(r.rate_speech_hz == cfg.rate_speech_hz);
}

TEST_CASE("generator validation rejects contradictions") {
  GeneratorConfig bad = small_config();
  bad.duration_min_s = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.episode_time_cap = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.rate_gaze_hz = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

// ---------------------------------------------------------------- file io

TEST_CASE("corpus files round-trip the generated data exactly") {
  testutil::TempDir dir("sed-corpus-io");
  GeneratorConfig cfg = small_config();
  cfg.interactions = 3;
  const std::vector<SyntheticInteraction> synth = generate_corpus(cfg, 41);
  write_corpus_files(synth, dir.str(), 500);

  const CorpusManifest manifest = read_manifest(dir.file("manifest.json"));
  REQUIRE(manifest.entries.size() == 3);
  CHECK(manifest.frame_ms == 500);
  CHECK(manifest.layout == "standard");

  for (std::size_t i = 0; i < 3; ++i) {
    const CorpusEntry& e = manifest.entries[i];
    CHECK(e.id == synth[i].id);
    CHECK(e.duration_ms == synth[i].duration_ms);

    const std::vector<StreamSample> samples =
        read_stream_file(dir.file(e.stream_file));
    std::size_t expected = 0;
    for (const StreamSeries& s : synth[i].streams) expected += s.samples.size();
    CHECK(samples.size() == expected);
    std::int64_t prev = 0;
    for (const StreamSample& s : samples) {
      CHECK(s.t_ms >= prev);  // merged feed is time ordered
      prev = s.t_ms;
    }

    // Per stream, the feed preserves the original sample order and values.
    for (const StreamSeries& s : synth[i].streams) {
      std::vector<const StreamSample*> got;
      for (const StreamSample& smp : samples)
        if (smp.stream == s.stream) got.push_back(&smp);
      REQUIRE(got.size() == s.samples.size());
      for (std::size_t j = 0; j < got.size(); ++j)
        CHECK(samples_equal(*got[j], s.samples[j]));
    }

    const std::vector<AnnotationTrack> tracks =
        read_annotation_file(dir.file(e.annotation_file));
    REQUIRE(tracks.size() == 2);
    CHECK(tracks_equal(tracks[0], synth[i].annotator_a));
    CHECK(tracks_equal(tracks[1], synth[i].annotator_b));
  }
}

TEST_CASE("stream files tolerate hand-made records") {
  testutil::TempDir dir("sed-stream-hand");
  const std::string path = dir.file("hand.jsonl");
  {
    std::ofstream out(path);
    out << R"({"t_ms": 0, "stream": "gaze", "values": [0.25, -0.5, 1]})" << "\n";
    out << R"({"t_ms": 80, "stream": "gaze", "values": [null, -0.25, 0]})" << "\n";
  }
  const std::vector<StreamSample> samples = read_stream_file(path);
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].stream == StreamId::kGaze);
  CHECK(samples[0].values[0] == 0.25);
  CHECK(std::isnan(samples[1].values[0]));
  CHECK(samples[1].values[1] == -0.25);
}

TEST_CASE("clock normalization anchors the earliest sample at zero") {
  std::vector<StreamSample> samples;
  samples.push_back({5100, StreamId::kGaze, {1.0, 0.0, 0.0}});
  samples.push_back({5700, StreamId::kGaze, {2.0, 0.0, 0.0}});
  normalize_clock(samples);
  CHECK(samples[0].t_ms == 0);
  CHECK(samples[1].t_ms == 600);
}

TEST_CASE("decision logs round-trip") {
  testutil::TempDir dir("sed-decisions");
  std::vector<Decision> ds;
  Decision d;
  d.interaction_id = "it-0";
  d.frame_index = 10;
  d.t_ms = 5000;
  d.labeled_t_ms = 4000;
  d.label = 1;
  d.p_sed = 0.73125809213581237;
  ds.push_back(d);
  d.frame_index = 11;
  d.t_ms = 5500;
  d.labeled_t_ms = 4500;
  d.label = 0;
  d.p_sed = 1.0 / 3.0;
  ds.push_back(d);

  const std::string path = dir.file("dec.jsonl");
  write_decisions(path, ds, "m");
  const std::vector<Decision> r = read_decisions(path);
  REQUIRE(r.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r[i].interaction_id == ds[i].interaction_id);
    CHECK(r[i].frame_index == ds[i].frame_index);
    CHECK(r[i].t_ms == ds[i].t_ms);
    CHECK(r[i].labeled_t_ms == ds[i].labeled_t_ms);
    CHECK(r[i].label == ds[i].label);
    CHECK(r[i].p_sed == ds[i].p_sed);  // shortest round-trip formatting
  }
}

TEST_CASE("in-memory and on-disk corpora prepare identically") {
  testutil::TempDir dir("sed-corpus-eq");
  GeneratorConfig cfg = small_config();
  cfg.interactions = 3;
  const std::vector<SyntheticInteraction> synth = generate_corpus(cfg, 51);

  const Corpus mem = corpus_from_synth(synth);
  write_corpus_files(synth, dir.str(), 500);
  const Corpus disk = load_corpus(dir.file("manifest.json"));

  const std::vector<PreparedInteraction> pm = prepare_corpus(mem);
  const std::vector<PreparedInteraction> pd = prepare_corpus(disk);
  REQUIRE(pm.size() == pd.size());
  for (std::size_t i = 0; i < pm.size(); ++i) {
    CHECK(pm[i].id == pd[i].id);
    REQUIRE(pm[i].frames.frames.rows == pd[i].frames.frames.rows);
    REQUIRE(pm[i].frames.frames.cols == pd[i].frames.frames.cols);
    CHECK(pm[i].frames.frames.data == pd[i].frames.frames.data);
    CHECK(pm[i].frames.missing.data == pd[i].frames.missing.data);
    CHECK(pm[i].labels.sed == pd[i].labels.sed);
    CHECK(pm[i].labels.agreed == pd[i].labels.agreed);
  }
}

// ---------------------------------------------------------------- pipeline

TEST_CASE("fold preprocessing is fitted on the training side only") {
  std::vector<PreparedInteraction> all(2);
  for (std::size_t i = 0; i < 2; ++i) {
    PreparedInteraction& p = all[i];
    p.id = i == 0 ? "train-it" : "test-it";
    p.frames.interaction_id = p.id;
    p.frames.frame_ms = 500;
    p.frames.frames = RowMatrix(4, 2);
    p.frames.missing = BoolMatrix(4, 2);
    p.labels.sed.assign(4, 0);
    p.labels.agreed.assign(4, 1);
  }
  // Training frames: feature 0 has mean 2; the test interaction is wild.
  for (std::size_t r = 0; r < 4; ++r) {
    all[0].frames.frames.at(r, 0) = static_cast<double>(r);  // 0..3
    all[0].frames.frames.at(r, 1) = 1.0;
    all[1].frames.frames.at(r, 0) = 1000.0;
    all[1].frames.frames.at(r, 1) = -1000.0;
  }
  all[0].frames.missing.set(2, 1, true);
  all[0].frames.frames.at(2, 1) = 999.0;  // masked, must not leak into fit

  const FoldPrep fold = preprocess_fold(all, {"test-it"});
  CHECK(fold.imputation.fill[1] == 1.0);
  CHECK(fold.normalization.mean[0] == 1.5);
  REQUIRE(fold.train.size() == 1);
  REQUIRE(fold.test.size() == 1);
  CHECK(fold.train[0].id == "train-it");
  // The masked cell was filled with the training mean, then z-scored like
  // every other cell: constant coordinate, so exactly zero.
  CHECK(fold.train[0].frames.frames.at(2, 1) == 0.0);
  // Test frames use training statistics, so they land far out.
  CHECK(fold.test[0].frames.frames.at(0, 0) > 100.0);
}

TEST_CASE("window collection can keep or drop contested frames") {
  PreparedInteraction p;
  p.id = "it";
  p.frames.interaction_id = "it";
  p.frames.frame_ms = 500;
  p.frames.frames = RowMatrix(6, 2, 0.0);
  p.frames.missing = BoolMatrix(6, 2);
  p.labels.sed = {0, 0, 1, 1, 0, 0};
  p.labels.agreed = {1, 1, 0, 1, 1, 1};

  WindowConfig w{1000, 0, 500};
  const auto all_windows = collect_windows({p}, w, false);
  const auto agreed_windows = collect_windows({p}, w, true);
  CHECK(all_windows.size() == 4);   // end frames 2..5
  CHECK(agreed_windows.size() == 3);  // frame 2 is contested
}

TEST_CASE("cross validation is deterministic and well formed") {
  GeneratorConfig cfg = small_config();
  cfg.interactions = 6;
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 61));

  ModelSpec spec;
  spec.kind = ModelKind::kLogReg;
  spec.window = WindowConfig{2000, 500, 500};

  const CvResult a = cross_validate(corpus, spec, 3, 7);
  const CvResult b = cross_validate(corpus, spec, 3, 7);
  REQUIRE(a.fold_auc.size() == 3);
  CHECK(a.fold_auc == b.fold_auc);
  CHECK(a.auc_mean == b.auc_mean);
  for (double v : a.fold_auc) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(a.accuracy_mean >= 0.0);
  CHECK(a.f1_mean >= 0.0);
}

TEST_CASE("trained fold models carry the fold preprocessing") {
  GeneratorConfig cfg = small_config();
  cfg.interactions = 4;
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 71));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  const FoldPrep fold = preprocess_fold(prepared, {prepared.back().id});

  ModelSpec spec;
  spec.kind = ModelKind::kLogReg;
  spec.window = WindowConfig{2000, 0, 500};
  const TrainedModel model = train_fold_model(corpus.layout, fold, spec);

  CHECK(model.kind == ModelKind::kLogReg);
  CHECK(model.layout_hash == corpus.layout.hash());
  CHECK(model.imputation.fill == fold.imputation.fill);
  CHECK(model.normalization.mean == fold.normalization.mean);
  CHECK(model.window.tau_ms == 2000);
  CHECK(model.train_meta.count("train_windows") == 1);

  const FoldEval ev = evaluate_fold_model(model, fold, 3);
  CHECK(ev.scores.size() == ev.labels.size());
  CHECK(ev.scores.size() > 0);
  CHECK(ev.eval.auc_full >= 0.0);
}

TEST_CASE("saved models refuse corpora with different feature semantics") {
  GeneratorConfig cfg = small_config();
  cfg.interactions = 3;
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 81));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  const FoldPrep fold = preprocess_fold(prepared, {prepared.back().id});
  ModelSpec spec;
  spec.kind = ModelKind::kLogReg;
  spec.window = WindowConfig{1000, 0, 500};
  const TrainedModel model = train_fold_model(corpus.layout, fold, spec);

  Corpus other = corpus;
  other.layout = FeatureLayout::okao();
  CHECK_THROWS_AS(evaluate_model_on_corpus(model, other, 1), ValidationError);

  Corpus wrong_rate = corpus;
  wrong_rate.frame_ms = 400;
  CHECK_THROWS_AS(evaluate_model_on_corpus(model, wrong_rate, 1),
                  ValidationError);
}

// ---------------------------------------------------------------- detector

TEST_CASE("online decisions equal batch scores bit for bit") {
  testutil::TempDir dir("sed-detector");
  GeneratorConfig cfg = small_config();
  cfg.interactions = 4;
  const std::vector<SyntheticInteraction> synth = generate_corpus(cfg, 91);
  write_corpus_files(synth, dir.str(), 500);
  const Corpus corpus = load_corpus(dir.file("manifest.json"));

  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  std::vector<std::string> test_ids = {prepared[2].id, prepared[3].id};
  const FoldPrep fold = preprocess_fold(prepared, test_ids);

  ModelSpec spec;
  spec.kind = ModelKind::kLogReg;
  spec.window = WindowConfig{3000, 1000, 500};
  const TrainedModel model = train_fold_model(corpus.layout, fold, spec);

  const CorpusManifest manifest = read_manifest(dir.file("manifest.json"));
  for (const CorpusEntry& entry : manifest.entries) {
    const bool is_test = std::find(test_ids.begin(), test_ids.end(),
                                   entry.id) != test_ids.end();
    if (!is_test) continue;

    // Batch side: pooled frames, stored preprocessing, every window scored.
    const PreparedInteraction* prep = nullptr;
    for (const PreparedInteraction& p : prepared)
      if (p.id == entry.id) prep = &p;
    REQUIRE(prep != nullptr);
    FrameSequence frames = prep->frames;
    model.imputation.apply(frames);
    NormalizationModel norm = model.normalization;
    norm.apply(frames);
    const std::vector<LabeledWindow> windows =
        build_windows(frames, prep->labels, model.window);
    std::vector<double> batch_scores;
    for (const LabeledWindow& w : windows)
      batch_scores.push_back(model.score_window(w.block.data));

    // Online side: replay the merged feed.
    const std::vector<StreamSample> feed =
        read_stream_file(dir.file(entry.stream_file));
    const std::vector<Decision> decisions =
        detect_stream(model, corpus.layout, entry.id, feed);

    REQUIRE(decisions.size() == windows.size());
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      CHECK(decisions[i].frame_index == windows[i].end_frame);
      CHECK(decisions[i].p_sed == batch_scores[i]);
      CHECK(decisions[i].t_ms ==
            static_cast<std::int64_t>(windows[i].end_frame) * 500);
      CHECK(decisions[i].labeled_t_ms == decisions[i].t_ms - 1000);
      CHECK(decisions[i].label == (decisions[i].p_sed > 0.5 ? 1 : 0));
    }
  }
}

TEST_CASE("the detector enforces its input contract") {
  GeneratorConfig cfg = small_config();
  cfg.interactions = 2;
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 95));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  const FoldPrep fold = preprocess_fold(prepared, {prepared.back().id});
  ModelSpec spec;
  spec.kind = ModelKind::kLogReg;
  spec.window = WindowConfig{1000, 0, 500};
  const TrainedModel model = train_fold_model(corpus.layout, fold, spec);

  StreamingDetector det(model, corpus.layout, "x");
  det.push({1000, StreamId::kGaze, {0.0, 0.0, 1.0}});
  CHECK_THROWS_AS(det.push({500, StreamId::kGaze, {0.0, 0.0, 1.0}}),
                  ValidationError);

  StreamingDetector det2(model, corpus.layout, "x");
  CHECK_THROWS_AS(det2.push({0, StreamId::kGaze, {0.0}}), ValidationError);

  TrainedModel other = model;
  other.layout_hash ^= 1;
  CHECK_THROWS_AS(StreamingDetector(other, corpus.layout, "x"),
                  ValidationError);
}

TEST_CASE("finish closes the trailing frame") {
  GeneratorConfig cfg = small_config();
  cfg.interactions = 2;
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 97));
  const std::vector<PreparedInteraction> prepared = prepare_corpus(corpus);
  const FoldPrep fold = preprocess_fold(prepared, {prepared.back().id});
  ModelSpec spec;
  spec.kind = ModelKind::kLogReg;
  spec.window = WindowConfig{0, 0, 500};
  const TrainedModel model = train_fold_model(corpus.layout, fold, spec);

  StreamingDetector det(model, corpus.layout, "x");
  det.push({0, StreamId::kGaze, {0.1, 0.2, 1.0}});
  det.push({1200, StreamId::kGaze, {0.3, 0.1, 1.0}});
  CHECK(det.decisions().size() == 2);  // frames 0 and 1 closed by arrival
  det.finish();
  CHECK(det.frames_closed() == 3);
  CHECK(det.decisions().size() == 3);  // the frame holding t=1200 flushed
}

// ---------------------------------------------------------------- evaluation

TEST_CASE("balanced resampling uses every majority sample exactly once") {
  // 90 negatives with unique scores, exactly one of them past the threshold,
  // plus 10 positives. Nine resamples must tile the majority class, so the
  // one hot negative appears exactly once in the pooled counts.
  std::vector<double> scores;
  std::vector<unsigned char> labels;
  for (int i = 0; i < 90; ++i) {
    scores.push_back(i == 17 ? 0.9 : 0.4 - i * 0.001);
    labels.push_back(0);
  }
  for (int i = 0; i < 10; ++i) {
    scores.push_back(0.25);
    labels.push_back(1);
  }
  const ResampleEval ev = balanced_resample_eval(scores, labels, 13);
  CHECK(ev.resamples == 9);
  CHECK_FALSE(ev.degenerate);
  CHECK(ev.positives == 10);
  CHECK(ev.negatives == 90);
  CHECK(ev.pooled.total() == 180);
  CHECK(ev.pooled.fp == 1);
  CHECK(ev.pooled.fn == 90);  // all positives below threshold, nine times
  CHECK(ev.pooled.tn == 89);
  CHECK(ev.accuracy_mean == doctest::Approx((8 * 0.5 + 0.45) / 9.0));
}

TEST_CASE("balanced resampling needs both classes") {
  CHECK_THROWS_AS(balanced_resample_eval({0.1, 0.2}, {0, 0}, 1),
                  ValidationError);
  CHECK_THROWS_AS(balanced_resample_eval({0.1}, {0, 1}, 1), ValidationError);
}

TEST_CASE("feature contrasts surface the separating coordinate") {
  const FeatureLayout layout = FeatureLayout::standard();
  Rng rng(113);
  FrameSequence seq;
  seq.interaction_id = "c";
  seq.frame_ms = 500;
  seq.frames = RowMatrix(60, layout.pooled_dim());
  seq.missing = BoolMatrix(60, layout.pooled_dim());
  std::vector<unsigned char> labels(60);
  for (std::size_t r = 0; r < 60; ++r) {
    labels[r] = r % 2;
    for (std::size_t c = 0; c < layout.pooled_dim(); ++c)
      seq.frames.at(r, c) = rng.normal();
    if (labels[r]) seq.frames.at(r, 3) += 8.0;  // distance.head_y.mean
    seq.missing.set(r, 7, true);  // feature 7 never observed
  }

  const std::vector<FeatureContrast> contrasts =
      behavior_contrast({&seq}, {&labels}, layout);
  REQUIRE(!contrasts.empty());
  CHECK(contrasts.front().feature == 3);
  CHECK(contrasts.front().name == layout.pooled_name(3));
  CHECK(contrasts.front().stars == "****");
  for (const FeatureContrast& fc : contrasts) CHECK(fc.feature != 7);
  for (std::size_t i = 1; i < contrasts.size(); ++i)
    CHECK(std::fabs(contrasts[i - 1].stats.t) >=
          std::fabs(contrasts[i].stats.t));
}

TEST_CASE("window geometry sweeps cover the admissible grid") {
  testutil::TempDir dir("sed-sweep");
  GeneratorConfig cfg = small_config();
  cfg.interactions = 6;
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 121));

  SweepRequest req;
  req.kind = ModelKind::kLogReg;
  req.taus_ms = {1000, 2000};
  req.etas_ms = {0, 1000, 2000};
  req.folds = 2;
  req.seed = 3;
  const SweepTable table = run_sweep(corpus, req);
  REQUIRE(table.cells.size() == 5);  // lag never exceeds the span
  for (const SweepCell& c : table.cells) {
    CHECK(c.folds == 2);
    CHECK(c.tau_ms >= c.eta_ms);
    CHECK(c.auc_mean >= 0.0);
    CHECK(c.auc_mean <= 1.0);
  }

  const std::string csv = dir.file("sweep.csv");
  write_sweep_csv(table, csv);
  const std::string text = testutil::read_file(csv);
  CHECK(text.find("model,tau_ms,eta_ms") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);

  const std::string grid = format_sweep_table(table);
  CHECK(grid.find("logreg") != std::string::npos);
  CHECK(grid.find("2.0s") != std::string::npos);
}

TEST_CASE("corpus contrasts run end to end") {
  GeneratorConfig cfg = small_config();
  cfg.interactions = 4;
  const Corpus corpus = corpus_from_synth(generate_corpus(cfg, 131));
  const std::vector<FeatureContrast> contrasts = contrast_corpus(corpus);
  CHECK(!contrasts.empty());
  // The synthetic behavior shift touches gaze and distance; something in
  // those blocks separates strongly.
  CHECK(std::fabs(contrasts.front().stats.t) > 3.0);
}
