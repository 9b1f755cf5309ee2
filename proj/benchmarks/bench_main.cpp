// Microbenchmarks for the hot paths: frame pooling, window scoring and the
// online detector. Run with --benchmark_min_time=0.1s for a quick pass.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "sed/detector.hpp"
#include "sed/metrics.hpp"
#include "sed/models/model_io.hpp"
#include "sed/models/network.hpp"
#include "sed/pipeline.hpp"
#include "sed/rng.hpp"
#include "sed/stream.hpp"
#include "sed/synth.hpp"

using namespace sed;

namespace {

// One synthetic interaction reused across benchmarks.
const SyntheticInteraction& interaction() {
  static const SyntheticInteraction it = [] {
    GeneratorConfig cfg;
    cfg.duration_mean_s = 120.0;
    cfg.duration_sd_s = 1.0;
    cfg.duration_min_s = 118.0;
    return generate_interaction(cfg, "bench", 7, 0);
  }();
  return it;
}

TrainedModel scoring_model(ModelKind kind, std::int64_t tau_ms) {
  const FeatureLayout layout = FeatureLayout::standard();
  TrainedModel m;
  m.kind = kind;
  m.window = WindowConfig{tau_ms, 0, 500};
  m.layout_hash = layout.hash();
  m.imputation.fill.assign(layout.pooled_dim(), 0.0);
  m.normalization.mean.assign(layout.pooled_dim(), 0.0);
  m.normalization.sd.assign(layout.pooled_dim(), 1.0);
  if (kind == ModelKind::kLogReg) {
    Rng rng(3);
    m.linear.w.resize(m.window.width_frames() * layout.pooled_dim());
    for (double& v : m.linear.w) v = rng.uniform(-0.1, 0.1);
  } else {
    m.net_config.kind = kind;
    m.net_config.frames = m.window.width_frames();
    m.net_config.frame_dim = layout.pooled_dim();
    m.net_config.hidden1 = 32;
    m.net_config.hidden2 = 2;
    m.net_params = init_network(m.net_config, 11);
  }
  return m;
}

void bench_pooling(benchmark::State& state) {
  const FeatureLayout layout = FeatureLayout::standard();
  const SyntheticInteraction& it = interaction();
  std::size_t frames = 0;
  std::int64_t last = 0;
  for (const StreamSeries& s : it.streams)
    if (!s.samples.empty()) last = std::max(last, s.samples.back().t_ms);
  for (auto _ : state) {
    FrameSequence seq = align_streams(
        layout, it.streams, frame_count_for(last, 500), 500, it.id);
    frames = seq.frames.rows;
    benchmark::DoNotOptimize(seq.frames.data.data());
  }
  state.counters["frames"] = static_cast<double>(frames);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(frames));
}
BENCHMARK(bench_pooling)->Unit(benchmark::kMillisecond);

void bench_window_score(benchmark::State& state) {
  const ModelKind kind = static_cast<ModelKind>(state.range(0));
  const TrainedModel model = scoring_model(kind, 5000);
  Rng rng(5);
  std::vector<double> window(model.window.width_frames() *
                             FeatureLayout::standard().pooled_dim());
  for (double& v : window) v = rng.normal();
  for (auto _ : state) {
    const double p = model.score_window(window);
    benchmark::DoNotOptimize(p);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bench_window_score)
    ->Arg(static_cast<int>(ModelKind::kLogReg))
    ->Arg(static_cast<int>(ModelKind::kDnn))
    ->Arg(static_cast<int>(ModelKind::kGru))
    ->Arg(static_cast<int>(ModelKind::kLstm))
    ->Unit(benchmark::kMicrosecond);

void bench_detector(benchmark::State& state) {
  const FeatureLayout layout = FeatureLayout::standard();
  const TrainedModel model = scoring_model(ModelKind::kLstm, 5000);
  const SyntheticInteraction& it = interaction();

  std::vector<StreamSample> feed;
  {
    struct Ref {
      const StreamSample* s;
      std::size_t seq;
    };
    std::vector<Ref> refs;
    std::size_t seq = 0;
    for (const StreamSeries& s : it.streams)
      for (const StreamSample& smp : s.samples) refs.push_back({&smp, seq++});
    std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
      if (a.s->t_ms != b.s->t_ms) return a.s->t_ms < b.s->t_ms;
      return a.seq < b.seq;
    });
    for (const Ref& r : refs) feed.push_back(*r.s);
  }

  std::size_t decisions = 0;
  for (auto _ : state) {
    StreamingDetector det(model, layout, it.id);
    for (const StreamSample& s : feed) det.push(s);
    det.finish();
    decisions = det.decisions().size();
    benchmark::DoNotOptimize(decisions);
  }
  state.counters["decisions"] = static_cast<double>(decisions);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(feed.size()));
}
BENCHMARK(bench_detector)->Unit(benchmark::kMillisecond);

void bench_auc(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(9);
  std::vector<double> scores(n);
  std::vector<unsigned char> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    labels[i] = rng.bernoulli(0.3) ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  for (auto _ : state) {
    const double a = auc(scores, labels);
    benchmark::DoNotOptimize(a);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(bench_auc)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void bench_train_step(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.kind = ModelKind::kLstm;
  cfg.frames = 11;
  cfg.frame_dim = 96;
  cfg.hidden1 = 32;
  cfg.hidden2 = 2;
  const NetworkParams params = init_network(cfg, 21);
  NetworkParams grads = params;

  Rng rng(23);
  RowMatrix batch(64, cfg.frames * cfg.frame_dim);
  for (double& v : batch.data) v = rng.normal();
  std::vector<unsigned char> labels(64);
  for (auto& l : labels) l = rng.bernoulli(0.5) ? 1 : 0;
  std::vector<double> weights(64, 1.0);

  for (auto _ : state) {
    const double loss = network_loss_and_grad(cfg, params, batch, labels,
                                              weights, 0.0, nullptr, &grads);
    benchmark::DoNotOptimize(loss);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 64);
}
BENCHMARK(bench_train_step)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
