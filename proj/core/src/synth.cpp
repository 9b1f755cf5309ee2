#include "sed/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sed/error.hpp"
#include "sed/rng.hpp"

namespace sed {

namespace {

using nlohmann::json;

enum class Mode { kEngaged, kPhone, kInterrupted, kRobotError };

const char* mode_cause(Mode m) {
  switch (m) {
    case Mode::kPhone: return "phone";
    case Mode::kInterrupted: return "third_party";
    case Mode::kRobotError: return "robot_error";
    default: return "";
  }
}

std::vector<std::string> mode_cues(Mode m) {
  switch (m) {
    case Mode::kPhone: return {"phone_out", "gaze_down"};
    case Mode::kInterrupted: return {"speaks_to_other", "gaze_away"};
    case Mode::kRobotError: return {"steps_back", "no_response"};
    default: return {};
  }
}

std::vector<std::string> mode_affects(Mode m) {
  switch (m) {
    case Mode::kPhone: return {"bored"};
    case Mode::kInterrupted: return {"distracted"};
    case Mode::kRobotError: return {"frustrated"};
    default: return {};
  }
}

struct SpeechTurn {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  bool user = false;  // exactly one of user/robot holds the floor
};

struct Burst {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
};

// Everything about an interaction's hidden state, laid out on the clock
// before any stream is emitted.
struct Timeline {
  std::int64_t dur_ms = 0;
  std::vector<Segment> truth;
  std::vector<Mode> mode;
  std::vector<std::int64_t> switch_ms;  // discrete pattern flip inside ramp
  std::vector<SpeechTurn> turns;
  std::vector<Burst> bursts_gaze, bursts_head, bursts_face;
};

struct State {
  bool in_episode = false;
  Mode mode = Mode::kEngaged;
  double ramp = 0.0;      // 0 engaged .. 1 full episode pattern
  bool switched = false;  // discrete channels flipped to the episode pattern
  bool turn_user = false;
  bool turn_robot = false;
};

std::size_t find_segment(const std::vector<Segment>& segs, std::int64_t t) {
  for (std::size_t i = 0; i < segs.size(); ++i)
    if (t >= segs[i].start_ms && t < segs[i].end_ms) return i;
  return segs.size();
}

State state_at(const Timeline& tl, std::int64_t t, double ramp_ms) {
  State s;
  const std::size_t si = find_segment(tl.truth, t);
  if (si < tl.truth.size()) {
    s.in_episode = true;
    s.mode = tl.mode[si];
    s.ramp = ramp_ms > 0.0
                 ? std::min(1.0, static_cast<double>(t - tl.truth[si].start_ms) /
                                     ramp_ms)
                 : 1.0;
    s.switched = t >= tl.switch_ms[si];
  }
  for (const SpeechTurn& turn : tl.turns) {
    if (t >= turn.start_ms && t < turn.end_ms) {
      s.turn_user = turn.user;
      s.turn_robot = !turn.user;
      break;
    }
  }
  return s;
}

bool in_burst(const std::vector<Burst>& bursts, std::int64_t t) {
  for (const Burst& b : bursts)
    if (t >= b.start_ms && t < b.end_ms) return true;
  return false;
}

double bl(double engaged, double episode, double lam) {
  return (1.0 - lam) * engaged + lam * episode;
}

// ---- per-mode emission tables ----

struct DistanceParams {
  double sonar, face, hx, hy, hz, zone;
};

DistanceParams distance_params(Mode m) {
  switch (m) {
    case Mode::kPhone: return {1.20, 1.25, 0.00, -0.15, 1.20, 1.0};
    case Mode::kInterrupted: return {1.60, 1.70, 0.25, 0.00, 1.70, 2.0};
    case Mode::kRobotError: return {1.90, 2.00, 0.10, 0.00, 2.00, 2.0};
    default: return {1.15, 1.20, 0.00, 0.00, 1.20, 1.0};
  }
}

struct GazeParams {
  double yaw, yaw_sd, pitch, pitch_sd, p_looking;
};

GazeParams gaze_params(Mode m) {
  switch (m) {
    case Mode::kPhone: return {0.0, 8.0, -24.0, 6.0, 0.10};
    case Mode::kInterrupted: return {32.0, 10.0, 0.0, 6.0, 0.15};
    case Mode::kRobotError: return {15.0, 14.0, -6.0, 8.0, 0.35};
    default: return {0.0, 6.0, 0.0, 5.0, 0.88};
  }
}

struct HeadParams {
  double yaw, pitch, roll;
};

HeadParams head_params(Mode m) {
  switch (m) {
    case Mode::kPhone: return {0.0, -20.0, 0.0};
    case Mode::kInterrupted: return {28.0, 0.0, 2.0};
    case Mode::kRobotError: return {12.0, -5.0, 0.0};
    default: return {0.0, -2.0, 0.0};
  }
}

const double* face_means(Mode m) {
  // au01 au02 au04 au05 au06 au07 au09 au10 au12 au14 au15 au17 au20 au23
  // au25 au26 au45
  static const double engaged[17] = {0.20, 0.15, 0.10, 0.10, 0.80, 0.30,
                                     0.05, 0.20, 1.10, 0.20, 0.10, 0.20,
                                     0.10, 0.10, 0.60, 0.30, 0.30};
  static const double phone[17] = {0.15, 0.10, 0.30, 0.05, 0.20, 0.40,
                                   0.05, 0.30, 0.30, 0.50, 0.30, 0.70,
                                   0.10, 0.20, 0.20, 0.20, 1.20};
  static const double interrupted[17] = {1.00, 0.80, 0.20, 0.70, 0.40, 0.30,
                                         0.10, 0.30, 0.50, 0.30, 0.10, 0.20,
                                         0.30, 0.20, 0.90, 0.50, 0.30};
  static const double robot_error[17] = {0.50, 0.20, 1.40, 0.20, 0.10, 0.90,
                                         0.30, 0.40, 0.15, 0.70, 0.50, 0.40,
                                         0.20, 0.60, 0.30, 0.30, 0.40};
  switch (m) {
    case Mode::kPhone: return phone;
    case Mode::kInterrupted: return interrupted;
    case Mode::kRobotError: return robot_error;
    default: return engaged;
  }
}

// ---- per-stream samplers ----

std::vector<double> sample_distance(const State& s, Rng& rng) {
  const DistanceParams e = distance_params(Mode::kEngaged);
  const DistanceParams m = distance_params(s.mode);
  const double lam = s.in_episode ? s.ramp : 0.0;
  std::vector<double> v(6);
  v[0] = rng.normal(bl(e.sonar, m.sonar, lam), 0.10);
  v[1] = rng.normal(bl(e.face, m.face, lam), 0.10);
  v[2] = rng.normal(bl(e.hx, m.hx, lam), 0.06);
  v[3] = rng.normal(bl(e.hy, m.hy, lam), 0.05);
  v[4] = rng.normal(bl(e.hz, m.hz, lam), 0.10);
  const double zc = rng.normal(bl(e.zone, m.zone, lam), 0.3);
  v[5] = std::clamp(std::round(zc), 0.0, 3.0);
  return v;
}

std::vector<double> sample_gaze(const State& s, Rng& rng) {
  const GazeParams e = gaze_params(Mode::kEngaged);
  const GazeParams m = gaze_params(s.mode);
  const double lam = s.in_episode ? s.ramp : 0.0;
  std::vector<double> v(3);
  v[0] = rng.normal(bl(e.yaw, m.yaw, lam), bl(e.yaw_sd, m.yaw_sd, lam));
  v[1] =
      rng.normal(bl(e.pitch, m.pitch, lam), bl(e.pitch_sd, m.pitch_sd, lam));
  v[2] = rng.bernoulli(bl(e.p_looking, m.p_looking, lam)) ? 1.0 : 0.0;
  return v;
}

std::vector<double> sample_head(const State& s, Rng& rng) {
  const HeadParams e = head_params(Mode::kEngaged);
  const HeadParams m = head_params(s.mode);
  const double lam = s.in_episode ? s.ramp : 0.0;
  std::vector<double> v(3);
  v[0] = rng.normal(bl(e.yaw, m.yaw, lam), 5.0);
  v[1] = rng.normal(bl(e.pitch, m.pitch, lam), 4.0);
  v[2] = rng.normal(bl(e.roll, m.roll, lam), 3.0);
  return v;
}

std::vector<double> sample_face(const State& s, Rng& rng) {
  const double* e = face_means(Mode::kEngaged);
  const double* m = face_means(s.mode);
  const double lam = s.in_episode ? s.ramp : 0.0;
  std::vector<double> v(17);
  for (std::size_t i = 0; i < 17; ++i)
    v[i] = std::max(0.0, rng.normal(bl(e[i], m[i], lam), 0.25));
  return v;
}

// Who is audible right now. Engaged interactions alternate turns; episodes
// flip to a mode-specific pattern once the discrete switch point passes.
void speech_activity(const State& s, bool* user_on, bool* robot_on) {
  if (!s.in_episode || !s.switched) {
    *user_on = s.turn_user;
    *robot_on = s.turn_robot;
    return;
  }
  switch (s.mode) {
    case Mode::kInterrupted:  // side conversation while the robot talks on
      *user_on = true;
      *robot_on = true;
      break;
    case Mode::kPhone:  // silent scrolling
      *user_on = false;
      *robot_on = false;
      break;
    case Mode::kRobotError:  // user keeps prompting a stalled robot
      *user_on = s.turn_user;
      *robot_on = false;
      break;
    default:
      *user_on = s.turn_user;
      *robot_on = s.turn_robot;
  }
}

std::vector<double> sample_speech(const State& s, double user_run_s,
                                  double robot_run_s, Rng& rng) {
  bool user_on = false, robot_on = false;
  speech_activity(s, &user_on, &robot_on);

  std::vector<double> v(19);
  const bool voiced = rng.bernoulli(user_on ? 0.90 : 0.04);
  v[0] = voiced ? 1.0 : 0.0;
  v[1] = voiced ? rng.normal(175.0, 25.0) : std::fabs(rng.normal(3.0, 2.0));
  double loud;
  if (user_on && robot_on) loud = rng.normal(66.0, 3.0);
  else if (user_on) loud = rng.normal(62.0, 3.0);
  else if (robot_on) loud = rng.normal(56.0, 3.0);
  else loud = rng.normal(36.0, 4.0);
  v[2] = loud;
  v[3] = (loud - 50.0) / 8.0 + rng.normal(0.0, 0.15);
  for (std::size_t i = 0; i < 12; ++i) {
    double mean = 0.0;
    if (i == 0 && user_on) mean += 0.6;
    if (i == 1 && robot_on) mean += 0.7;
    if (i == 2 && user_on && robot_on) mean += 0.5;
    v[4 + i] = rng.normal(mean, 1.0);
  }
  v[16] = robot_on ? 1.0 : 0.0;
  v[17] = robot_on ? robot_run_s : 0.0;
  v[18] = user_on ? user_run_s : 0.0;
  return v;
}

// ---- timeline construction ----

double gamma_by_moments(Rng& rng, double mean, double sd) {
  const double shape = (mean / sd) * (mean / sd);
  const double scale = sd * sd / mean;
  return rng.gamma(shape, scale);
}

Timeline build_timeline(const GeneratorConfig& cfg, Rng& rng,
                        bool multiparty) {
  Timeline tl;
  const double dur_s = rng.truncated_normal(
      cfg.duration_mean_s, cfg.duration_sd_s, cfg.duration_min_s,
      cfg.duration_mean_s + 4.0 * cfg.duration_sd_s);
  tl.dur_ms = static_cast<std::int64_t>(std::round(dur_s * 10.0)) * 100;

  // Episode count scales with exposure.
  const double expected =
      cfg.episode_rate_mean * dur_s / cfg.episode_rate_reference_s;
  std::size_t count = std::max(1u, rng.poisson(expected));

  // Episode lengths; the final one is drawn long-tailed.
  std::vector<double> lens_s;
  for (std::size_t i = 0; i < count; ++i) {
    const bool last = i + 1 == count;
    const double mean =
        last ? cfg.final_episode_duration_mean_s : cfg.episode_duration_mean_s;
    const double sd =
        last ? cfg.final_episode_duration_sd_s : cfg.episode_duration_sd_s;
    lens_s.push_back(
        std::max(cfg.episode_min_duration_s, gamma_by_moments(rng, mean, sd)));
  }

  // Fit into the interaction: cap the episode mass, then shed episodes until
  // the minimum gaps fit too.
  double total = 0.0;
  for (double l : lens_s) total += l;
  const double cap = cfg.episode_time_cap * dur_s;
  if (total > cap) {
    const double k = cap / total;
    for (double& l : lens_s) l = std::max(cfg.episode_min_duration_s, l * k);
    total = 0.0;
    for (double l : lens_s) total += l;
  }
  while (lens_s.size() > 1 &&
         total + (static_cast<double>(lens_s.size()) + 1.0) * cfg.min_gap_s >
             dur_s) {
    total -= lens_s.back();
    lens_s.pop_back();
  }
  count = lens_s.size();

  // Gaps by stick breaking: minimum gap plus a share of the slack.
  const double slack =
      std::max(0.0, dur_s - total -
                        (static_cast<double>(count) + 1.0) * cfg.min_gap_s);
  std::vector<double> cuts(count + 1);
  double cut_sum = 0.0;
  for (double& c : cuts) {
    c = -std::log(std::max(1e-12, rng.uniform()));
    cut_sum += c;
  }

  double cursor_s = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    cursor_s += cfg.min_gap_s + slack * cuts[i] / cut_sum;
    double end_s = cursor_s + lens_s[i];
    const bool last = i + 1 == count;
    if (last && rng.bernoulli(cfg.run_to_end_prob)) end_s = dur_s;
    end_s = std::min(end_s, dur_s);
    if (end_s - cursor_s < cfg.episode_min_duration_s) break;

    Segment seg;
    seg.start_ms = static_cast<std::int64_t>(std::round(cursor_s * 10.0)) * 100;
    seg.end_ms = static_cast<std::int64_t>(std::round(end_s * 10.0)) * 100;
    if (seg.end_ms > tl.dur_ms) seg.end_ms = tl.dur_ms;

    Mode mode;
    const double u = rng.uniform();
    if (multiparty)
      mode = u < 0.30 ? Mode::kPhone
             : u < 0.75 ? Mode::kInterrupted
                        : Mode::kRobotError;
    else
      mode = u < 0.50 ? Mode::kPhone
             : u < 0.55 ? Mode::kInterrupted
                        : Mode::kRobotError;
    seg.cause = mode_cause(mode);
    seg.cues = mode_cues(mode);
    seg.affects = mode_affects(mode);

    tl.truth.push_back(seg);
    tl.mode.push_back(mode);
    const double ramp_ms =
        std::min(cfg.onset_ramp_s * 1000.0,
                 static_cast<double>(seg.end_ms - seg.start_ms));
    tl.switch_ms.push_back(seg.start_ms + static_cast<std::int64_t>(
                                              rng.uniform() * ramp_ms));
    cursor_s = end_s;
  }

  // Alternating speech turns spanning the whole interaction.
  std::int64_t t = 0;
  bool user = rng.bernoulli(0.5);
  while (t < tl.dur_ms) {
    const double dwell_s = user
                               ? rng.truncated_normal(2.5, 1.2, 0.8, 7.0)
                               : rng.truncated_normal(3.5, 1.5, 1.2, 9.0);
    SpeechTurn turn;
    turn.start_ms = t;
    turn.end_ms = std::min(
        tl.dur_ms, t + static_cast<std::int64_t>(std::round(dwell_s * 100.0)) *
                           10);
    turn.user = user;
    tl.turns.push_back(turn);
    t = turn.end_ms;
    user = !user;
  }

  // Tracker dropout bursts. Episodes where the user turns away get an extra
  // chance of one.
  auto make_bursts = [&](std::vector<Burst>& out) {
    const double per_min = cfg.burst_rate_per_min;
    const double dur_min = static_cast<double>(tl.dur_ms) / 60000.0;
    const unsigned n = rng.poisson(per_min * dur_min);
    for (unsigned i = 0; i < n; ++i) {
      Burst b;
      const double len_s =
          std::clamp(gamma_by_moments(rng, cfg.burst_mean_s, cfg.burst_mean_s),
                     0.3, 6.0);
      b.start_ms = static_cast<std::int64_t>(rng.uniform() *
                                             static_cast<double>(tl.dur_ms));
      b.end_ms = std::min(
          tl.dur_ms, b.start_ms + static_cast<std::int64_t>(len_s * 1000.0));
      out.push_back(b);
    }
    for (const Segment& seg : tl.truth) {
      if (!rng.bernoulli(0.5)) continue;
      if (seg.end_ms - seg.start_ms < 1500) continue;
      Burst b;
      const double len_s = rng.truncated_normal(1.5, 1.0, 0.5, 4.0);
      const std::int64_t span = seg.end_ms - seg.start_ms - 500;
      b.start_ms = seg.start_ms + static_cast<std::int64_t>(
                                      rng.uniform() * static_cast<double>(span));
      b.end_ms = std::min(seg.end_ms,
                          b.start_ms + static_cast<std::int64_t>(len_s * 1000.0));
      out.push_back(b);
    }
  };
  make_bursts(tl.bursts_gaze);
  make_bursts(tl.bursts_head);
  make_bursts(tl.bursts_face);
  return tl;
}

// ---- annotator simulation ----

AnnotationTrack make_annotator(const Timeline& tl, const GeneratorConfig& cfg,
                               const std::string& name,
                               const std::string& interaction_id, Rng& rng) {
  AnnotationTrack track;
  track.annotator = name;
  track.interaction_id = interaction_id;

  for (const Segment& truth : tl.truth) {
    Segment seg = truth;
    const double jmax = cfg.annotator_jitter_max_ms;
    const auto jitter = [&]() {
      return static_cast<std::int64_t>(std::round(rng.truncated_normal(
          0.0, cfg.annotator_jitter_sd_ms, -jmax, jmax)));
    };
    seg.start_ms = std::max<std::int64_t>(0, truth.start_ms + jitter());
    seg.end_ms = std::min(tl.dur_ms, truth.end_ms + jitter());
    if (seg.end_ms - seg.start_ms < 400) {
      const std::int64_t mid = (truth.start_ms + truth.end_ms) / 2;
      seg.start_ms = std::max<std::int64_t>(0, mid - 200);
      seg.end_ms = std::min(tl.dur_ms, mid + 200);
    }

    // Occasionally the annotator lifts the label for under a second inside
    // an episode, splitting it in two.
    const std::int64_t margin =
        static_cast<std::int64_t>(cfg.flicker_margin_s * 1000.0);
    const std::int64_t len = seg.end_ms - seg.start_ms;
    if (rng.bernoulli(cfg.flicker_prob) && len >= 2 * margin + 1000) {
      const std::int64_t hole_len =
          250 + static_cast<std::int64_t>(rng.uniform() * 700.0);  // < 1000
      const std::int64_t lo = seg.start_ms + margin;
      const std::int64_t hi = seg.end_ms - margin - hole_len;
      const std::int64_t hole_start =
          lo + static_cast<std::int64_t>(rng.uniform() *
                                         static_cast<double>(hi - lo));
      Segment first = seg;
      first.end_ms = hole_start;
      Segment second = seg;
      second.start_ms = hole_start + hole_len;
      track.segments.push_back(first);
      track.segments.push_back(second);
    } else {
      track.segments.push_back(seg);
    }
  }
  return track;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (interactions == 0) throw ConfigError("need at least one interaction");
  if (duration_min_s <= 0.0 || duration_mean_s < duration_min_s)
    throw ConfigError("interaction duration settings are inconsistent");
  if (episode_duration_mean_s <= 0.0 || episode_duration_sd_s <= 0.0 ||
      final_episode_duration_mean_s <= 0.0 ||
      final_episode_duration_sd_s <= 0.0)
    throw ConfigError("episode duration settings must be positive");
  if (episode_time_cap <= 0.0 || episode_time_cap >= 1.0)
    throw ConfigError("episode time cap must be in (0, 1)");
  if (min_gap_s < 1.2)
    throw ConfigError(
        "gaps under 1.2 s cannot be kept distinct once annotator jitter is "
        "applied");
  if (rate_distance_hz <= 0.0 || rate_gaze_hz <= 0.0 || rate_head_hz <= 0.0 ||
      rate_face_hz <= 0.0 || rate_speech_hz <= 0.0)
    throw ConfigError("stream rates must be positive");
  for (double p : {miss_distance, miss_gaze, miss_head, miss_face,
                   miss_speech, flicker_prob, multiparty_fraction,
                   run_to_end_prob})
    if (p < 0.0 || p > 1.0)
      throw ConfigError("probabilities must be in [0, 1]");
}

SyntheticInteraction generate_interaction(const GeneratorConfig& cfg,
                                          const std::string& id,
                                          std::uint64_t seed,
                                          std::uint64_t index) {
  cfg.validate();
  Rng rng(Rng::derive(seed, 0x73796e00ULL + index));

  SyntheticInteraction out;
  out.id = id;
  out.multiparty = rng.bernoulli(cfg.multiparty_fraction);

  const Timeline tl = build_timeline(cfg, rng, out.multiparty);
  out.duration_ms = tl.dur_ms;
  out.truth = tl.truth;

  const double ramp_ms = cfg.onset_ramp_s * 1000.0;

  struct StreamPlan {
    StreamId id;
    double rate_hz;
    double miss;
    const std::vector<Burst>* bursts;
  };
  const StreamPlan plans[5] = {
      {StreamId::kDistance, cfg.rate_distance_hz, cfg.miss_distance, nullptr},
      {StreamId::kGaze, cfg.rate_gaze_hz, cfg.miss_gaze, &tl.bursts_gaze},
      {StreamId::kHead, cfg.rate_head_hz, cfg.miss_head, &tl.bursts_head},
      {StreamId::kFace, cfg.rate_face_hz, cfg.miss_face, &tl.bursts_face},
      {StreamId::kSpeech, cfg.rate_speech_hz, cfg.miss_speech, nullptr},
  };

  for (const StreamPlan& plan : plans) {
    StreamSeries series;
    series.stream = plan.id;
    const std::int64_t period =
        static_cast<std::int64_t>(std::round(1000.0 / plan.rate_hz));
    double user_run_s = 0.0, robot_run_s = 0.0;
    for (std::int64_t t = 0; t < tl.dur_ms; t += period) {
      const State st = state_at(tl, t, ramp_ms);

      if (plan.id == StreamId::kSpeech) {
        // Running how-long-has-X-been-talking counters feed two features.
        bool user_on = false, robot_on = false;
        speech_activity(st, &user_on, &robot_on);
        const double step_s = static_cast<double>(period) / 1000.0;
        user_run_s = user_on ? user_run_s + step_s : 0.0;
        robot_run_s = robot_on ? robot_run_s + step_s : 0.0;
      }

      if (plan.bursts && in_burst(*plan.bursts, t)) continue;
      const bool lost = rng.bernoulli(plan.miss);
      if (lost && plan.id != StreamId::kFace) continue;

      StreamSample sample;
      sample.t_ms = t;
      sample.stream = plan.id;
      if (lost) {
        // The face tracker reports a failure row instead of going silent.
        sample.values.assign(17, std::nan(""));
      } else {
        switch (plan.id) {
          case StreamId::kDistance: sample.values = sample_distance(st, rng); break;
          case StreamId::kGaze: sample.values = sample_gaze(st, rng); break;
          case StreamId::kHead: sample.values = sample_head(st, rng); break;
          case StreamId::kFace: sample.values = sample_face(st, rng); break;
          case StreamId::kSpeech:
            sample.values = sample_speech(st, user_run_s, robot_run_s, rng);
            break;
        }
      }
      series.samples.push_back(std::move(sample));
    }
    out.streams.push_back(std::move(series));
  }

  out.annotator_a = make_annotator(tl, cfg, "a1", id, rng);
  out.annotator_b = make_annotator(tl, cfg, "a2", id, rng);
  return out;
}

std::vector<SyntheticInteraction> generate_corpus(const GeneratorConfig& cfg,
                                                  std::uint64_t seed) {
  cfg.validate();
  std::vector<SyntheticInteraction> corpus;
  corpus.reserve(cfg.interactions);
  for (std::size_t i = 0; i < cfg.interactions; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "synth-%04zu", i);
    corpus.push_back(generate_interaction(cfg, buf, seed, i));
  }
  return corpus;
}

namespace {

constexpr const char* kGenSchema = "sed.genconfig.v1";

}  // namespace

GeneratorConfig load_generator_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("malformed generator config: " +
                          std::string(e.what()));
  }
  if (j.value("schema", "") != kGenSchema)
    throw ValidationError("unsupported generator config schema in " + path);

  GeneratorConfig cfg;
  auto get = [&j](const char* key, auto fallback) {
    using T = decltype(fallback);
    return j.contains(key) ? j.at(key).get<T>() : fallback;
  };
  cfg.interactions = get("interactions", cfg.interactions);
  cfg.duration_mean_s = get("duration_mean_s", cfg.duration_mean_s);
  cfg.duration_sd_s = get("duration_sd_s", cfg.duration_sd_s);
  cfg.duration_min_s = get("duration_min_s", cfg.duration_min_s);
  cfg.episode_rate_mean = get("episode_rate_mean", cfg.episode_rate_mean);
  cfg.episode_rate_reference_s =
      get("episode_rate_reference_s", cfg.episode_rate_reference_s);
  cfg.episode_duration_mean_s =
      get("episode_duration_mean_s", cfg.episode_duration_mean_s);
  cfg.episode_duration_sd_s =
      get("episode_duration_sd_s", cfg.episode_duration_sd_s);
  cfg.final_episode_duration_mean_s =
      get("final_episode_duration_mean_s", cfg.final_episode_duration_mean_s);
  cfg.final_episode_duration_sd_s =
      get("final_episode_duration_sd_s", cfg.final_episode_duration_sd_s);
  cfg.episode_min_duration_s =
      get("episode_min_duration_s", cfg.episode_min_duration_s);
  cfg.episode_time_cap = get("episode_time_cap", cfg.episode_time_cap);
  cfg.min_gap_s = get("min_gap_s", cfg.min_gap_s);
  cfg.run_to_end_prob = get("run_to_end_prob", cfg.run_to_end_prob);
  cfg.onset_ramp_s = get("onset_ramp_s", cfg.onset_ramp_s);
  cfg.multiparty_fraction =
      get("multiparty_fraction", cfg.multiparty_fraction);
  cfg.annotator_jitter_sd_ms =
      get("annotator_jitter_sd_ms", cfg.annotator_jitter_sd_ms);
  cfg.annotator_jitter_max_ms =
      get("annotator_jitter_max_ms", cfg.annotator_jitter_max_ms);
  cfg.flicker_prob = get("flicker_prob", cfg.flicker_prob);
  cfg.flicker_margin_s = get("flicker_margin_s", cfg.flicker_margin_s);
  cfg.rate_distance_hz = get("rate_distance_hz", cfg.rate_distance_hz);
  cfg.rate_gaze_hz = get("rate_gaze_hz", cfg.rate_gaze_hz);
  cfg.rate_head_hz = get("rate_head_hz", cfg.rate_head_hz);
  cfg.rate_face_hz = get("rate_face_hz", cfg.rate_face_hz);
  cfg.rate_speech_hz = get("rate_speech_hz", cfg.rate_speech_hz);
  cfg.miss_distance = get("miss_distance", cfg.miss_distance);
  cfg.miss_gaze = get("miss_gaze", cfg.miss_gaze);
  cfg.miss_head = get("miss_head", cfg.miss_head);
  cfg.miss_face = get("miss_face", cfg.miss_face);
  cfg.miss_speech = get("miss_speech", cfg.miss_speech);
  cfg.burst_rate_per_min = get("burst_rate_per_min", cfg.burst_rate_per_min);
  cfg.burst_mean_s = get("burst_mean_s", cfg.burst_mean_s);
  cfg.validate();
  return cfg;
}

void save_generator_config(const GeneratorConfig& cfg,
                           const std::string& path) {
  cfg.validate();
  json j;
  j["schema"] = kGenSchema;
  j["interactions"] = cfg.interactions;
  j["duration_mean_s"] = cfg.duration_mean_s;
  j["duration_sd_s"] = cfg.duration_sd_s;
  j["duration_min_s"] = cfg.duration_min_s;
  j["episode_rate_mean"] = cfg.episode_rate_mean;
  j["episode_rate_reference_s"] = cfg.episode_rate_reference_s;
  j["episode_duration_mean_s"] = cfg.episode_duration_mean_s;
  j["episode_duration_sd_s"] = cfg.episode_duration_sd_s;
  j["final_episode_duration_mean_s"] = cfg.final_episode_duration_mean_s;
  j["final_episode_duration_sd_s"] = cfg.final_episode_duration_sd_s;
  j["episode_min_duration_s"] = cfg.episode_min_duration_s;
  j["episode_time_cap"] = cfg.episode_time_cap;
  j["min_gap_s"] = cfg.min_gap_s;
  j["run_to_end_prob"] = cfg.run_to_end_prob;
  j["onset_ramp_s"] = cfg.onset_ramp_s;
  j["multiparty_fraction"] = cfg.multiparty_fraction;
  j["annotator_jitter_sd_ms"] = cfg.annotator_jitter_sd_ms;
  j["annotator_jitter_max_ms"] = cfg.annotator_jitter_max_ms;
  j["flicker_prob"] = cfg.flicker_prob;
  j["flicker_margin_s"] = cfg.flicker_margin_s;
  j["rate_distance_hz"] = cfg.rate_distance_hz;
  j["rate_gaze_hz"] = cfg.rate_gaze_hz;
  j["rate_head_hz"] = cfg.rate_head_hz;
  j["rate_face_hz"] = cfg.rate_face_hz;
  j["rate_speech_hz"] = cfg.rate_speech_hz;
  j["miss_distance"] = cfg.miss_distance;
  j["miss_gaze"] = cfg.miss_gaze;
  j["miss_head"] = cfg.miss_head;
  j["miss_face"] = cfg.miss_face;
  j["miss_speech"] = cfg.miss_speech;
  j["burst_rate_per_min"] = cfg.burst_rate_per_min;
  j["burst_mean_s"] = cfg.burst_mean_s;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace sed
