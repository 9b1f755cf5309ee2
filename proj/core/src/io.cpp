#include "sed/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "sed/error.hpp"

namespace sed {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kStreamSchema = "sed.stream.v1";
constexpr const char* kAnnotationSchema = "sed.annotation.v1";
constexpr const char* kCorpusSchema = "sed.corpus.v1";
constexpr const char* kDecisionsSchema = "sed.decisions.v1";

json parse_line(const std::string& line, const std::string& path,
                std::size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError(path + ":" + std::to_string(lineno) + ": " +
                          e.what());
  }
}

json values_to_json(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) {
    if (std::isfinite(v)) arr.push_back(v);
    else arr.push_back(nullptr);
  }
  return arr;
}

std::vector<double> values_from_json(const json& arr) {
  std::vector<double> out;
  out.reserve(arr.size());
  for (const json& v : arr) {
    if (v.is_null()) out.push_back(std::numeric_limits<double>::quiet_NaN());
    else out.push_back(v.get<double>());
  }
  return out;
}

void write_lines(const std::string& path, const std::vector<json>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const json& j : lines) out << j.dump() << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void write_stream_file(const std::string& path, const std::string& id,
                       std::int64_t duration_ms,
                       const std::vector<StreamSeries>& streams) {
  std::vector<json> lines;
  json header;
  header["schema"] = kStreamSchema;
  header["interaction"] = id;
  header["duration_ms"] = duration_ms;
  lines.push_back(header);

  // Merge all streams into one time-ordered feed, stable within each stream,
  // so the file replays directly into the online detector.
  struct Ref {
    const StreamSample* s;
    std::size_t seq;
  };
  std::vector<Ref> refs;
  std::size_t seq = 0;
  for (const StreamSeries& series : streams)
    for (const StreamSample& s : series.samples) refs.push_back({&s, seq++});
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
    if (a.s->t_ms != b.s->t_ms) return a.s->t_ms < b.s->t_ms;
    return a.seq < b.seq;
  });

  for (const Ref& r : refs) {
    json j;
    j["t_ms"] = r.s->t_ms;
    j["stream"] = stream_name(r.s->stream);
    j["values"] = values_to_json(r.s->values);
    lines.push_back(std::move(j));
  }
  write_lines(path, lines);
}

std::vector<StreamSample> read_stream_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);

  std::vector<StreamSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    if (j.contains("schema")) {
      if (j["schema"] != kStreamSchema)
        throw ValidationError(path + ": unsupported sample file schema");
      continue;
    }
    StreamSample s;
    s.t_ms = j.at("t_ms").get<std::int64_t>();
    s.stream = stream_from_name(j.at("stream").get<std::string>());
    s.values = values_from_json(j.at("values"));
    out.push_back(std::move(s));
  }
  return out;
}

void write_annotation_file(const std::string& path, const std::string& id,
                           std::int64_t duration_ms, bool multiparty,
                           const std::vector<AnnotationTrack>& tracks) {
  std::vector<json> lines;
  json header;
  header["schema"] = kAnnotationSchema;
  header["interaction"] = id;
  header["duration_ms"] = duration_ms;
  header["multiparty"] = multiparty;
  json names = json::array();
  for (const AnnotationTrack& t : tracks) names.push_back(t.annotator);
  header["annotators"] = names;
  lines.push_back(header);

  for (const AnnotationTrack& t : tracks) {
    for (const Segment& s : t.segments) {
      json j;
      j["annotator"] = t.annotator;
      j["interaction"] = t.interaction_id;
      j["start_ms"] = s.start_ms;
      j["end_ms"] = s.end_ms;
      j["label"] = "SED";
      j["cues"] = s.cues;
      j["affects"] = s.affects;
      if (s.cause.empty()) j["cause"] = nullptr;
      else j["cause"] = s.cause;
      lines.push_back(std::move(j));
    }
  }
  write_lines(path, lines);
}

std::vector<AnnotationTrack> read_annotation_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);

  std::vector<AnnotationTrack> tracks;
  std::string interaction;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    if (j.contains("schema")) {
      if (j["schema"] != kAnnotationSchema)
        throw ValidationError(path + ": unsupported annotation file schema");
      interaction = j.value("interaction", "");
      continue;
    }
    const std::string annotator = j.at("annotator").get<std::string>();
    AnnotationTrack* track = nullptr;
    for (AnnotationTrack& t : tracks)
      if (t.annotator == annotator) track = &t;
    if (!track) {
      tracks.push_back({annotator,
                        j.value("interaction", interaction),
                        {}});
      track = &tracks.back();
    }
    Segment s;
    s.start_ms = j.at("start_ms").get<std::int64_t>();
    s.end_ms = j.at("end_ms").get<std::int64_t>();
    if (j.contains("cues")) s.cues = j["cues"].get<std::vector<std::string>>();
    if (j.contains("affects"))
      s.affects = j["affects"].get<std::vector<std::string>>();
    if (j.contains("cause") && !j["cause"].is_null())
      s.cause = j["cause"].get<std::string>();
    track->segments.push_back(std::move(s));
  }
  return tracks;
}

void write_corpus_files(const std::vector<SyntheticInteraction>& corpus,
                        const std::string& dir, std::int64_t frame_ms) {
  fs::create_directories(fs::path(dir) / "streams");
  fs::create_directories(fs::path(dir) / "annotations");

  json manifest;
  manifest["schema"] = kCorpusSchema;
  manifest["frame_ms"] = frame_ms;
  manifest["layout"] = "standard";
  json entries = json::array();

  for (const SyntheticInteraction& it : corpus) {
    const std::string stream_rel = "streams/" + it.id + ".jsonl";
    const std::string ann_rel = "annotations/" + it.id + ".jsonl";
    write_stream_file((fs::path(dir) / stream_rel).string(), it.id,
                      it.duration_ms, it.streams);
    write_annotation_file((fs::path(dir) / ann_rel).string(), it.id,
                          it.duration_ms, it.multiparty,
                          {it.annotator_a, it.annotator_b});
    json e;
    e["id"] = it.id;
    e["stream_file"] = stream_rel;
    e["annotation_file"] = ann_rel;
    e["duration_ms"] = it.duration_ms;
    e["multiparty"] = it.multiparty;
    entries.push_back(std::move(e));
  }
  manifest["interactions"] = std::move(entries);

  const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + manifest_path);
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + manifest_path);
}

CorpusManifest read_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + manifest_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("malformed manifest: " + std::string(e.what()));
  }
  if (j.value("schema", "") != kCorpusSchema)
    throw ValidationError("unsupported corpus schema in " + manifest_path);

  CorpusManifest m;
  m.frame_ms = j.value("frame_ms", static_cast<std::int64_t>(500));
  m.layout = j.value("layout", "standard");
  for (const json& e : j.at("interactions")) {
    CorpusEntry entry;
    entry.id = e.at("id").get<std::string>();
    entry.stream_file = e.at("stream_file").get<std::string>();
    entry.annotation_file = e.at("annotation_file").get<std::string>();
    entry.duration_ms = e.value("duration_ms", static_cast<std::int64_t>(0));
    entry.multiparty = e.value("multiparty", false);
    m.entries.push_back(std::move(entry));
  }
  return m;
}

void normalize_clock(std::vector<StreamSample>& samples) {
  if (samples.empty()) return;
  std::int64_t lo = samples.front().t_ms;
  for (const StreamSample& s : samples) lo = std::min(lo, s.t_ms);
  for (StreamSample& s : samples) s.t_ms -= lo;
}

void write_decisions(const std::string& path,
                     const std::vector<Decision>& decisions,
                     const std::string& model_name) {
  std::vector<json> lines;
  json header;
  header["schema"] = kDecisionsSchema;
  header["model"] = model_name;
  lines.push_back(header);
  for (const Decision& d : decisions) {
    json j;
    j["interaction"] = d.interaction_id;
    j["frame"] = d.frame_index;
    j["t_ms"] = d.t_ms;
    j["labeled_t_ms"] = d.labeled_t_ms;
    j["label"] = d.label ? "SED" : "ENG";
    j["p_sed"] = d.p_sed;
    j["model"] = model_name;
    lines.push_back(std::move(j));
  }
  write_lines(path, lines);
}

std::vector<Decision> read_decisions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<Decision> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    if (j.contains("schema")) {
      if (j["schema"] != kDecisionsSchema)
        throw ValidationError(path + ": unsupported decision log schema");
      continue;
    }
    Decision d;
    d.interaction_id = j.at("interaction").get<std::string>();
    d.frame_index = j.value("frame", static_cast<std::size_t>(0));
    d.t_ms = j.at("t_ms").get<std::int64_t>();
    d.labeled_t_ms = j.value("labeled_t_ms", d.t_ms);
    d.label = j.at("label").get<std::string>() == "SED" ? 1 : 0;
    d.p_sed = j.at("p_sed").get<double>();
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace sed
