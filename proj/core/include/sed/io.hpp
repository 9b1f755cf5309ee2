#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sed/annotation.hpp"
#include "sed/detector.hpp"
#include "sed/stream.hpp"
#include "sed/synth.hpp"

namespace sed {

// On-disk corpus layout: a manifest JSON (schema sed.corpus.v1) naming one
// sample file and one annotation file per interaction. Sample files are
// JSONL, one record per sample, with a schema header line
// (sed.stream.v1); annotation files likewise (sed.annotation.v1). Readers
// tolerate a missing header for hand-made files.

struct CorpusEntry {
  std::string id;
  std::string stream_file;      // relative to the manifest directory
  std::string annotation_file;  // likewise
  std::int64_t duration_ms = 0;
  bool multiparty = false;
};

struct CorpusManifest {
  std::int64_t frame_ms = 500;
  std::string layout = "standard";
  std::vector<CorpusEntry> entries;
};

// Writes streams/, annotations/ and manifest.json under dir.
void write_corpus_files(const std::vector<SyntheticInteraction>& corpus,
                        const std::string& dir, std::int64_t frame_ms);

CorpusManifest read_manifest(const std::string& manifest_path);

// Samples in file order. Null array entries decode as missing readings.
std::vector<StreamSample> read_stream_file(const std::string& path);

void write_stream_file(const std::string& path, const std::string& id,
                       std::int64_t duration_ms,
                       const std::vector<StreamSeries>& streams);

// All annotator tracks in the file, keyed by annotator name order of first
// appearance.
std::vector<AnnotationTrack> read_annotation_file(const std::string& path);

void write_annotation_file(const std::string& path, const std::string& id,
                           std::int64_t duration_ms, bool multiparty,
                           const std::vector<AnnotationTrack>& tracks);

// Shifts timestamps so the earliest sample lands on 0 (for captures whose
// clock does not start at the interaction start).
void normalize_clock(std::vector<StreamSample>& samples);

// Decision log (JSONL, schema sed.decisions.v1).
void write_decisions(const std::string& path,
                     const std::vector<Decision>& decisions,
                     const std::string& model_name);
std::vector<Decision> read_decisions(const std::string& path);

}  // namespace sed
