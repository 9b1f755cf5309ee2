#include "sed/models/model_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sed/error.hpp"

namespace sed {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "sed.model.v1";

std::string hash_to_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return std::string(buf);
}

std::uint64_t hash_from_hex(const std::string& s) {
  if (s.size() != 16) throw ValidationError("bad layout hash: " + s);
  std::uint64_t h = 0;
  for (char c : s) {
    h <<= 4;
    if (c >= '0' && c <= '9') h |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      h |= static_cast<std::uint64_t>(c - 'a' + 10);
    else
      throw ValidationError("bad layout hash: " + s);
  }
  return h;
}

json blocks_to_json(const NetworkParams& p) {
  json arr = json::array();
  for (const ParamBlock& b : p.blocks) {
    json jb;
    jb["name"] = b.name;
    jb["rows"] = b.m.rows;
    jb["cols"] = b.m.cols;
    jb["data"] = b.m.data;
    arr.push_back(jb);
  }
  return arr;
}

NetworkParams blocks_from_json(const json& arr) {
  NetworkParams p;
  for (const json& jb : arr) {
    ParamBlock b;
    b.name = jb.at("name").get<std::string>();
    b.m.rows = jb.at("rows").get<std::size_t>();
    b.m.cols = jb.at("cols").get<std::size_t>();
    b.m.data = jb.at("data").get<std::vector<double>>();
    if (b.m.data.size() != b.m.rows * b.m.cols)
      throw ValidationError("parameter block size mismatch: " + b.name);
    p.blocks.push_back(std::move(b));
  }
  return p;
}

}  // namespace

double TrainedModel::score_window(const std::vector<double>& flat) const {
  if (kind == ModelKind::kLogReg) return logreg_score(linear, flat);
  return network_score(net_config, net_params, flat);
}

void save_model(const TrainedModel& model, const std::string& path) {
  json j;
  j["schema"] = kSchema;
  j["kind"] = model_kind_name(model.kind);
  j["window"] = {{"tau_ms", model.window.tau_ms},
                 {"eta_ms", model.window.eta_ms},
                 {"frame_ms", model.window.frame_ms}};
  j["layout_hash"] = hash_to_hex(model.layout_hash);
  j["imputation"] = {{"fill", model.imputation.fill}};
  j["normalization"] = {{"mean", model.normalization.mean},
                        {"sd", model.normalization.sd}};
  if (model.kind == ModelKind::kLogReg) {
    j["linear"] = {{"w", model.linear.w}, {"b", model.linear.b}};
  } else {
    j["network"] = {{"frames", model.net_config.frames},
                    {"frame_dim", model.net_config.frame_dim},
                    {"hidden1", model.net_config.hidden1},
                    {"hidden2", model.net_config.hidden2},
                    {"classes", model.net_config.classes},
                    {"blocks", blocks_to_json(model.net_params)}};
  }
  j["train_meta"] = model.train_meta;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("malformed model file: " + std::string(e.what()));
  }
  if (j.value("schema", "") != kSchema)
    throw ValidationError("unsupported model schema in " + path);

  TrainedModel m;
  m.kind = model_kind_from_name(j.at("kind").get<std::string>());
  m.window.tau_ms = j.at("window").at("tau_ms").get<std::int64_t>();
  m.window.eta_ms = j.at("window").at("eta_ms").get<std::int64_t>();
  m.window.frame_ms = j.at("window").at("frame_ms").get<std::int64_t>();
  m.window.validate();
  m.layout_hash = hash_from_hex(j.at("layout_hash").get<std::string>());
  m.imputation.fill =
      j.at("imputation").at("fill").get<std::vector<double>>();
  m.normalization.mean =
      j.at("normalization").at("mean").get<std::vector<double>>();
  m.normalization.sd =
      j.at("normalization").at("sd").get<std::vector<double>>();

  if (m.kind == ModelKind::kLogReg) {
    m.linear.w = j.at("linear").at("w").get<std::vector<double>>();
    m.linear.b = j.at("linear").at("b").get<double>();
  } else {
    const json& jn = j.at("network");
    m.net_config.kind = m.kind;
    m.net_config.frames = jn.at("frames").get<std::size_t>();
    m.net_config.frame_dim = jn.at("frame_dim").get<std::size_t>();
    m.net_config.hidden1 = jn.at("hidden1").get<std::size_t>();
    m.net_config.hidden2 = jn.at("hidden2").get<std::size_t>();
    m.net_config.classes = jn.at("classes").get<std::size_t>();
    m.net_params = blocks_from_json(jn.at("blocks"));
  }
  if (j.contains("train_meta"))
    m.train_meta =
        j.at("train_meta").get<std::map<std::string, double>>();
  return m;
}

}  // namespace sed
