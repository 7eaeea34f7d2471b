#include "cntq/manifest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cntq/error.hpp"

namespace cntq {

using ordered_json = nlohmann::ordered_json;

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("IoError: cannot open " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("IoError: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("IoError: cannot move " + tmp.string() + " to " +
                  path.string() + ": " + ec.message());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("FileNotFound: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, err] = std::to_chars(buf, buf + sizeof(buf), v);
  if (err != std::errc{}) throw DataError("ParseError: cannot format double");
  return std::string(buf, end);
}

std::string format_id(const std::string& prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  return prefix + "_" + buf;
}

namespace {

ordered_json params_to_json(const LayerParams& p) {
  return ordered_json{{"areal_density", p.areal_density},
                      {"radius", p.radius},
                      {"growth_rate_mean", p.growth_rate_mean},
                      {"growth_rate_std", p.growth_rate_std},
                      {"orientation_std", p.orientation_std},
                      {"canvas_width", p.canvas_width},
                      {"canvas_height", p.canvas_height}};
}

LayerParams params_from_json(const ordered_json& j) {
  LayerParams p;
  p.areal_density = j.at("areal_density").get<double>();
  p.radius = j.at("radius").get<double>();
  p.growth_rate_mean = j.at("growth_rate_mean").get<double>();
  p.growth_rate_std = j.at("growth_rate_std").get<double>();
  p.orientation_std = j.at("orientation_std").get<double>();
  p.canvas_width = j.at("canvas_width").get<int>();
  p.canvas_height = j.at("canvas_height").get<int>();
  return p;
}

std::vector<ordered_json> read_jsonl(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<ordered_json> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      lines.push_back(ordered_json::parse(line));
    } catch (const ordered_json::exception& e) {
      throw DataError("SchemaError: bad manifest line in " + path.string() +
                      ": " + e.what());
    }
  }
  return lines;
}

}  // namespace

void write_layer_manifest(const std::vector<LayerRecord>& records,
                          const std::filesystem::path& path) {
  std::string text;
  for (const LayerRecord& r : records) {
    const ordered_json j{{"layer_id", r.layer_id},
                         {"class_id", r.class_id},
                         {"image_path", r.image_path},
                         {"params", params_to_json(r.params)},
                         {"F_i", r.buckling_load},
                         {"S_i", r.stiffness},
                         {"seed", r.seed}};
    text += j.dump() + "\n";
  }
  write_text_atomic(path, text);
}

std::vector<LayerRecord> read_layer_manifest(
    const std::filesystem::path& path) {
  std::vector<LayerRecord> records;
  for (const ordered_json& j : read_jsonl(path)) {
    try {
      LayerRecord r;
      r.layer_id = j.at("layer_id").get<std::string>();
      r.class_id = j.at("class_id").get<int>();
      r.image_path = j.at("image_path").get<std::string>();
      r.params = params_from_json(j.at("params"));
      r.buckling_load = j.at("F_i").get<double>();
      r.stiffness = j.at("S_i").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      records.push_back(std::move(r));
    } catch (const ordered_json::exception& e) {
      throw DataError("SchemaError: layer manifest " + path.string() + ": " +
                      e.what());
    }
  }
  return records;
}

void write_mls_manifest(const std::vector<MlsRecord>& records,
                        const std::filesystem::path& path) {
  std::string text;
  for (const MlsRecord& r : records) {
    const ordered_json j{{"mls_id", r.mls_id},
                         {"image_path", r.image_path},
                         {"class_id", r.class_id},
                         {"layer_ids", r.layer_ids},
                         {"weights", r.weights},
                         {"F_eq", r.buckling_load_eq},
                         {"S_eq", r.stiffness_eq},
                         {"N", r.layer_count},
                         {"rho", r.areal_density}};
    text += j.dump() + "\n";
  }
  write_text_atomic(path, text);
}

std::vector<MlsRecord> read_mls_manifest(const std::filesystem::path& path) {
  std::vector<MlsRecord> records;
  for (const ordered_json& j : read_jsonl(path)) {
    try {
      MlsRecord r;
      r.mls_id = j.at("mls_id").get<std::string>();
      r.image_path = j.at("image_path").get<std::string>();
      r.class_id = j.at("class_id").get<int>();
      r.layer_ids = j.at("layer_ids").get<std::vector<std::string>>();
      r.weights = j.at("weights").get<std::vector<double>>();
      r.buckling_load_eq = j.at("F_eq").get<double>();
      r.stiffness_eq = j.at("S_eq").get<double>();
      r.layer_count = j.at("N").get<int>();
      r.areal_density = j.at("rho").get<double>();
      records.push_back(std::move(r));
    } catch (const ordered_json::exception& e) {
      throw DataError("SchemaError: MLS manifest " + path.string() + ": " +
                      e.what());
    }
  }
  return records;
}

void write_split_manifest(const SplitManifest& split,
                          const std::filesystem::path& path) {
  const ordered_json j{
      {"train", split.train}, {"val", split.val}, {"test", split.test}};
  write_text_atomic(path, j.dump(2) + "\n");
}

SplitManifest read_split_manifest(const std::filesystem::path& path) {
  try {
    const ordered_json j = ordered_json::parse(read_text(path));
    SplitManifest split;
    split.train = j.at("train").get<std::vector<std::string>>();
    split.val = j.at("val").get<std::vector<std::string>>();
    split.test = j.at("test").get<std::vector<std::string>>();
    return split;
  } catch (const ordered_json::exception& e) {
    throw DataError("SchemaError: split manifest " + path.string() + ": " +
                    e.what());
  }
}

}  // namespace cntq
