#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cntq/forestgen.hpp"
#include "cntq/labeling.hpp"

namespace cntq {

/// Write text atomically: temp file in the destination directory, then
/// rename. A crashed run never leaves a torn manifest.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);

std::string read_text(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

/// "layer" + index -> "layer_0007".
std::string format_id(const std::string& prefix, int index);

/// JSON-lines layer manifest: one record per line with fields layer_id,
/// class_id, image_path, params{...}, F_i, S_i, seed. Images are not
/// embedded; image_path is relative to the manifest directory.
void write_layer_manifest(const std::vector<LayerRecord>& records,
                          const std::filesystem::path& path);
std::vector<LayerRecord> read_layer_manifest(const std::filesystem::path& path);

/// JSON-lines MLS manifest: fields mls_id, image_path, class_id, layer_ids,
/// weights, F_eq, S_eq, N, rho.
void write_mls_manifest(const std::vector<MlsRecord>& records,
                        const std::filesystem::path& path);
std::vector<MlsRecord> read_mls_manifest(const std::filesystem::path& path);

/// Train/val/test id partition.
struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

void write_split_manifest(const SplitManifest& split,
                          const std::filesystem::path& path);
SplitManifest read_split_manifest(const std::filesystem::path& path);

}  // namespace cntq
