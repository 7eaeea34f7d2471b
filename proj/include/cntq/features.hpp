#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cntq/image.hpp"
#include "cntq/labeling.hpp"

namespace cntq {

enum class FeatureSource { kBuiltinTexture, kImported };

/// Fixed-dimension real descriptor of one image. The built-in texture
/// descriptor is 43-d; imported vectors take their dimension from the file.
struct FeatureVector {
  Eigen::VectorXd values;
  FeatureSource source = FeatureSource::kBuiltinTexture;
};

inline constexpr int kTextureFeatureDim = 43;

/// Built-in 43-d texture descriptor, concatenated in this order:
///  [0,16)  normalized 16-bin intensity histogram (bin width 16)
///  [16,24) magnitude-weighted 8-bin gradient-orientation histogram
///          (central differences on interior pixels, folded to [0, pi),
///          all-zero when the image has no gradient)
///  [24,40) co-occurrence {contrast, correlation, energy, homogeneity} on a
///          16-level quantized image for offsets (1,0),(0,1),(1,1),(1,-1)
///  [40,43) local variance means at window sizes 3, 7, 15
/// Image must be at least 8x8.
FeatureVector extract_texture_features(const GrayImage& img);

using NamedFeatures = std::vector<std::pair<std::string, FeatureVector>>;

/// Parse an externally computed feature CSV ("mls_id,f0,...,f{D-1}"). Every
/// row's mls_id must exist in the manifest; rows must share one dimension.
NamedFeatures import_features(const std::filesystem::path& csv_path,
                              const std::vector<MlsRecord>& manifest);

/// Write features in the same CSV format import_features reads.
void write_feature_csv(const std::filesystem::path& path,
                       const NamedFeatures& rows);

/// Raw CSV reader without manifest validation (shared by import and the
/// training stage).
NamedFeatures read_feature_csv(const std::filesystem::path& path);

}  // namespace cntq
