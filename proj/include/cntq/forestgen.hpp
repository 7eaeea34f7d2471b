#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cntq/image.hpp"

namespace cntq {

/// Generator parameters for one class of 2D synthetic layers.
struct LayerParams {
  double areal_density = 30.0;   ///< strands per 100 px of substrate width
  double radius = 1.0;           ///< stroke half-width, px
  double growth_rate_mean = 520.0;  ///< mean strand height, px
  double growth_rate_std = 40.0;    ///< height spread, px
  double orientation_std = 0.06;    ///< per-step heading jitter, radians
  int canvas_width = 907;
  int canvas_height = 725;
};

/// One generated 2D layer: binary white-on-black strand image plus its
/// physics-proxy labels. (params, seed) reproduce it bit-exactly.
struct LayerRecord {
  std::string layer_id;
  int class_id = 0;
  GrayImage image;
  LayerParams params;
  double buckling_load = 0.0;  // F_i
  double stiffness = 0.0;      // S_i
  std::uint64_t seed = 0;
  std::string image_path;  // relative to the manifest directory
};

/// Strand count n = round(areal_density * canvas_width / 100).
int strand_count(const LayerParams& params);

/// Euler-buckling / axial-stiffness scaling stand-in for the FEM labels:
/// F = 1000 * sum_j radius^4 / h_j^2, S = 100 * sum_j radius^2 / h_j over
/// realized strand heights. When noise_rng is non-null, F and S are each
/// multiplied by an independent exp(N(0, 0.05)) draw (F first).
std::pair<double, double> physics_proxy(const LayerParams& params,
                                        const std::vector<double>& heights,
                                        SplitMix64* noise_rng);

/// Grow and rasterize one layer. Strands are polylines grown upward from
/// uniformly random base positions on the bottom edge, heading = vertical
/// plus accumulated N(0, orientation_std) jitter, step length 2 px, total
/// height N(growth_rate_mean, growth_rate_std) clamped to
/// [10, canvas_height]; strokes are binary white with width round(2*radius).
LayerRecord generate_layer(const LayerParams& params, std::uint64_t seed);

/// Generate layers_per_class layers for every class in the grid, write the
/// PNGs under out_dir/layers/ and a JSON-lines manifest out_dir/layers.jsonl.
/// Per-layer seed = derive_seed(master_seed, global_layer_index); class id =
/// index in the grid.
std::vector<LayerRecord> generate_dataset(
    const std::vector<LayerParams>& grid, int layers_per_class,
    std::uint64_t master_seed, const std::filesystem::path& out_dir);

}  // namespace cntq
