#pragma once

#include <string>
#include <vector>

#include "cntq/image.hpp"
#include "cntq/labeling.hpp"

namespace cntq {

/// Recipe for one MLS build. Layers are ordered back-to-front; weights are
/// positive, sum to 1 within 1e-12 and are non-decreasing, so the front-most
/// layer dominates.
struct BlendSpec {
  std::vector<std::string> layer_ids;
  std::vector<double> weights;
  bool bright_spot_removal = true;
  double blur_sigma = 0.0;  // 0 = skip
  bool apply_inversion = false;
};

/// Normalized Fibonacci weights w_i = F_i / sum(F_1..F_n) with F_1 = F_2 = 1,
/// in ascending order (largest weight last, for the front-most layer).
std::vector<double> fibonacci_weights(int n);

/// Two-image bright-spot-removing blend: common = a AND b, b' = b - common,
/// out = weighted_add(a, b', wa, wb).
GrayImage blend_pair(const GrayImage& a, const GrayImage& b, double wa,
                     double wb);

/// N-layer blend. With removal on, a running bitwise-OR occlusion mask strips
/// each layer's already-covered pixels before it is accumulated; accumulation
/// is in real arithmetic with a single quantization at the end. With removal
/// off, a plain weighted sum, also quantized once.
GrayImage blend_stack(const std::vector<GrayImage>& layers,
                      const std::vector<double>& weights,
                      bool remove_bright_spots);

/// Build an MlsRecord from same-class layers: validate compatibility, blend,
/// optionally Gaussian-blur then invert, and attach F_eq / S_eq labels.
/// mls_id and image_path are left for the caller to assign.
MlsRecord make_mls(const BlendSpec& spec,
                   const std::vector<LayerRecord>& layers);

}  // namespace cntq
