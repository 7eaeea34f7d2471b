#include "cntq/blend.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "cntq/error.hpp"

namespace cntq {

std::vector<double> fibonacci_weights(int n) {
  if (n < 1) throw DataError("InvalidCount: fibonacci_weights needs n >= 1");
  if (n > 90) throw DataError("InvalidCount: fibonacci_weights overflows past n = 90");
  std::vector<std::uint64_t> fib(static_cast<std::size_t>(n));
  std::uint64_t total = 0;
  for (int i = 0; i < n; ++i) {
    fib[i] = i < 2 ? 1 : fib[i - 1] + fib[i - 2];
    total += fib[i];
  }
  std::vector<double> weights(fib.size());
  for (int i = 0; i < n; ++i) {
    weights[i] = static_cast<double>(fib[i]) / static_cast<double>(total);
  }
  return weights;
}

GrayImage blend_pair(const GrayImage& a, const GrayImage& b, double wa,
                     double wb) {
  const GrayImage common = bitwise_and(a, b);
  const GrayImage b_clean = saturating_subtract(b, common);
  return weighted_add(a, b_clean, wa, wb);
}

GrayImage blend_stack(const std::vector<GrayImage>& layers,
                      const std::vector<double>& weights,
                      bool remove_bright_spots) {
  if (layers.empty()) throw DataError("EmptyStack: blend_stack needs >= 1 layer");
  if (layers.size() != weights.size()) {
    throw DataError("WeightCountMismatch: " + std::to_string(layers.size()) +
                    " layers vs " + std::to_string(weights.size()) + " weights");
  }
  const Eigen::Index rows = layers.front().rows();
  const Eigen::Index cols = layers.front().cols();
  for (const GrayImage& layer : layers) {
    if (layer.rows() != rows || layer.cols() != cols) {
      throw DataError("DimensionMismatch: blend_stack layers differ in size");
    }
  }
  for (const double w : weights) {
    if (!(w > 0.0)) throw DataError("NegativeWeight: blend weights must be > 0");
  }

  RealImage acc = RealImage::Zero(rows, cols);
  if (remove_bright_spots) {
    GrayImage mask = GrayImage::Zero(rows, cols);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const GrayImage cleaned =
          saturating_subtract(layers[i], bitwise_and(layers[i], mask));
      mask = bitwise_or(mask, cleaned);
      acc += weights[i] * cleaned.cast<double>();
    }
  } else {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      acc += weights[i] * layers[i].cast<double>();
    }
  }
  return quantize(acc);
}

namespace {

void validate_spec(const BlendSpec& spec, std::size_t layer_count) {
  const std::size_t n = spec.layer_ids.size();
  if (n == 0) throw DataError("EmptyStack: blend spec lists no layers");
  if (n != spec.weights.size()) {
    throw DataError("WeightCountMismatch: blend spec has " +
                    std::to_string(n) + " layers vs " +
                    std::to_string(spec.weights.size()) + " weights");
  }
  if (n != layer_count) {
    throw DataError("WeightCountMismatch: blend spec lists " +
                    std::to_string(n) + " layers, got " +
                    std::to_string(layer_count));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    if (!(spec.weights[i] > 0.0)) {
      throw DataError("NegativeWeight: blend weights must be > 0");
    }
    if (i > 0 && spec.weights[i] < spec.weights[i - 1]) {
      throw DataError("InvalidParams: blend weights must be non-decreasing");
    }
    sum += spec.weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DataError("InvalidParams: blend weights must sum to 1");
  }
  if (spec.blur_sigma < 0.0) {
    throw DataError("InvalidSigma: blur_sigma must be >= 0");
  }
}

}  // namespace

MlsRecord make_mls(const BlendSpec& spec,
                   const std::vector<LayerRecord>& layers) {
  validate_spec(spec, layers.size());
  const auto [class_id, rho] = validate_stack(layers);

  std::vector<GrayImage> planes;
  std::vector<double> f_values;
  std::vector<double> s_values;
  planes.reserve(layers.size());
  for (const LayerRecord& layer : layers) {
    planes.push_back(layer.image);
    f_values.push_back(layer.buckling_load);
    s_values.push_back(layer.stiffness);
  }

  GrayImage blended =
      blend_stack(planes, spec.weights, spec.bright_spot_removal);
  if (spec.blur_sigma > 0.0) blended = gaussian_blur(blended, spec.blur_sigma);
  if (spec.apply_inversion) blended = invert(blended);

  MlsRecord rec;
  rec.class_id = class_id;
  rec.layer_ids = spec.layer_ids;
  rec.weights = spec.weights;
  rec.buckling_load_eq = equivalent_buckling_load(f_values, rho);
  rec.stiffness_eq = equivalent_stiffness(s_values);
  rec.layer_count = static_cast<int>(layers.size());
  rec.areal_density = rho;
  rec.image = std::move(blended);
  return rec;
}

}  // namespace cntq
