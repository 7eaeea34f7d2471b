#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "cntq/rng.hpp"

namespace cntq {

/// Dense row-major raster plane. Row 0 is the top image row; element (y, x)
/// is the pixel in row y, column x.
template <typename Scalar>
using ImagePlane =
    Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit grayscale raster, the universal pixel container.
using GrayImage = ImagePlane<std::uint8_t>;

/// Real-valued working plane for kernel convolution and blend accumulation.
using RealImage = ImagePlane<double>;

/// Round half away from zero and clamp to [0, 255]. The single quantization
/// rule used everywhere real values become pixels.
GrayImage quantize(const RealImage& plane);

/// Per-bit AND of two equally sized images.
GrayImage bitwise_and(const GrayImage& a, const GrayImage& b);

/// Per-bit OR of two equally sized images.
GrayImage bitwise_or(const GrayImage& a, const GrayImage& b);

/// max(a - b, 0) per pixel.
GrayImage saturating_subtract(const GrayImage& a, const GrayImage& b);

/// quantize(wa*a + wb*b). Weights must be non-negative.
GrayImage weighted_add(const GrayImage& a, const GrayImage& b, double wa,
                       double wb);

/// 255 - a per pixel.
GrayImage invert(const GrayImage& a);

/// Separable Gaussian convolution. Kernel radius r = ceil(3*sigma), weights
/// exp(-i^2 / (2*sigma^2)) normalized to sum 1 in real arithmetic,
/// reflect-101 borders, one quantization after both passes.
GrayImage gaussian_blur(const GrayImage& a, double sigma);

/// Crop with top-left at (floor((width-w)/2), floor((height-h)/2)).
GrayImage center_crop(const GrayImage& a, Eigen::Index w, Eigen::Index h);

/// Crop with top-left x uniform in [0, width-w] and y uniform in
/// [0, height-h]; x is drawn before y.
GrayImage random_crop(const GrayImage& a, Eigen::Index w, Eigen::Index h,
                      SplitMix64& rng);

}  // namespace cntq
