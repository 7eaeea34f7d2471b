#include "cntq/image.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cntq/error.hpp"

namespace cntq {

namespace {

void require_same_shape(const GrayImage& a, const GrayImage& b,
                        const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError(std::string("DimensionMismatch: ") + op + " needs equal sizes, got " +
                    std::to_string(a.cols()) + "x" + std::to_string(a.rows()) + " and " +
                    std::to_string(b.cols()) + "x" + std::to_string(b.rows()));
  }
}

// Reflect-101 index: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ... (edge not repeated).
Eigen::Index reflect101(Eigen::Index i, Eigen::Index n) {
  if (n == 1) return 0;
  const Eigen::Index period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  return i < n ? i : period - i;
}

std::vector<double> gaussian_kernel(double sigma) {
  const auto radius = static_cast<Eigen::Index>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (Eigen::Index i = -radius; i <= radius; ++i) {
    const double w = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    kernel[i + radius] = w;
    total += w;
  }
  for (double& w : kernel) w /= total;
  return kernel;
}

}  // namespace

GrayImage quantize(const RealImage& plane) {
  GrayImage out(plane.rows(), plane.cols());
  const double* src = plane.data();
  std::uint8_t* dst = out.data();
  for (Eigen::Index i = 0; i < plane.size(); ++i) {
    const double v = std::round(src[i]);  // std::round is half away from zero
    dst[i] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
  }
  return out;
}

GrayImage bitwise_and(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "bitwise_and");
  return a & b;
}

GrayImage bitwise_or(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "bitwise_or");
  return a | b;
}

GrayImage saturating_subtract(const GrayImage& a, const GrayImage& b) {
  require_same_shape(a, b, "saturating_subtract");
  GrayImage out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const std::uint8_t x = a.data()[i];
    const std::uint8_t y = b.data()[i];
    out.data()[i] = x > y ? static_cast<std::uint8_t>(x - y) : std::uint8_t{0};
  }
  return out;
}

GrayImage weighted_add(const GrayImage& a, const GrayImage& b, double wa,
                       double wb) {
  require_same_shape(a, b, "weighted_add");
  if (wa < 0.0 || wb < 0.0) {
    throw DataError("NegativeWeight: weighted_add weights must be >= 0");
  }
  const RealImage sum =
      wa * a.cast<double>() + wb * b.cast<double>();
  return quantize(sum);
}

GrayImage invert(const GrayImage& a) {
  return (255 - a.cast<int>()).cast<std::uint8_t>();
}

GrayImage gaussian_blur(const GrayImage& a, double sigma) {
  if (!(sigma > 0.0)) {
    throw DataError("InvalidSigma: gaussian_blur needs sigma > 0");
  }
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const auto radius = static_cast<Eigen::Index>(kernel.size() / 2);
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();

  RealImage horizontal(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (Eigen::Index k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] *
               static_cast<double>(a(y, reflect101(x + k, cols)));
      }
      horizontal(y, x) = acc;
    }
  }

  RealImage vertical(rows, cols);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (Eigen::Index k = -radius; k <= radius; ++k) {
        acc += kernel[k + radius] * horizontal(reflect101(y + k, rows), x);
      }
      vertical(y, x) = acc;
    }
  }
  return quantize(vertical);
}

namespace {

void require_crop_fits(const GrayImage& a, Eigen::Index w, Eigen::Index h) {
  if (w < 1 || h < 1 || w > a.cols() || h > a.rows()) {
    throw DataError("CropTooLarge: requested " + std::to_string(w) + "x" +
                    std::to_string(h) + " from " + std::to_string(a.cols()) +
                    "x" + std::to_string(a.rows()));
  }
}

}  // namespace

GrayImage center_crop(const GrayImage& a, Eigen::Index w, Eigen::Index h) {
  require_crop_fits(a, w, h);
  const Eigen::Index x0 = (a.cols() - w) / 2;
  const Eigen::Index y0 = (a.rows() - h) / 2;
  return a.block(y0, x0, h, w);
}

GrayImage random_crop(const GrayImage& a, Eigen::Index w, Eigen::Index h,
                      SplitMix64& rng) {
  require_crop_fits(a, w, h);
  const auto x0 = static_cast<Eigen::Index>(
      rng.next_below(static_cast<std::uint64_t>(a.cols() - w + 1)));
  const auto y0 = static_cast<Eigen::Index>(
      rng.next_below(static_cast<std::uint64_t>(a.rows() - h + 1)));
  return a.block(y0, x0, h, w);
}

}  // namespace cntq
