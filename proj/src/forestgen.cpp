#include "cntq/forestgen.hpp"

#include <algorithm>
#include <cmath>

#include "cntq/error.hpp"
#include "cntq/manifest.hpp"
#include "cntq/png_io.hpp"

namespace cntq {

namespace {

void validate(const LayerParams& p) {
  if (!(p.areal_density > 0.0) || !(p.radius > 0.0) ||
      !(p.growth_rate_mean > 0.0) || p.growth_rate_std < 0.0 ||
      p.orientation_std < 0.0 || p.canvas_width < 1 || p.canvas_height < 1) {
    throw DataError("InvalidParams: layer generator parameters out of range");
  }
}

// Stamp a filled disc of the stroke's half-width; pixels whose center lies
// within rw of (cx, cy) become white. No anti-aliasing.
void stamp(GrayImage& img, double cx, double cy, double rw) {
  const auto x_lo = static_cast<Eigen::Index>(std::floor(cx - rw));
  const auto x_hi = static_cast<Eigen::Index>(std::ceil(cx + rw));
  const auto y_lo = static_cast<Eigen::Index>(std::floor(cy - rw));
  const auto y_hi = static_cast<Eigen::Index>(std::ceil(cy + rw));
  const double r2 = rw * rw;
  for (Eigen::Index y = std::max<Eigen::Index>(y_lo, 0);
       y <= std::min<Eigen::Index>(y_hi, img.rows() - 1); ++y) {
    for (Eigen::Index x = std::max<Eigen::Index>(x_lo, 0);
         x <= std::min<Eigen::Index>(x_hi, img.cols() - 1); ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      if (dx * dx + dy * dy <= r2) img(y, x) = 255;
    }
  }
}

}  // namespace

int strand_count(const LayerParams& params) {
  validate(params);
  return static_cast<int>(
      std::llround(params.areal_density * params.canvas_width / 100.0));
}

std::pair<double, double> physics_proxy(const LayerParams& params,
                                        const std::vector<double>& heights,
                                        SplitMix64* noise_rng) {
  validate(params);
  if (heights.empty()) {
    throw DataError("EmptyLayer: physics proxy needs at least one strand");
  }
  const double r2 = params.radius * params.radius;
  const double r4 = r2 * r2;
  double f = 0.0;
  double s = 0.0;
  for (const double h : heights) {
    f += r4 / (h * h);
    s += r2 / h;
  }
  f *= 1000.0;  // c_F
  s *= 100.0;   // c_S
  if (noise_rng) {
    f *= std::exp(noise_rng->next_normal(0.0, 0.05));
    s *= std::exp(noise_rng->next_normal(0.0, 0.05));
  }
  return {f, s};
}

LayerRecord generate_layer(const LayerParams& params, std::uint64_t seed) {
  validate(params);
  const int n = strand_count(params);

  SplitMix64 rng(seed);
  GrayImage image = GrayImage::Zero(params.canvas_height, params.canvas_width);
  std::vector<double> heights;
  heights.reserve(static_cast<std::size_t>(std::max(n, 0)));

  const double step_len = 2.0;
  const double stroke_width = std::round(2.0 * params.radius);
  const double rw = stroke_width / 2.0;
  const double bottom = static_cast<double>(params.canvas_height - 1);

  // Draw order per strand is fixed: base x, then height (one normal), then
  // one heading jitter normal per step. Reproducibility depends on it.
  for (int j = 0; j < n; ++j) {
    const double base_x = rng.next_u01() * params.canvas_width;
    const double height =
        std::clamp(rng.next_normal(params.growth_rate_mean, params.growth_rate_std),
                   10.0, static_cast<double>(params.canvas_height));
    heights.push_back(height);

    const auto steps = std::max<long long>(1, std::llround(height / step_len));
    double x = base_x;
    double y = bottom;
    double heading = 0.0;  // radians off vertical
    stamp(image, x, y, rw);
    for (long long k = 0; k < steps; ++k) {
      heading += rng.next_normal(0.0, params.orientation_std);
      const double dx = step_len * std::sin(heading);
      const double dy = -step_len * std::cos(heading);
      // sample the 2 px segment at 1 px spacing so strokes stay solid
      stamp(image, x + 0.5 * dx, y + 0.5 * dy, rw);
      x += dx;
      y += dy;
      stamp(image, x, y, rw);
    }
  }

  const auto [f, s] = physics_proxy(params, heights, &rng);

  LayerRecord rec;
  rec.class_id = 0;
  rec.image = std::move(image);
  rec.params = params;
  rec.buckling_load = f;
  rec.stiffness = s;
  rec.seed = seed;
  return rec;
}

std::vector<LayerRecord> generate_dataset(
    const std::vector<LayerParams>& grid, int layers_per_class,
    std::uint64_t master_seed, const std::filesystem::path& out_dir) {
  if (grid.empty()) throw ConfigError("generator grid must be non-empty");
  if (layers_per_class < 1) throw ConfigError("layers_per_class must be >= 1");

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "layers", ec);
  if (ec) {
    throw IoError("IoError: cannot create " + (out_dir / "layers").string());
  }

  std::vector<LayerRecord> records;
  records.reserve(grid.size() * static_cast<std::size_t>(layers_per_class));
  int global = 0;
  for (std::size_t cls = 0; cls < grid.size(); ++cls) {
    for (int l = 0; l < layers_per_class; ++l, ++global) {
      const std::uint64_t seed =
          derive_seed(master_seed, static_cast<std::uint64_t>(global));
      LayerRecord rec = generate_layer(grid[cls], seed);
      rec.class_id = static_cast<int>(cls);
      rec.layer_id = format_id("layer", global);
      rec.image_path = "layers/" + rec.layer_id + ".png";
      save_png(rec.image, out_dir / rec.image_path);
      records.push_back(std::move(rec));
    }
  }
  write_layer_manifest(records, out_dir / "layers.jsonl");
  return records;
}

}  // namespace cntq
