#include "cntq/features.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "cntq/error.hpp"
#include "cntq/manifest.hpp"

namespace cntq {

namespace {

void intensity_histogram(const GrayImage& img, double* out16) {
  std::array<double, 16> counts{};
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    counts[img.data()[i] >> 4] += 1.0;
  }
  const double total = static_cast<double>(img.size());
  for (int b = 0; b < 16; ++b) out16[b] = counts[b] / total;
}

void gradient_histogram(const GrayImage& img, double* out8) {
  std::array<double, 8> mass{};
  double total = 0.0;
  for (Eigen::Index y = 1; y < img.rows() - 1; ++y) {
    for (Eigen::Index x = 1; x < img.cols() - 1; ++x) {
      const double gx = static_cast<double>(img(y, x + 1)) - img(y, x - 1);
      const double gy = static_cast<double>(img(y + 1, x)) - img(y - 1, x);
      const double mag = std::sqrt(gx * gx + gy * gy);
      if (mag == 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta = 0.0;
      auto bin = static_cast<int>(theta / (std::numbers::pi / 8.0));
      if (bin > 7) bin = 7;
      mass[bin] += mag;
      total += mag;
    }
  }
  for (int b = 0; b < 8; ++b) out8[b] = total > 0.0 ? mass[b] / total : 0.0;
}

// {contrast, correlation, energy, homogeneity} of the co-occurrence matrix of
// the 16-level quantized image for one (dx, dy) offset. Ordered pairs, not
// symmetrized. Correlation is 0 when either marginal variance is 0.
void glcm_stats(const GrayImage& img, int dx, int dy, double* out4) {
  std::array<double, 256> counts{};
  double total = 0.0;
  const Eigen::Index y_lo = std::max<Eigen::Index>(0, -dy);
  const Eigen::Index y_hi = img.rows() - std::max<Eigen::Index>(0, dy);
  const Eigen::Index x_lo = std::max<Eigen::Index>(0, -dx);
  const Eigen::Index x_hi = img.cols() - std::max<Eigen::Index>(0, dx);
  for (Eigen::Index y = y_lo; y < y_hi; ++y) {
    for (Eigen::Index x = x_lo; x < x_hi; ++x) {
      const int i = img(y, x) >> 4;
      const int j = img(y + dy, x + dx) >> 4;
      counts[i * 16 + j] += 1.0;
      total += 1.0;
    }
  }

  double contrast = 0.0;
  double energy = 0.0;
  double homogeneity = 0.0;
  std::array<double, 16> pi{};
  std::array<double, 16> pj{};
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const double p = counts[i * 16 + j] / total;
      const int d = i - j;
      contrast += p * d * d;
      energy += p * p;
      homogeneity += p / (1.0 + d * d);
      pi[i] += p;
      pj[j] += p;
    }
  }
  double mu_i = 0.0, mu_j = 0.0;
  for (int k = 0; k < 16; ++k) {
    mu_i += k * pi[k];
    mu_j += k * pj[k];
  }
  double var_i = 0.0, var_j = 0.0;
  for (int k = 0; k < 16; ++k) {
    var_i += pi[k] * (k - mu_i) * (k - mu_i);
    var_j += pj[k] * (k - mu_j) * (k - mu_j);
  }
  double correlation = 0.0;
  if (var_i > 0.0 && var_j > 0.0) {
    double cov = 0.0;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        cov += counts[i * 16 + j] / total * (i - mu_i) * (j - mu_j);
      }
    }
    correlation = cov / std::sqrt(var_i * var_j);
  }
  out4[0] = contrast;
  out4[1] = correlation;
  out4[2] = energy;
  out4[3] = homogeneity;
}

// Mean over all fully contained k x k windows of the window's population
// variance; 0 when no window fits.
double local_variance_mean(const GrayImage& img, int k) {
  const Eigen::Index rows = img.rows();
  const Eigen::Index cols = img.cols();
  if (rows < k || cols < k) return 0.0;

  // summed-area tables; integer-valued doubles stay exact at these sizes
  RealImage s1 = RealImage::Zero(rows + 1, cols + 1);
  RealImage s2 = RealImage::Zero(rows + 1, cols + 1);
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      const double v = img(y, x);
      s1(y + 1, x + 1) = v + s1(y, x + 1) + s1(y + 1, x) - s1(y, x);
      s2(y + 1, x + 1) = v * v + s2(y, x + 1) + s2(y + 1, x) - s2(y, x);
    }
  }
  const double n = static_cast<double>(k) * k;
  double acc = 0.0;
  Eigen::Index windows = 0;
  for (Eigen::Index y = 0; y + k <= rows; ++y) {
    for (Eigen::Index x = 0; x + k <= cols; ++x) {
      const double sum = s1(y + k, x + k) - s1(y, x + k) - s1(y + k, x) + s1(y, x);
      const double sq = s2(y + k, x + k) - s2(y, x + k) - s2(y + k, x) + s2(y, x);
      acc += (sq - sum * sum / n) / n;
      ++windows;
    }
  }
  return acc / static_cast<double>(windows);
}

}  // namespace

FeatureVector extract_texture_features(const GrayImage& img) {
  if (img.rows() < 8 || img.cols() < 8) {
    throw DataError("ImageTooSmall: texture features need at least 8x8");
  }
  FeatureVector fv;
  fv.source = FeatureSource::kBuiltinTexture;
  fv.values.resize(kTextureFeatureDim);
  double* out = fv.values.data();

  intensity_histogram(img, out);
  gradient_histogram(img, out + 16);
  static constexpr std::array<std::pair<int, int>, 4> kOffsets{
      {{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  for (std::size_t o = 0; o < kOffsets.size(); ++o) {
    glcm_stats(img, kOffsets[o].first, kOffsets[o].second, out + 24 + 4 * o);
  }
  out[40] = local_variance_mean(img, 3);
  out[41] = local_variance_mean(img, 7);
  out[42] = local_variance_mean(img, 15);
  return fv;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double_field(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [ptr, err] = std::from_chars(begin, end, v);
  if (err != std::errc{} || ptr != end) {
    throw DataError("ParseError: bad numeric field '" + s + "' " + context);
  }
  return v;
}

}  // namespace

NamedFeatures read_feature_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("ParseError: empty feature CSV " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "mls_id") {
    throw DataError("ParseError: feature CSV header must be mls_id,f0,... in " +
                    path.string());
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "f" + std::to_string(i - 1)) {
      throw DataError("ParseError: feature CSV header column " +
                      std::to_string(i) + " must be f" + std::to_string(i - 1) +
                      " in " + path.string());
    }
  }
  const std::size_t dim = header.size() - 1;

  NamedFeatures rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != dim + 1) {
      throw DataError("RaggedRows: line " + std::to_string(line_no) + " of " +
                      path.string() + " has " +
                      std::to_string(fields.size() - 1) + " values, expected " +
                      std::to_string(dim));
    }
    FeatureVector fv;
    fv.source = FeatureSource::kImported;
    fv.values.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      fv.values[static_cast<Eigen::Index>(i)] = parse_double_field(
          fields[i + 1], "at line " + std::to_string(line_no));
    }
    rows.emplace_back(fields[0], std::move(fv));
  }
  return rows;
}

NamedFeatures import_features(const std::filesystem::path& csv_path,
                              const std::vector<MlsRecord>& manifest) {
  NamedFeatures rows = read_feature_csv(csv_path);
  std::set<std::string> known;
  for (const MlsRecord& r : manifest) known.insert(r.mls_id);
  for (const auto& [id, fv] : rows) {
    if (!known.count(id)) {
      throw DataError("UnknownId: feature row '" + id +
                      "' is not in the MLS manifest");
    }
    for (Eigen::Index i = 0; i < fv.values.size(); ++i) {
      if (!std::isfinite(fv.values[i])) {
        throw DataError("ParseError: non-finite feature for '" + id + "'");
      }
    }
  }
  return rows;
}

void write_feature_csv(const std::filesystem::path& path,
                       const NamedFeatures& rows) {
  std::size_t dim = rows.empty() ? 0 : rows.front().second.values.size();
  std::string text = "mls_id";
  for (std::size_t i = 0; i < dim; ++i) text += ",f" + std::to_string(i);
  text += "\n";
  for (const auto& [id, fv] : rows) {
    if (static_cast<std::size_t>(fv.values.size()) != dim) {
      throw DataError("RaggedRows: inconsistent feature dimensions for '" +
                      id + "'");
    }
    text += id;
    for (Eigen::Index i = 0; i < fv.values.size(); ++i) {
      text += "," + format_double(fv.values[i]);
    }
    text += "\n";
  }
  write_text_atomic(path, text);
}

}  // namespace cntq
