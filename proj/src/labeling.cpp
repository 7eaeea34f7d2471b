#include "cntq/labeling.hpp"

#include <cmath>
#include <string>

#include "cntq/error.hpp"
#include "cntq/manifest.hpp"
#include "cntq/svg.hpp"

namespace cntq {

double equivalent_buckling_load(const std::vector<double>& buckling_loads,
                                double rho) {
  if (buckling_loads.empty()) {
    throw DataError("EmptyStack: equivalent_buckling_load needs >= 1 layer");
  }
  if (!(rho > 0.0)) {
    throw DataError("NonPositiveInput: rho must be > 0");
  }
  double sum = 0.0;
  for (const double f : buckling_loads) {
    if (!(f > 0.0)) throw DataError("NonPositiveInput: F_i must be > 0");
    sum += f;
  }
  const double n = static_cast<double>(buckling_loads.size());
  return sum * (rho / n) * 100.0;
}

double equivalent_stiffness(const std::vector<double>& stiffnesses) {
  if (stiffnesses.empty()) {
    throw DataError("EmptyStack: equivalent_stiffness needs >= 1 layer");
  }
  double sum = 0.0;
  for (const double s : stiffnesses) {
    if (!(s > 0.0)) throw DataError("NonPositiveInput: S_i must be > 0");
    sum += s;
  }
  return sum;
}

std::pair<int, double> validate_stack(const std::vector<LayerRecord>& layers) {
  if (layers.empty()) {
    throw DataError("EmptyStack: validate_stack needs >= 1 layer");
  }
  const int class_id = layers.front().class_id;
  std::string offenders;
  for (const LayerRecord& layer : layers) {
    if (layer.class_id != class_id) {
      offenders += offenders.empty() ? layer.layer_id : ", " + layer.layer_id;
    }
  }
  if (!offenders.empty()) {
    throw DataError("IncompatibleLayers: class mismatch against " +
                    layers.front().layer_id + ": " + offenders);
  }
  return {class_id, layers.front().params.areal_density};
}

void emit_distribution_report(const std::vector<MlsRecord>& mls_records,
                              const std::vector<LayerRecord>& layer_records,
                              const std::filesystem::path& out_dir) {
  if (mls_records.empty() || layer_records.empty()) {
    throw DataError("EmptyStack: distribution report needs layer and MLS records");
  }

  std::string csv = "dataset,buckling_load,stiffness,ln_buckling_load,ln_stiffness\n";
  std::vector<SvgPoint> layer_points;
  std::vector<SvgPoint> mls_points;
  layer_points.reserve(layer_records.size());
  mls_points.reserve(mls_records.size());
  for (const LayerRecord& rec : layer_records) {
    const double lf = std::log(rec.buckling_load);
    const double ls = std::log(rec.stiffness);
    csv += "layer," + format_double(rec.buckling_load) + "," +
           format_double(rec.stiffness) + "," + format_double(lf) + "," +
           format_double(ls) + "\n";
    layer_points.push_back({lf, ls});
  }
  for (const MlsRecord& rec : mls_records) {
    const double lf = std::log(rec.buckling_load_eq);
    const double ls = std::log(rec.stiffness_eq);
    csv += "mls," + format_double(rec.buckling_load_eq) + "," +
           format_double(rec.stiffness_eq) + "," + format_double(lf) + "," +
           format_double(ls) + "\n";
    mls_points.push_back({lf, ls});
  }

  write_text_atomic(out_dir / "distribution_report.csv", csv);

  SvgScatter chart;
  chart.title = "Property distributions (natural log scale)";
  chart.x_label = "ln buckling load";
  chart.y_label = "ln stiffness";
  chart.series.push_back({"layer", "#4477aa", layer_points});
  chart.series.push_back({"mls", "#cc6677", mls_points});
  write_text_atomic(out_dir / "distribution_report.svg", chart.render());
}

}  // namespace cntq
