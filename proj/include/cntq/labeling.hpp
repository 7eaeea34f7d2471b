#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cntq/forestgen.hpp"
#include "cntq/image.hpp"

namespace cntq {

/// One blended quasi-2.5D sample and its equivalent mechanical labels.
struct MlsRecord {
  std::string mls_id;
  std::string image_path;  // relative to the manifest directory
  int class_id = 0;
  std::vector<std::string> layer_ids;  // back-to-front
  std::vector<double> weights;
  double buckling_load_eq = 0.0;  // F_eq
  double stiffness_eq = 0.0;      // S_eq
  int layer_count = 0;            // N
  double areal_density = 0.0;     // shared rho of the stack
  GrayImage image;                // in-memory only, not serialized
};

/// F_eq = (sum F_i) * (rho / N) * 100.
double equivalent_buckling_load(const std::vector<double>& buckling_loads,
                                double rho);

/// S_eq = sum S_i.
double equivalent_stiffness(const std::vector<double>& stiffnesses);

/// All layers must share one class id; returns that class's (class_id, rho).
/// Offending layer ids are named in the error.
std::pair<int, double> validate_stack(const std::vector<LayerRecord>& layers);

/// Property-distribution comparison between the layer dataset and the MLS
/// dataset: writes distribution_report.csv (dataset, buckling_load,
/// stiffness, ln_buckling_load, ln_stiffness) and distribution_report.svg
/// (scatter of ln F vs ln S for both datasets) into out_dir.
void emit_distribution_report(const std::vector<MlsRecord>& mls_records,
                              const std::vector<LayerRecord>& layer_records,
                              const std::filesystem::path& out_dir);

}  // namespace cntq
