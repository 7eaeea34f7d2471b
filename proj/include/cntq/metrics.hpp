#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cntq {

/// K x K confusion counts; rows index ground truth, columns prediction.
struct ConfusionMatrix {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

  static ConfusionMatrix from_pairs(std::span<const int> truth,
                                    std::span<const int> pred, int n_classes);
};

/// Overall accuracy: trace / total count.
double overall_accuracy(const ConfusionMatrix& cm);

/// sqrt(mean squared difference).
double rmse(std::span<const double> y, std::span<const double> x);

/// RMSE of the constant mean(y_train) predictor on y_test.
double baseline_rmse(std::span<const double> y_train,
                     std::span<const double> y_test);

struct TargetEval {
  double rmse = 0.0;
  double baseline_rmse = 0.0;
  std::vector<double> truth;  // scatter data
  std::vector<double> pred;
};

/// Evaluation results for one feature source.
struct SourceEval {
  std::string source;
  std::map<std::string, TargetEval> per_target;
  std::optional<double> oa;
  std::optional<ConfusionMatrix> confusion;
};

struct ReportMeta {
  std::uint64_t seed = 0;
  std::string config_echo_json;  // semantic config subset, already serialized
};

/// Write eval_report.json plus eval_rmse.svg (grouped RMSE bars per source
/// and target) and one predicted-vs-true scatter SVG per target into out_dir.
void emit_eval_report(const std::vector<SourceEval>& results,
                      const ReportMeta& meta,
                      const std::filesystem::path& out_dir);

}  // namespace cntq
