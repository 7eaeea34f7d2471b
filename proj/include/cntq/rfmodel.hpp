#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

namespace cntq {

/// Forest training configuration. The defaults reproduce the reference
/// setup: 1000 trees, every feature considered at every split, pure-leaf
/// stopping, bootstrap resampling.
struct TrainConfig {
  int n_trees = 1000;
  int mtry = 0;  ///< features considered per split; 0 = all
  int min_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

enum class ForestTask { kRegression2, kClassification };

/// One node of a CART tree. Internal nodes route x left iff
/// x[feature] <= threshold; leaves carry the mean target vector
/// (regression, standardized) or per-class sample counts (classification).
struct TreeNode {
  int feature = -1;  ///< -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> value;
};

struct Tree {
  std::vector<TreeNode> nodes;  ///< nodes[0] is the root
};

/// Trained ensemble. Immutable after training; safe to share across threads.
struct ForestModel {
  ForestTask task = ForestTask::kRegression2;
  int feature_dim = 0;
  int n_outputs = 0;  ///< regression outputs, or class count
  std::vector<Tree> trees;
  Eigen::VectorXd target_mean;  ///< regression standardization constants
  Eigen::VectorXd target_std;
  TrainConfig config;
};

inline constexpr int kModelFormatVersion = 1;

/// Fit a multi-output regression forest. Targets are standardized per output
/// (zero std replaced by 1); splits maximize the reduction in summed
/// per-output SSE; candidate thresholds are midpoints between consecutive
/// distinct sorted feature values; ties break to the lowest feature index,
/// then the lowest threshold. Tree t draws its bootstrap sample from the
/// stream derive_seed(config.seed, t), so trees can be fit in any order.
ForestModel train_regressor(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            const TrainConfig& config);

/// Mean of the per-tree leaf vectors, de-standardized.
Eigen::VectorXd predict_regressor(const ForestModel& model,
                                  const Eigen::VectorXd& x);

/// Same machinery with Gini impurity; leaves store class counts. Prediction
/// is a majority vote over per-tree votes, ties broken by lowest class id.
ForestModel train_classifier(const Eigen::MatrixXd& X,
                             const std::vector<int>& y,
                             const TrainConfig& config);

int predict_classifier(const ForestModel& model, const Eigen::VectorXd& x);

/// Versioned JSON model file; load(save(m)) predicts identically to m.
void save_model(const ForestModel& model, const std::filesystem::path& path);
ForestModel load_model(const std::filesystem::path& path);

}  // namespace cntq
