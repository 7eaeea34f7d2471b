#include "cntq/rfmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include <json.hpp>

#include "cntq/error.hpp"
#include "cntq/manifest.hpp"
#include "cntq/rng.hpp"

namespace cntq {

namespace {

using ordered_json = nlohmann::ordered_json;
using u128 = unsigned __int128;

void validate_config(const TrainConfig& cfg) {
  if (cfg.n_trees < 1) throw ConfigError("rf: n_trees must be >= 1");
  if (cfg.mtry < 0) throw ConfigError("rf: mtry must be >= 0 (0 = all)");
  if (cfg.min_leaf < 1) throw ConfigError("rf: min_leaf must be >= 1");
}

void validate_matrix(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw DataError(std::string("NonFiniteInput: ") + what +
                    " contains NaN or infinity");
  }
}

struct BestSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double sse_gain = -std::numeric_limits<double>::infinity();
  // classification score S_L/n_L + S_R/n_R as an exact rational
  u128 q_num = 0;
  u128 q_den = 1;
};

// Grows one CART tree over a fixed dataset view. Splits are scored on the
// standardized targets (regression) or exact Gini rationals
// (classification); leaves store original-unit values.
class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& X, const Eigen::MatrixXd& T,
              const Eigen::MatrixXd& Y, const std::vector<int>& labels,
              int n_classes, ForestTask task, const TrainConfig& cfg)
      : x_(X), t_(T), y_(Y), labels_(labels), n_classes_(n_classes),
        task_(task), cfg_(cfg) {
    all_features_.resize(static_cast<std::size_t>(X.cols()));
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  Tree build(std::uint64_t tree_seed) {
    SplitMix64 rng(tree_seed);
    const auto n = static_cast<int>(x_.rows());
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(n));
    if (cfg_.bootstrap) {
      for (int i = 0; i < n; ++i) {
        idx.push_back(static_cast<int>(
            rng.next_below(static_cast<std::uint64_t>(n))));
      }
    } else {
      idx.resize(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), 0);
    }
    Tree tree;
    build_node(tree, idx, 0, n, rng);
    return tree;
  }

 private:
  bool is_pure(const std::vector<int>& idx, int begin, int end) const {
    if (task_ == ForestTask::kClassification) {
      const int first = labels_[static_cast<std::size_t>(idx[begin])];
      for (int k = begin + 1; k < end; ++k) {
        if (labels_[static_cast<std::size_t>(idx[k])] != first) return false;
      }
      return true;
    }
    const auto first = y_.row(idx[begin]);
    for (int k = begin + 1; k < end; ++k) {
      if ((y_.row(idx[k]).array() != first.array()).any()) return false;
    }
    return true;
  }

  int make_leaf(Tree& tree, const std::vector<int>& idx, int begin, int end,
                bool pure) {
    TreeNode node;
    if (task_ == ForestTask::kClassification) {
      node.value.assign(static_cast<std::size_t>(n_classes_), 0.0);
      for (int k = begin; k < end; ++k) {
        node.value[static_cast<std::size_t>(
            labels_[static_cast<std::size_t>(idx[k])])] += 1.0;
      }
    } else if (pure) {
      // exact copy of the shared target row, so pure leaves reproduce
      // training targets bitwise
      const auto row = y_.row(idx[begin]);
      node.value.assign(row.data(), row.data() + row.size());
    } else {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(y_.cols());
      for (int k = begin; k < end; ++k) mean += y_.row(idx[k]);
      mean /= static_cast<double>(end - begin);
      node.value.assign(mean.data(), mean.data() + mean.size());
    }
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  std::vector<int> candidate_features(SplitMix64& rng) {
    const auto dim = static_cast<int>(x_.cols());
    if (cfg_.mtry <= 0 || cfg_.mtry >= dim) return all_features_;
    std::vector<int> pool = all_features_;
    for (int i = 0; i < cfg_.mtry; ++i) {
      const auto j = i + static_cast<int>(rng.next_below(
                             static_cast<std::uint64_t>(dim - i)));
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(cfg_.mtry));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  // Node SSE over standardized outputs via running sums.
  double node_sse(const std::vector<int>& idx, int begin, int end) const {
    const auto m = t_.cols();
    Eigen::RowVectorXd s1 = Eigen::RowVectorXd::Zero(m);
    Eigen::RowVectorXd s2 = Eigen::RowVectorXd::Zero(m);
    for (int k = begin; k < end; ++k) {
      const auto row = t_.row(idx[k]);
      s1 += row;
      s2 += row.cwiseProduct(row);
    }
    const double cnt = static_cast<double>(end - begin);
    return (s2 - s1.cwiseProduct(s1) / cnt).sum();
  }

  void scan_feature_regression(const std::vector<std::pair<double, int>>& vals,
                               int feature, double parent_sse,
                               BestSplit& best) const {
    const auto m = t_.cols();
    const auto cnt = static_cast<int>(vals.size());
    Eigen::RowVectorXd total_s1 = Eigen::RowVectorXd::Zero(m);
    Eigen::RowVectorXd total_s2 = Eigen::RowVectorXd::Zero(m);
    for (const auto& [v, s] : vals) {
      const auto row = t_.row(s);
      total_s1 += row;
      total_s2 += row.cwiseProduct(row);
    }
    Eigen::RowVectorXd left_s1 = Eigen::RowVectorXd::Zero(m);
    Eigen::RowVectorXd left_s2 = Eigen::RowVectorXd::Zero(m);
    for (int k = 0; k < cnt - 1; ++k) {
      const auto row = t_.row(vals[static_cast<std::size_t>(k)].second);
      left_s1 += row;
      left_s2 += row.cwiseProduct(row);
      if (vals[static_cast<std::size_t>(k + 1)].first ==
          vals[static_cast<std::size_t>(k)].first) {
        continue;
      }
      const int nl = k + 1;
      const int nr = cnt - nl;
      if (nl < cfg_.min_leaf || nr < cfg_.min_leaf) continue;
      const double dl = static_cast<double>(nl);
      const double dr = static_cast<double>(nr);
      const double sse_l = (left_s2 - left_s1.cwiseProduct(left_s1) / dl).sum();
      const Eigen::RowVectorXd right_s1 = total_s1 - left_s1;
      const Eigen::RowVectorXd right_s2 = total_s2 - left_s2;
      const double sse_r =
          (right_s2 - right_s1.cwiseProduct(right_s1) / dr).sum();
      const double gain = parent_sse - sse_l - sse_r;
      if (gain > best.sse_gain) {
        best.found = true;
        best.feature = feature;
        best.threshold = midpoint(vals[static_cast<std::size_t>(k)].first,
                                  vals[static_cast<std::size_t>(k + 1)].first);
        best.sse_gain = gain;
      }
    }
  }

  void scan_feature_gini(const std::vector<std::pair<double, int>>& vals,
                         int feature, BestSplit& best) const {
    const auto cnt = static_cast<int>(vals.size());
    std::vector<std::int64_t> total(static_cast<std::size_t>(n_classes_), 0);
    for (const auto& [v, s] : vals) {
      ++total[static_cast<std::size_t>(labels_[static_cast<std::size_t>(s)])];
    }
    std::vector<std::int64_t> left(static_cast<std::size_t>(n_classes_), 0);
    std::int64_t left_sq = 0;   // sum of squared left counts
    std::int64_t total_sq = 0;  // sum of squared right counts, updated in sync
    for (const std::int64_t c : total) total_sq += c * c;
    std::int64_t right_sq = total_sq;

    for (int k = 0; k < cnt - 1; ++k) {
      const auto cls = static_cast<std::size_t>(
          labels_[static_cast<std::size_t>(vals[static_cast<std::size_t>(k)].second)]);
      // incremental update of sum(c^2) on both sides
      left_sq += 2 * left[cls] + 1;
      right_sq -= 2 * (total[cls] - left[cls]) - 1;
      ++left[cls];
      if (vals[static_cast<std::size_t>(k + 1)].first ==
          vals[static_cast<std::size_t>(k)].first) {
        continue;
      }
      const int nl = k + 1;
      const int nr = cnt - nl;
      if (nl < cfg_.min_leaf || nr < cfg_.min_leaf) continue;
      // maximizing Gini reduction == maximizing S_L/n_L + S_R/n_R; compare
      // as exact rationals so ties are broken deterministically
      const u128 num = static_cast<u128>(left_sq) * static_cast<u128>(nr) +
                       static_cast<u128>(right_sq) * static_cast<u128>(nl);
      const u128 den = static_cast<u128>(nl) * static_cast<u128>(nr);
      const bool better =
          !best.found || num * best.q_den > best.q_num * den;
      if (better) {
        best.found = true;
        best.feature = feature;
        best.threshold = midpoint(vals[static_cast<std::size_t>(k)].first,
                                  vals[static_cast<std::size_t>(k + 1)].first);
        best.q_num = num;
        best.q_den = den;
      }
    }
  }

  static double midpoint(double lo, double hi) {
    double mid = (lo + hi) / 2.0;
    if (!(mid > lo)) mid = lo;  // adjacent representable values
    if (mid >= hi) mid = lo;    // keep routing consistent with the scan
    return mid;
  }

  int build_node(Tree& tree, std::vector<int>& idx, int begin, int end,
                 SplitMix64& rng) {
    if (end - begin < 2 || is_pure(idx, begin, end)) {
      return make_leaf(tree, idx, begin, end, is_pure(idx, begin, end));
    }
    const std::vector<int> features = candidate_features(rng);
    BestSplit best;
    const double parent_sse = task_ == ForestTask::kRegression2
                                  ? node_sse(idx, begin, end)
                                  : 0.0;
    std::vector<std::pair<double, int>> vals;
    vals.reserve(static_cast<std::size_t>(end - begin));
    for (const int f : features) {
      vals.clear();
      for (int k = begin; k < end; ++k) {
        vals.emplace_back(x_(idx[static_cast<std::size_t>(k)], f),
                          idx[static_cast<std::size_t>(k)]);
      }
      std::sort(vals.begin(), vals.end());
      if (task_ == ForestTask::kRegression2) {
        scan_feature_regression(vals, f, parent_sse, best);
      } else {
        scan_feature_gini(vals, f, best);
      }
    }
    if (!best.found) {
      return make_leaf(tree, idx, begin, end, false);
    }

    tree.nodes.emplace_back();
    const auto node_id = static_cast<int>(tree.nodes.size()) - 1;
    tree.nodes[static_cast<std::size_t>(node_id)].feature = best.feature;
    tree.nodes[static_cast<std::size_t>(node_id)].threshold = best.threshold;

    const auto mid_it = std::stable_partition(
        idx.begin() + begin, idx.begin() + end, [&](int s) {
          return x_(s, best.feature) <= best.threshold;
        });
    const auto mid = static_cast<int>(mid_it - idx.begin());

    const int left_id = build_node(tree, idx, begin, mid, rng);
    const int right_id = build_node(tree, idx, mid, end, rng);
    tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
    tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
    return node_id;
  }

  const Eigen::MatrixXd& x_;
  const Eigen::MatrixXd& t_;       // standardized targets (regression)
  const Eigen::MatrixXd& y_;       // original targets (regression)
  const std::vector<int>& labels_; // classification
  int n_classes_;
  ForestTask task_;
  TrainConfig cfg_;
  std::vector<int> all_features_;
};

const TreeNode& walk_to_leaf(const Tree& tree, const Eigen::VectorXd& x) {
  const TreeNode* node = &tree.nodes.front();
  while (node->feature >= 0) {
    const int next = x[node->feature] <= node->threshold ? node->left
                                                         : node->right;
    node = &tree.nodes[static_cast<std::size_t>(next)];
  }
  return *node;
}

}  // namespace

ForestModel train_regressor(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            const TrainConfig& config) {
  validate_config(config);
  if (X.rows() != Y.rows()) {
    throw DataError("DimensionMismatch: X has " + std::to_string(X.rows()) +
                    " rows, Y has " + std::to_string(Y.rows()));
  }
  if (X.rows() < 2) {
    throw DataError("EmptyDataset: regression needs >= 2 samples");
  }
  if (X.cols() < 1 || Y.cols() < 1) {
    throw DataError("EmptyDataset: X and Y need >= 1 column");
  }
  validate_matrix(X, "X");
  validate_matrix(Y, "Y");

  ForestModel model;
  model.task = ForestTask::kRegression2;
  model.feature_dim = static_cast<int>(X.cols());
  model.n_outputs = static_cast<int>(Y.cols());
  model.config = config;

  const double n = static_cast<double>(Y.rows());
  model.target_mean = Y.colwise().mean();
  Eigen::MatrixXd centered = Y.rowwise() - model.target_mean.transpose();
  model.target_std =
      (centered.array().square().colwise().sum() / n).sqrt().transpose();
  for (Eigen::Index o = 0; o < model.target_std.size(); ++o) {
    if (model.target_std[o] == 0.0) model.target_std[o] = 1.0;
  }
  const Eigen::MatrixXd standardized =
      centered.array().rowwise() / model.target_std.transpose().array();

  static const std::vector<int> kNoLabels;
  TreeBuilder builder(X, standardized, Y, kNoLabels, 0,
                      ForestTask::kRegression2, config);
  model.trees.reserve(static_cast<std::size_t>(config.n_trees));
  for (int t = 0; t < config.n_trees; ++t) {
    model.trees.push_back(
        builder.build(derive_seed(config.seed, static_cast<std::uint64_t>(t))));
  }
  return model;
}

Eigen::VectorXd predict_regressor(const ForestModel& model,
                                  const Eigen::VectorXd& x) {
  if (model.task != ForestTask::kRegression2) {
    throw DataError("DimensionMismatch: model is not a regressor");
  }
  if (x.size() != model.feature_dim) {
    throw DataError("DimensionMismatch: expected " +
                    std::to_string(model.feature_dim) + " features, got " +
                    std::to_string(x.size()));
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.n_outputs);
  for (const Tree& tree : model.trees) {
    const TreeNode& leaf = walk_to_leaf(tree, x);
    for (int o = 0; o < model.n_outputs; ++o) {
      acc[o] += leaf.value[static_cast<std::size_t>(o)];
    }
  }
  return acc / static_cast<double>(model.trees.size());
}

ForestModel train_classifier(const Eigen::MatrixXd& X,
                             const std::vector<int>& y,
                             const TrainConfig& config) {
  validate_config(config);
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) {
    throw DataError("DimensionMismatch: X has " + std::to_string(X.rows()) +
                    " rows, y has " + std::to_string(y.size()));
  }
  if (X.rows() < 2) {
    throw DataError("EmptyDataset: classification needs >= 2 samples");
  }
  if (X.cols() < 1) throw DataError("EmptyDataset: X needs >= 1 column");
  validate_matrix(X, "X");
  int n_classes = 0;
  for (const int c : y) {
    if (c < 0) throw DataError("NonFiniteInput: class ids must be >= 0");
    n_classes = std::max(n_classes, c + 1);
  }

  ForestModel model;
  model.task = ForestTask::kClassification;
  model.feature_dim = static_cast<int>(X.cols());
  model.n_outputs = n_classes;
  model.config = config;

  static const Eigen::MatrixXd kNoTargets;
  TreeBuilder builder(X, kNoTargets, kNoTargets, y, n_classes,
                      ForestTask::kClassification, config);
  model.trees.reserve(static_cast<std::size_t>(config.n_trees));
  for (int t = 0; t < config.n_trees; ++t) {
    model.trees.push_back(
        builder.build(derive_seed(config.seed, static_cast<std::uint64_t>(t))));
  }
  return model;
}

int predict_classifier(const ForestModel& model, const Eigen::VectorXd& x) {
  if (model.task != ForestTask::kClassification) {
    throw DataError("DimensionMismatch: model is not a classifier");
  }
  if (x.size() != model.feature_dim) {
    throw DataError("DimensionMismatch: expected " +
                    std::to_string(model.feature_dim) + " features, got " +
                    std::to_string(x.size()));
  }
  std::vector<int> votes(static_cast<std::size_t>(model.n_outputs), 0);
  for (const Tree& tree : model.trees) {
    const TreeNode& leaf = walk_to_leaf(tree, x);
    int cls = 0;
    for (int c = 1; c < model.n_outputs; ++c) {
      if (leaf.value[static_cast<std::size_t>(c)] >
          leaf.value[static_cast<std::size_t>(cls)]) {
        cls = c;
      }
    }
    ++votes[static_cast<std::size_t>(cls)];
  }
  int winner = 0;
  for (int c = 1; c < model.n_outputs; ++c) {
    if (votes[static_cast<std::size_t>(c)] >
        votes[static_cast<std::size_t>(winner)]) {
      winner = c;
    }
  }
  return winner;
}

void save_model(const ForestModel& model, const std::filesystem::path& path) {
  ordered_json trees = ordered_json::array();
  for (const Tree& tree : model.trees) {
    ordered_json t{{"feature", ordered_json::array()},
                   {"threshold", ordered_json::array()},
                   {"left", ordered_json::array()},
                   {"right", ordered_json::array()},
                   {"value", ordered_json::array()}};
    for (const TreeNode& node : tree.nodes) {
      t["feature"].push_back(node.feature);
      t["threshold"].push_back(node.threshold);
      t["left"].push_back(node.left);
      t["right"].push_back(node.right);
      t["value"].push_back(node.value);
    }
    trees.push_back(std::move(t));
  }
  const ordered_json j{
      {"format_version", kModelFormatVersion},
      {"task", model.task == ForestTask::kRegression2 ? "regression2"
                                                      : "classification"},
      {"feature_dim", model.feature_dim},
      {"n_outputs", model.n_outputs},
      {"target_mean", std::vector<double>(model.target_mean.begin(),
                                          model.target_mean.end())},
      {"target_std", std::vector<double>(model.target_std.begin(),
                                         model.target_std.end())},
      {"config",
       {{"n_trees", model.config.n_trees},
        {"mtry", model.config.mtry},
        {"min_leaf", model.config.min_leaf},
        {"bootstrap", model.config.bootstrap},
        {"seed", model.config.seed}}},
      {"trees", std::move(trees)}};
  write_text_atomic(path, j.dump() + "\n");
}

ForestModel load_model(const std::filesystem::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_text(path));
  } catch (const ordered_json::exception& e) {
    throw DataError("SchemaError: model file " + path.string() + ": " +
                    e.what());
  }
  try {
    if (!j.contains("format_version")) {
      throw DataError("SchemaError: model file lacks format_version");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("VersionMismatch: model format_version " +
                      std::to_string(version) + ", expected " +
                      std::to_string(kModelFormatVersion));
    }
    ForestModel model;
    const std::string task = j.at("task").get<std::string>();
    if (task == "regression2") {
      model.task = ForestTask::kRegression2;
    } else if (task == "classification") {
      model.task = ForestTask::kClassification;
    } else {
      throw DataError("SchemaError: unknown task '" + task + "'");
    }
    model.feature_dim = j.at("feature_dim").get<int>();
    model.n_outputs = j.at("n_outputs").get<int>();
    const auto mean = j.at("target_mean").get<std::vector<double>>();
    const auto stdv = j.at("target_std").get<std::vector<double>>();
    model.target_mean = Eigen::Map<const Eigen::VectorXd>(
        mean.data(), static_cast<Eigen::Index>(mean.size()));
    model.target_std = Eigen::Map<const Eigen::VectorXd>(
        stdv.data(), static_cast<Eigen::Index>(stdv.size()));
    const ordered_json& cfg = j.at("config");
    model.config.n_trees = cfg.at("n_trees").get<int>();
    model.config.mtry = cfg.at("mtry").get<int>();
    model.config.min_leaf = cfg.at("min_leaf").get<int>();
    model.config.bootstrap = cfg.at("bootstrap").get<bool>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    for (const ordered_json& t : j.at("trees")) {
      Tree tree;
      const auto& feature = t.at("feature");
      const auto& threshold = t.at("threshold");
      const auto& left = t.at("left");
      const auto& right = t.at("right");
      const auto& value = t.at("value");
      const std::size_t count = feature.size();
      if (threshold.size() != count || left.size() != count ||
          right.size() != count || value.size() != count) {
        throw DataError("SchemaError: ragged tree arrays in " + path.string());
      }
      tree.nodes.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        tree.nodes[i].feature = feature.at(i).get<int>();
        tree.nodes[i].threshold = threshold.at(i).get<double>();
        tree.nodes[i].left = left.at(i).get<int>();
        tree.nodes[i].right = right.at(i).get<int>();
        tree.nodes[i].value = value.at(i).get<std::vector<double>>();
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const ordered_json::exception& e) {
    throw DataError("SchemaError: model file " + path.string() + ": " +
                    e.what());
  }
}

}  // namespace cntq
