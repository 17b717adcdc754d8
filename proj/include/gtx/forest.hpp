#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtx/encoding.hpp"

namespace gtx {

struct ForestConfig {
  std::size_t num_trees = 100;
  // Features examined per split; 0 selects round(sqrt(num_features)).
  std::size_t features_per_split = 0;
  std::size_t min_leaf = 2;
  // 0 means unlimited.
  std::size_t max_depth = 0;
};

// Internal nodes test `x[feature] == symbol`; matching instances go left.
struct TreeNode {
  std::int32_t feature = -1;  // -1 for a leaf
  std::uint8_t symbol = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // POS probability at a leaf
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  double Predict(std::span<const std::uint8_t> x) const {
    std::int32_t i = 0;
    while (nodes_[i].feature >= 0) {
      const TreeNode& n = nodes_[i];
      i = x[n.feature] == n.symbol ? n.left : n.right;
    }
    return nodes_[i].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

class SingleClassError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ForestModel {
 public:
  ForestModel(std::vector<DecisionTree> trees, std::size_t num_features);

  // Mean of the per-tree leaf probabilities. Throws std::invalid_argument on a
  // length mismatch.
  double PredictProba(std::span<const std::uint8_t> x) const;
  Label Classify(std::span<const std::uint8_t> x) const {
    return PredictProba(x) >= 0.5 ? Label::kPos : Label::kNeg;
  }
  ScoreFunction AsScoreFunction() const;

  std::size_t num_trees() const { return trees_.size(); }
  std::size_t num_features() const { return num_features_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  // Positions tested by at least one internal node.
  std::vector<bool> UsedFeatures() const;

  std::string ToJson() const;
  static ForestModel FromJson(std::string_view text);

 private:
  std::vector<DecisionTree> trees_;
  std::size_t num_features_;
};

// Bagged trees grown greedily by Gini impurity over symbol-equality splits.
// Deterministic in `seed`. Throws SingleClassError when only one label is
// present and std::invalid_argument on empty or ragged input.
ForestModel TrainForest(std::span<const EncodedInstance> features,
                        std::span<const Label> labels, const ForestConfig& config,
                        std::uint64_t seed);

}  // namespace gtx
