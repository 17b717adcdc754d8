#include "gtx/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtx/random.hpp"
#include "json.hpp"

namespace gtx {
namespace {

struct Split {
  std::int32_t feature = -1;
  std::uint8_t symbol = 0;
  double impurity = 0.0;  // weighted Gini of the children
};

double Gini(double n, double pos) {
  if (n <= 0) return 0.0;
  const double p = pos / n;
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const EncodedInstance> x, std::span<const Label> y,
              std::size_t num_symbols, const ForestConfig& config, std::size_t mtry,
              Rng& rng)
      : x_(x), y_(y), num_symbols_(num_symbols), config_(config), mtry_(mtry), rng_(rng) {}

  DecisionTree Build(std::vector<std::size_t> rows) {
    nodes_.clear();
    Grow(rows, 0, rows.size(), 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  std::int32_t Grow(std::vector<std::size_t>& rows, std::size_t begin, std::size_t end,
                    std::size_t depth) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    const double n = static_cast<double>(end - begin);
    double pos = 0;
    for (std::size_t i = begin; i < end; ++i) pos += y_[rows[i]] == Label::kPos ? 1 : 0;
    nodes_[id].value = pos / n;

    const bool pure = pos == 0 || pos == n;
    const bool too_small = end - begin < 2 * config_.min_leaf;
    const bool too_deep = config_.max_depth != 0 && depth >= config_.max_depth;
    if (pure || too_small || too_deep) return id;

    const Split split = BestSplit(rows, begin, end, n * Gini(n, pos));
    if (split.feature < 0) return id;

    const auto mid = static_cast<std::size_t>(
        std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                       rows.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](std::size_t r) { return x_[r][split.feature] == split.symbol; }) -
        rows.begin());
    nodes_[id].feature = split.feature;
    nodes_[id].symbol = split.symbol;
    const std::int32_t left = Grow(rows, begin, mid, depth + 1);
    const std::int32_t right = Grow(rows, mid, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  // Examines `mtry_` random features, then keeps drawing until some feature
  // yields a split that lowers impurity.
  Split BestSplit(const std::vector<std::size_t>& rows, std::size_t begin,
                  std::size_t end, double parent_impurity) {
    const std::size_t num_features = x_[rows[begin]].size();
    std::vector<std::size_t> order(num_features);
    std::iota(order.begin(), order.end(), 0);
    rng_.Shuffle(order.begin(), order.end());

    const double n = static_cast<double>(end - begin);
    const auto min_leaf = static_cast<double>(config_.min_leaf);
    Split best;
    best.impurity = parent_impurity - 1e-12;
    std::vector<double> count(num_symbols_), pos(num_symbols_);
    double total_pos = 0;
    for (std::size_t i = begin; i < end; ++i) total_pos += y_[rows[i]] == Label::kPos;

    for (std::size_t k = 0; k < num_features; ++k) {
      if (k >= mtry_ && best.feature >= 0) break;
      const std::size_t f = order[k];
      std::fill(count.begin(), count.end(), 0.0);
      std::fill(pos.begin(), pos.end(), 0.0);
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t r = rows[i];
        count[x_[r][f]] += 1;
        pos[x_[r][f]] += y_[r] == Label::kPos;
      }
      for (std::size_t a = 0; a < num_symbols_; ++a) {
        const double nl = count[a];
        const double nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double impurity = nl * Gini(nl, pos[a]) + nr * Gini(nr, total_pos - pos[a]);
        if (impurity < best.impurity) {
          best = {static_cast<std::int32_t>(f), static_cast<std::uint8_t>(a), impurity};
        }
      }
    }
    return best;
  }

  std::span<const EncodedInstance> x_;
  std::span<const Label> y_;
  std::size_t num_symbols_;
  const ForestConfig& config_;
  std::size_t mtry_;
  Rng& rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

ForestModel::ForestModel(std::vector<DecisionTree> trees, std::size_t num_features)
    : trees_(std::move(trees)), num_features_(num_features) {
  if (trees_.empty()) throw std::invalid_argument("a forest needs at least one tree");
}

double ForestModel::PredictProba(std::span<const std::uint8_t> x) const {
  if (x.size() != num_features_) {
    throw std::invalid_argument("instance has " + std::to_string(x.size()) +
                                " features, model expects " +
                                std::to_string(num_features_));
  }
  double sum = 0.0;
  for (const DecisionTree& t : trees_) sum += t.Predict(x);
  return sum / static_cast<double>(trees_.size());
}

ScoreFunction ForestModel::AsScoreFunction() const {
  return [this](std::span<const std::uint8_t> x) { return PredictProba(x); };
}

std::vector<bool> ForestModel::UsedFeatures() const {
  std::vector<bool> used(num_features_, false);
  for (const DecisionTree& t : trees_) {
    for (const TreeNode& n : t.nodes()) {
      if (n.feature >= 0) used[n.feature] = true;
    }
  }
  return used;
}

std::string ForestModel::ToJson() const {
  nlohmann::ordered_json j;
  j["num_features"] = num_features_;
  j["trees"] = nlohmann::ordered_json::array();
  for (const DecisionTree& t : trees_) {
    nlohmann::ordered_json jt;
    for (const TreeNode& n : t.nodes()) {
      jt["feature"].push_back(n.feature);
      jt["symbol"].push_back(n.symbol);
      jt["left"].push_back(n.left);
      jt["right"].push_back(n.right);
      jt["value"].push_back(n.value);
    }
    j["trees"].push_back(std::move(jt));
  }
  return j.dump();
}

ForestModel ForestModel::FromJson(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<DecisionTree> trees;
  for (const auto& jt : j.at("trees")) {
    const auto& feature = jt.at("feature");
    std::vector<TreeNode> nodes(feature.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      nodes[i] = {feature[i].get<std::int32_t>(), jt.at("symbol")[i].get<std::uint8_t>(),
                  jt.at("left")[i].get<std::int32_t>(), jt.at("right")[i].get<std::int32_t>(),
                  jt.at("value")[i].get<double>()};
    }
    trees.emplace_back(std::move(nodes));
  }
  return ForestModel(std::move(trees), j.at("num_features").get<std::size_t>());
}

ForestModel TrainForest(std::span<const EncodedInstance> features,
                        std::span<const Label> labels, const ForestConfig& config,
                        std::uint64_t seed) {
  if (features.empty() || features.size() != labels.size()) {
    throw std::invalid_argument("training set is empty or labels do not line up");
  }
  if (config.num_trees == 0) throw std::invalid_argument("num_trees must be positive");
  const std::size_t num_features = features.front().size();
  std::size_t num_symbols = 1;
  for (const EncodedInstance& x : features) {
    if (x.size() != num_features) throw std::invalid_argument("ragged training set");
    for (std::uint8_t c : x) num_symbols = std::max<std::size_t>(num_symbols, c + 1u);
  }
  const auto pos = std::count(labels.begin(), labels.end(), Label::kPos);
  if (pos == 0 || pos == static_cast<std::ptrdiff_t>(labels.size())) {
    throw SingleClassError("training set contains a single class");
  }
  const std::size_t mtry =
      config.features_per_split != 0
          ? std::min(config.features_per_split, num_features)
          : std::max<std::size_t>(
                1, static_cast<std::size_t>(std::lround(std::sqrt(num_features))));

  std::vector<DecisionTree> trees;
  trees.reserve(config.num_trees);
  for (std::size_t t = 0; t < config.num_trees; ++t) {
    Rng rng(DeriveSeed(seed, {t}));
    std::vector<std::size_t> rows(features.size());
    for (std::size_t& r : rows) r = rng.Index(features.size());
    TreeBuilder builder(features, labels, num_symbols, config, mtry, rng);
    trees.push_back(builder.Build(std::move(rows)));
  }
  return ForestModel(std::move(trees), num_features);
}

}  // namespace gtx
