#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "gtx/forest.hpp"
#include "gtx/metrics.hpp"

using namespace gtx;

namespace {

struct Table {
  std::vector<EncodedInstance> x;
  std::vector<Label> y;
};

// Label is POS iff position 0 holds symbol 1; the other positions are noise.
Table FirstSymbolTable(Rng& rng, std::size_t n, std::size_t l) {
  Table t;
  for (std::size_t i = 0; i < n; ++i) {
    t.x.push_back(gtx::testing::RandomInstance(rng, l, 2));
    t.y.push_back(t.x.back()[0] == 1 ? Label::kPos : Label::kNeg);
  }
  return t;
}

std::vector<double> Scores(const ForestModel& m, const std::vector<EncodedInstance>& xs) {
  std::vector<double> out;
  for (const auto& x : xs) out.push_back(m.PredictProba(x));
  return out;
}

DecisionTree Leaf(double value) {
  TreeNode n;
  n.value = value;
  return DecisionTree({n});
}

}  // namespace

TEST_CASE("separable rule is learned exactly") {
  Rng rng(71);
  const Table t = FirstSymbolTable(rng, 200, 6);
  ForestConfig config;
  config.num_trees = 50;
  const ForestModel m = TrainForest(t.x, t.y, config, 1);
  CHECK(m.num_trees() == 50);
  CHECK(Auc(Scores(m, t.x), t.y) == 1.0);
  for (std::size_t i = 0; i < t.x.size(); ++i) CHECK(m.Classify(t.x[i]) == t.y[i]);
  CHECK(m.UsedFeatures()[0]);
}

TEST_CASE("training is deterministic in the seed") {
  Rng rng(72);
  Table t;
  for (int i = 0; i < 150; ++i) {
    t.x.push_back(gtx::testing::RandomInstance(rng, 8, 3));
    t.y.push_back(rng.Bernoulli(0.5) ? Label::kPos : Label::kNeg);
  }
  const ForestConfig config;
  const ForestModel a = TrainForest(t.x, t.y, config, 9);
  const ForestModel b = TrainForest(t.x, t.y, config, 9);
  const ForestModel c = TrainForest(t.x, t.y, config, 10);
  const auto probe = FirstSymbolTable(rng, 50, 8).x;
  CHECK(Scores(a, probe) == Scores(b, probe));
  CHECK(Scores(a, probe) != Scores(c, probe));
  CHECK(a.ToJson() == b.ToJson());
}

TEST_CASE("degenerate training input") {
  const std::vector<EncodedInstance> x{{0, 1}, {1, 1}};
  CHECK_THROWS_AS(TrainForest(x, std::vector<Label>{Label::kPos, Label::kPos}, {}, 1),
                  SingleClassError);
  CHECK_THROWS_AS(TrainForest({}, {}, {}, 1), std::invalid_argument);
  const std::vector<EncodedInstance> ragged{{0, 1}, {1}};
  CHECK_THROWS_AS(TrainForest(ragged, std::vector<Label>{Label::kPos, Label::kNeg}, {}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(TrainForest(x, std::vector<Label>{Label::kPos}, {}, 1), std::invalid_argument);
}

TEST_CASE("prediction averages leaves") {
  const EncodedInstance x{0, 1, 0};
  CHECK(ForestModel({Leaf(1.0), Leaf(1.0), Leaf(1.0)}, 3).PredictProba(x) == 1.0);
  CHECK(ForestModel({Leaf(1.0), Leaf(0.0)}, 3).PredictProba(x) == 0.5);
  CHECK(ForestModel({Leaf(1.0), Leaf(0.0)}, 3).Classify(x) == Label::kPos);
  CHECK_THROWS_AS(ForestModel({Leaf(1.0)}, 3).PredictProba(EncodedInstance{0, 1}),
                  std::invalid_argument);
}

TEST_CASE("probabilities stay in range and survive json") {
  Rng rng(73);
  Table t;
  for (int i = 0; i < 120; ++i) {
    t.x.push_back(gtx::testing::RandomInstance(rng, 10, 4));
    t.y.push_back(t.x.back()[2] == t.x.back()[7] ? Label::kPos : Label::kNeg);
  }
  ForestConfig config;
  config.num_trees = 20;
  config.max_depth = 4;
  const ForestModel m = TrainForest(t.x, t.y, config, 3);
  const ForestModel back = ForestModel::FromJson(m.ToJson());
  for (int i = 0; i < 200; ++i) {
    const EncodedInstance x = gtx::testing::RandomInstance(rng, 10, 4);
    const double p = m.PredictProba(x);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(back.PredictProba(x) == p);
  }
  CHECK(back.ToJson() == m.ToJson());
  CHECK_THROWS(ForestModel::FromJson("{}"));
}

TEST_CASE("training AUC is at least test AUC on average") {
  double train_sum = 0.0;
  double test_sum = 0.0;
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    // Noisy target: POS iff two of three fixed positions hold symbol 1,
    // flipped with probability 0.15.
    Table train, test;
    for (int i = 0; i < 400; ++i) {
      const EncodedInstance x = gtx::testing::RandomInstance(rng, 10, 2);
      bool pos = x[1] + x[4] + x[8] >= 2;
      if (rng.Bernoulli(0.15)) pos = !pos;
      Table& t = i < 300 ? train : test;
      t.x.push_back(x);
      t.y.push_back(pos ? Label::kPos : Label::kNeg);
    }
    ForestConfig config;
    config.num_trees = 30;
    const ForestModel m = TrainForest(train.x, train.y, config, seed);
    const double a = Auc(Scores(m, train.x), train.y);
    const double b = Auc(Scores(m, test.x), test.y);
    train_sum += a;
    test_sum += b;
    if (a < b) ++violations;
  }
  if (violations > 0) MESSAGE(violations << " seed(s) had test AUC above training AUC");
  CHECK(train_sum >= test_sum);
}
