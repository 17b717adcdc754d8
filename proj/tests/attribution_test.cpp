#include <cmath>
#include <limits>

#include "doctest.h"
#include "generators.hpp"
#include "gtx/attribution.hpp"
#include "json.hpp"

using namespace gtx;

TEST_CASE("attribution json round-trip") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    AttributionFile f;
    f.dataset_sha256 = std::string(64, 'a');
    f.explainer = "shapley";
    f.model = "forest";
    const std::size_t l = 1 + rng.Index(30);
    for (std::size_t i = 0; i < rng.Index(20); ++i) {
      std::vector<double> scores = gtx::testing::RandomScores(rng, l);
      scores[0] = rng.Uniform() * 1e-300;
      f.instances.push_back({3 * i + 1, rng.Bernoulli(0.5) ? Label::kPos : Label::kNeg, scores});
    }
    const std::string text = FormatAttributionJson(f);
    const AttributionFile back = ParseAttributionJson(text);
    CHECK(back.dataset_sha256 == f.dataset_sha256);
    CHECK(back.explainer == f.explainer);
    CHECK(back.model == f.model);
    REQUIRE(back.instances.size() == f.instances.size());
    for (std::size_t i = 0; i < f.instances.size(); ++i) {
      CHECK(back.instances[i].index == f.instances[i].index);
      CHECK(back.instances[i].predicted_label == f.instances[i].predicted_label);
      CHECK(back.instances[i].scores == f.instances[i].scores);
    }
    CHECK(FormatAttributionJson(back) == text);
  }
}

TEST_CASE("attribution json layout") {
  AttributionFile f{"abc", "lime", "m", {{2, Label::kPos, {0.5, -1.0}}}};
  const auto j = nlohmann::json::parse(FormatAttributionJson(f));
  CHECK(j["dataset_sha256"] == "abc");
  CHECK(j["explainer"] == "lime");
  CHECK(j["instances"][0]["index"] == 2);
  CHECK(j["instances"][0]["predicted_label"] == "POS");
  CHECK(j["instances"][0]["scores"][1] == -1.0);
}

TEST_CASE("malformed attribution files") {
  auto rejects = [](std::string_view text) {
    INFO(text);
    CHECK_THROWS_AS(ParseAttributionJson(text), AttributionFormatError);
  };
  rejects("");
  rejects("[]");
  rejects(R"({"explainer":"x","instances":[]})");
  rejects(R"({"dataset_sha256":"a","explainer":"x","instances":[{"index":0,"scores":[1]}]})");
  rejects(R"({"dataset_sha256":"a","explainer":"x","instances":[{"index":0,"predicted_label":"yes","scores":[1]}]})");
  rejects(R"({"dataset_sha256":"a","explainer":"x","instances":[{"index":-1,"predicted_label":"POS","scores":[1]}]})");
  rejects(R"({"dataset_sha256":"a","explainer":"x","instances":[{"index":0,"predicted_label":"POS","scores":["a"]}]})");
  rejects(R"({"dataset_sha256":"a","explainer":"x","instances":[
      {"index":0,"predicted_label":"POS","scores":[1]},
      {"index":0,"predicted_label":"NEG","scores":[1]}]})");
  AttributionFile nan{"a", "x", "", {{0, Label::kPos, {std::nan("")}}}};
  rejects(FormatAttributionJson(nan));
  // A model name is optional for external files.
  CHECK(ParseAttributionJson(R"({"dataset_sha256":"a","explainer":"x","instances":[]})").model.empty());
}

TEST_CASE("predictions csv") {
  const std::vector<Prediction> p{{0, Label::kPos, 0.1 + 0.2}, {7, Label::kNeg, 1e-17}, {9, Label::kPos, 1.0}};
  const std::string text = FormatPredictionsCsv(p);
  CHECK(text.rfind("index,predicted_label,score\n0,POS,", 0) == 0);
  const auto back = ParsePredictionsCsv(text);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].index == p[i].index);
    CHECK(back[i].predicted_label == p[i].predicted_label);
    CHECK(back[i].score == p[i].score);
  }
  CHECK(ParsePredictionsCsv("index,predicted_label,score\n").empty());
  CHECK_THROWS_AS(ParsePredictionsCsv(""), AttributionFormatError);
  CHECK_THROWS_AS(ParsePredictionsCsv("idx,label,score\n"), AttributionFormatError);
  CHECK_THROWS_AS(ParsePredictionsCsv("index,predicted_label,score\n1,POS\n"), AttributionFormatError);
  CHECK_THROWS_AS(ParsePredictionsCsv("index,predicted_label,score\nx,POS,0.5\n"), AttributionFormatError);
  CHECK_THROWS_AS(ParsePredictionsCsv("index,predicted_label,score\n1,MAYBE,0.5\n"), AttributionFormatError);
}
