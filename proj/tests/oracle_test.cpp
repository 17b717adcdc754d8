#include <algorithm>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"
#include "gtx/oracle.hpp"

using namespace gtx;
using gtx::testing::Example1Dataset;

namespace {

Dataset WithMasks(Dataset d, const std::vector<std::pair<std::size_t, std::string>>& masks) {
  for (const auto& [i, m] : masks) d.instances[i].explanation = ExplanationMask::FromMaskedString(m);
  return d;
}

std::string MaskOf(std::string_view s, const std::vector<bool>& keep) {
  std::string out(s.size(), kMaskGlyph);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (keep[i]) out[i] = s[i];
  return out;
}

}  // namespace

TEST_CASE("matching") {
  CHECK(Matches("..000000", "11000000"));
  CHECK(Matches("111..", "11111"));
  CHECK_FALSE(Matches("00..1", "00100"));
  CHECK(Matches("00..1", "00001"));
  CHECK_THROWS_AS(Matches("00..", "00100"), std::invalid_argument);
}

TEST_CASE("correct explanations on the six-string dataset") {
  const Dataset d = Example1Dataset();
  CHECK(IsCorrectExplanation("111..", d));
  CHECK(IsCorrectExplanation("..111", d));
  CHECK(IsCorrectExplanation("1..11", d));
  CHECK_FALSE(IsCorrectExplanation("00..1", d));
  CHECK_FALSE(IsCorrectExplanation("100..", d));
  CHECK_THROWS_AS(IsCorrectExplanation(".....", d), std::invalid_argument);
  CHECK_THROWS_AS(IsCorrectExplanation("111.", d), std::invalid_argument);
}

TEST_CASE("dataset verification") {
  const Dataset good = WithMasks(Example1Dataset(), {{3, "111.."}, {4, "..111"}, {5, "1..11"}});
  const VerificationReport ok = VerifyDataset(good);
  CHECK(ok.ok());
  CHECK(ok.total_pos == 3);
  CHECK(ok.verified == 3);

  const Dataset bad = WithMasks(Example1Dataset(), {{3, "111.."}, {4, "00..1"}, {5, "1..11"}});
  const VerificationReport report = VerifyDataset(bad);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].instance == 4);
  CHECK(bad.instances[report.failures[0].witness].string == "00001");
  CHECK(report.verified + report.failures.size() == report.total_pos);
}

TEST_CASE("noise-free check") {
  CHECK(CheckNoiseFree(Example1Dataset()));
  CHECK(CheckNoiseFree(Dataset{}));
  Dataset d;
  d.alphabet = "01";
  d.string_length = 2;
  d.instances.push_back({Label::kPos, "01", ExplanationMask(2, {0})});
  d.instances.push_back({Label::kNeg, "01", {}});
  CHECK_FALSE(CheckNoiseFree(d));
}

TEST_CASE("full masks match only their own string") {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t l = 1 + rng.Index(8);
    const std::string s = gtx::testing::RandomString(rng, l, "01");
    const std::string other = gtx::testing::RandomString(rng, l, "01");
    CHECK(Matches(s, s));
    CHECK(Matches(s, other) == (s == other));
  }
}

TEST_CASE("shrinking a mask preserves matches") {
  Rng rng(52);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t l = 1 + rng.Index(8);
    const std::string source = gtx::testing::RandomString(rng, l, "01");
    const std::string probe = gtx::testing::RandomString(rng, l, "01");
    std::vector<bool> big(l), small(l);
    for (std::size_t i = 0; i < l; ++i) {
      big[i] = rng.Bernoulli(0.7);
      small[i] = big[i] && rng.Bernoulli(0.5);
    }
    if (Matches(MaskOf(source, big), probe)) CHECK(Matches(MaskOf(source, small), probe));
  }
}

TEST_CASE("correctness is monotone in the mask and vacuous without NEG rows") {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t length = 1 + rng.Index(6);
    const std::size_t n = 2 + rng.Index(std::min<std::size_t>(20, (std::size_t{1} << length) - 1));
    const Dataset d = gtx::testing::RandomDataset(rng, n, length);
    const std::string& s = d.instances[rng.Index(d.instances.size())].string;
    std::vector<bool> small(s.size()), big(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      small[i] = rng.Bernoulli(0.5);
      big[i] = small[i] || rng.Bernoulli(0.5);
    }
    small[rng.Index(s.size())] = true;
    for (std::size_t i = 0; i < s.size(); ++i) big[i] = big[i] || small[i];
    if (IsCorrectExplanation(MaskOf(s, small), d)) CHECK(IsCorrectExplanation(MaskOf(s, big), d));

    Dataset pos_only = d;
    std::erase_if(pos_only.instances, [](const LabeledInstance& x) { return x.label == Label::kNeg; });
    CHECK(IsCorrectExplanation(MaskOf(s, small), pos_only));
  }
}
