#include "gtx/oracle.hpp"

#include <stdexcept>
#include <unordered_map>

namespace gtx {

bool Matches(std::string_view masked, std::string_view s) {
  if (masked.size() != s.size()) {
    throw std::invalid_argument("mask length " + std::to_string(masked.size()) +
                                " does not match string length " +
                                std::to_string(s.size()));
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (masked[i] != kMaskGlyph && masked[i] != s[i]) return false;
  }
  return true;
}

namespace {

// Index of the first NEG instance matched by `masked`, or npos.
std::size_t FirstNegativeMatch(std::string_view masked, const Dataset& dataset) {
  for (std::size_t j = 0; j < dataset.instances.size(); ++j) {
    const LabeledInstance& other = dataset.instances[j];
    if (other.label == Label::kNeg && Matches(masked, other.string)) return j;
  }
  return std::string_view::npos;
}

}  // namespace

bool IsCorrectExplanation(std::string_view masked, const Dataset& dataset) {
  if (masked.find_first_not_of(kMaskGlyph) == std::string_view::npos) {
    throw std::invalid_argument("an explanation must cover at least one position");
  }
  if (!dataset.instances.empty() && masked.size() != dataset.string_length) {
    throw std::invalid_argument("mask length does not match the dataset");
  }
  return FirstNegativeMatch(masked, dataset) == std::string_view::npos;
}

VerificationReport VerifyDataset(const Dataset& dataset) {
  VerificationReport report;
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const LabeledInstance& x = dataset.instances[i];
    if (x.label != Label::kPos) continue;
    ++report.total_pos;
    const std::size_t witness = x.explanation.empty()
                                    ? FirstNegativeMatch(std::string(x.string.size(), kMaskGlyph), dataset)
                                    : FirstNegativeMatch(x.MaskedExplanation(), dataset);
    if (witness == std::string_view::npos) {
      ++report.verified;
    } else {
      report.failures.push_back({i, witness});
    }
  }
  return report;
}

bool CheckNoiseFree(const Dataset& dataset) {
  std::unordered_map<std::string_view, Label> first;
  for (const LabeledInstance& x : dataset.instances) {
    const auto [it, inserted] = first.emplace(x.string, x.label);
    if (!inserted && it->second != x.label) return false;
  }
  return true;
}

}  // namespace gtx
