#include "gtx/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "gtx/grammar_text.hpp"
#include "gtx/random.hpp"

namespace gtx {

std::string_view LabelName(Label label) {
  return label == Label::kPos ? "POS" : "NEG";
}

Label ParseLabel(std::string_view text) {
  if (text == "POS") return Label::kPos;
  if (text == "NEG") return Label::kNeg;
  throw std::invalid_argument("unknown label '" + std::string(text) + "'");
}

ExplanationMask::ExplanationMask(std::size_t length, std::vector<std::size_t> covered)
    : length_(length), covered_(std::move(covered)) {
  std::sort(covered_.begin(), covered_.end());
  covered_.erase(std::unique(covered_.begin(), covered_.end()), covered_.end());
  if (!covered_.empty() && covered_.back() >= length_) {
    throw std::out_of_range("mask position " + std::to_string(covered_.back()) +
                            " outside length " + std::to_string(length_));
  }
}

ExplanationMask ExplanationMask::FromMaskedString(std::string_view masked) {
  std::vector<std::size_t> covered;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (masked[i] != kMaskGlyph) covered.push_back(i);
  }
  return ExplanationMask(masked.size(), std::move(covered));
}

bool ExplanationMask::contains(std::size_t position) const {
  return std::binary_search(covered_.begin(), covered_.end(), position);
}

std::string ExplanationMask::Render(std::string_view s) const {
  if (s.size() != length_) {
    throw std::invalid_argument("mask length does not match string length");
  }
  std::string out(length_, kMaskGlyph);
  for (std::size_t i : covered_) out[i] = s[i];
  return out;
}

std::size_t Dataset::num_pos() const {
  return static_cast<std::size_t>(
      std::count_if(instances.begin(), instances.end(),
                    [](const LabeledInstance& x) { return x.label == Label::kPos; }));
}

double Dataset::pos_fraction() const {
  return instances.empty() ? 0.0
                           : static_cast<double>(num_pos()) /
                                 static_cast<double>(instances.size());
}

void StopConfig::Validate() const {
  if (target_size == 0) throw std::invalid_argument("target size must be positive");
  if (!(0.0 <= min_pos_ratio && min_pos_ratio <= max_pos_ratio && max_pos_ratio <= 1.0)) {
    throw std::invalid_argument("POS ratio range must satisfy 0 <= lower <= upper <= 1");
  }
  if (max_attempts != 0 && max_attempts < target_size) {
    throw std::invalid_argument("max attempts must be at least the target size");
  }
}

BudgetExhaustedError::BudgetExhaustedError(std::size_t achieved,
                                           std::size_t achieved_pos,
                                           std::size_t attempts)
    : GenerationError("attempt budget of " + std::to_string(attempts) +
                      " exhausted with " + std::to_string(achieved) + " instances (" +
                      std::to_string(achieved_pos) + " POS)"),
      achieved_(achieved),
      achieved_pos_(achieved_pos) {}

LabelConflictError::LabelConflictError(const std::string& string)
    : GenerationError("string '" + string + "' was derived with both labels"),
      string_(string) {}

LabeledInstance LabelAndExplain(const EGrammar& g, const Derivation& d,
                                std::uint32_t threshold) {
  if (threshold < 1) throw std::invalid_argument("threshold must be at least 1");
  std::vector<bool> over(g.rules().size(), false);
  bool any = false;
  for (RuleId r = 0; r < g.rules().size(); ++r) {
    if (g.rule(r).is_terminal_rule() && d.usage[r] > threshold) {
      over[r] = true;
      any = true;
    }
  }
  LabeledInstance out;
  out.string = d.yield;
  out.label = any ? Label::kPos : Label::kNeg;
  std::vector<std::size_t> covered;
  if (any) {
    for (const ParseNode& node : d.tree.nodes) {
      if (!over[node.rule] || node.left >= 0) continue;
      for (std::size_t p = node.begin; p < node.end; ++p) covered.push_back(p);
    }
  }
  out.explanation = ExplanationMask(d.yield.size(), std::move(covered));
  return out;
}

Dataset GenerateDataset(const EGrammar& g, std::size_t length,
                        std::uint32_t threshold, const StopConfig& stop,
                        std::uint64_t seed, const GenerateOptions& options) {
  stop.Validate();
  if (threshold < 1) throw std::invalid_argument("threshold must be at least 1");
  if (!options.allow_noncompliant_grammar) {
    const PreconditionReport report = CheckExplanationPreconditions(g);
    if (!report.satisfied) {
      throw std::invalid_argument("terminal rules are not unique and equal-length: " +
                                  report.issues.front());
    }
  }
  const auto target = stop.target_size;
  const auto cap = [target](double ratio) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(target) + 1e-9));
  };
  const std::size_t pos_cap = cap(stop.max_pos_ratio);
  const std::size_t neg_cap = cap(1.0 - stop.min_pos_ratio);
  if (pos_cap + neg_cap < target) {
    throw std::invalid_argument("POS ratio range admits no split of " +
                                std::to_string(target) + " instances");
  }

  const RandomDeriver derive(g, length, options.derive);
  Rng rng(seed);
  Dataset out;
  out.alphabet = g.alphabet();
  out.string_length = length;
  out.pos_threshold = threshold;
  out.provenance = {GrammarHash(g), seed};

  std::unordered_map<std::string, Label> seen;
  std::size_t pos = 0;
  std::size_t neg = 0;
  const std::size_t budget = stop.attempt_budget();
  for (std::size_t attempt = 0; attempt < budget && pos + neg < target; ++attempt) {
    if (!derive.length_reachable()) break;
    std::optional<Derivation> d = derive(rng);
    if (!d) continue;
    LabeledInstance instance = LabelAndExplain(g, *d, threshold);
    const auto [it, inserted] = seen.emplace(instance.string, instance.label);
    if (!inserted) {
      if (it->second != instance.label) throw LabelConflictError(instance.string);
      continue;
    }
    std::size_t& count = instance.label == Label::kPos ? pos : neg;
    if (count >= (instance.label == Label::kPos ? pos_cap : neg_cap)) continue;
    ++count;
    out.instances.push_back(std::move(instance));
  }
  if (out.instances.size() < target) {
    throw BudgetExhaustedError(out.instances.size(), pos, budget);
  }
  return out;
}

}  // namespace gtx
