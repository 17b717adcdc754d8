#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gtx/derivation.hpp"
#include "gtx/grammar.hpp"

namespace gtx {

enum class Label : std::uint8_t { kNeg, kPos };

std::string_view LabelName(Label label);
// Accepts "POS" / "NEG"; throws std::invalid_argument otherwise.
Label ParseLabel(std::string_view text);

// Set of covered positions over a string of fixed length. Empty means "no
// explanation".
class ExplanationMask {
 public:
  ExplanationMask() = default;
  // Throws std::out_of_range if a position is >= length.
  ExplanationMask(std::size_t length, std::vector<std::size_t> covered);

  // Mask covering every non-'.' position of a masked string such as "..0011".
  static ExplanationMask FromMaskedString(std::string_view masked);

  std::size_t length() const { return length_; }
  // Sorted, duplicate-free.
  const std::vector<std::size_t>& covered() const { return covered_; }
  std::size_t size() const { return covered_.size(); }
  bool empty() const { return covered_.empty(); }
  bool contains(std::size_t position) const;

  // Masked rendering of `s`: covered positions keep their symbol, others '.'.
  std::string Render(std::string_view s) const;

  friend bool operator==(const ExplanationMask&, const ExplanationMask&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::size_t> covered_;
};

struct LabeledInstance {
  Label label = Label::kNeg;
  std::string string;
  ExplanationMask explanation;

  // Explanation as a masked string ("" for NEG).
  std::string MaskedExplanation() const {
    return explanation.empty() ? std::string() : explanation.Render(string);
  }
};

struct Provenance {
  std::string grammar_hash;
  std::uint64_t seed = 0;
};

struct Dataset {
  std::string alphabet;
  std::size_t string_length = 0;
  std::uint32_t pos_threshold = 0;
  std::vector<LabeledInstance> instances;
  Provenance provenance;

  std::size_t num_pos() const;
  double pos_fraction() const;
};

struct StopConfig {
  std::size_t target_size = 1000;
  double min_pos_ratio = 0.4;
  double max_pos_ratio = 0.6;
  // 0 selects 500 * target_size.
  std::size_t max_attempts = 0;

  std::size_t attempt_budget() const {
    return max_attempts == 0 ? 500 * target_size : max_attempts;
  }
  // Throws std::invalid_argument when the invariants do not hold.
  void Validate() const;
};

struct GenerateOptions {
  // Generate even when the terminal rules break the uniqueness / equal-length
  // conditions that make every emitted explanation correct.
  bool allow_noncompliant_grammar = false;
  DeriveOptions derive;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Attempt budget ran out before the size / class-ratio targets were met.
class BudgetExhaustedError : public GenerationError {
 public:
  BudgetExhaustedError(std::size_t achieved, std::size_t achieved_pos,
                       std::size_t attempts);
  std::size_t achieved_size() const { return achieved_; }
  std::size_t achieved_pos() const { return achieved_pos_; }

 private:
  std::size_t achieved_;
  std::size_t achieved_pos_;
};

// The same string was derived with both labels, which means the grammar is
// ambiguous in a way that changes labels.
class LabelConflictError : public GenerationError {
 public:
  explicit LabelConflictError(const std::string& string);
  const std::string& string() const { return string_; }

 private:
  std::string string_;
};

// POS iff some terminal rule is applied more than `threshold` times; the
// explanation covers exactly the leaves produced by those rules.
LabeledInstance LabelAndExplain(const EGrammar& g, const Derivation& d,
                                std::uint32_t threshold);

// Samples derivations until `stop` is satisfied. Duplicate strings keep their
// first occurrence; each class is capped so the final POS fraction lands in
// the requested range. Deterministic in (g, length, threshold, stop, seed).
Dataset GenerateDataset(const EGrammar& g, std::size_t length,
                        std::uint32_t threshold, const StopConfig& stop,
                        std::uint64_t seed, const GenerateOptions& options = {});

}  // namespace gtx
