#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "gtx/dataset.hpp"

namespace gtx {

// True iff every non-'.' position of `masked` equals the symbol of `s` at that
// position. Throws std::invalid_argument on a length mismatch.
bool Matches(std::string_view masked, std::string_view s);

// True iff every dataset instance matched by `masked` is labeled POS. Throws
// std::invalid_argument for an all-'.' mask or a length mismatch.
bool IsCorrectExplanation(std::string_view masked, const Dataset& dataset);

struct VerificationFailure {
  std::size_t instance;  // POS instance whose explanation failed
  std::size_t witness;   // NEG instance matched by that explanation
};

struct VerificationReport {
  std::size_t total_pos = 0;
  std::size_t verified = 0;
  std::vector<VerificationFailure> failures;

  bool ok() const { return failures.empty(); }
};

// Checks every POS instance's explanation against the whole dataset.
VerificationReport VerifyDataset(const Dataset& dataset);

// True iff no string occurs with both labels.
bool CheckNoiseFree(const Dataset& dataset);

}  // namespace gtx
