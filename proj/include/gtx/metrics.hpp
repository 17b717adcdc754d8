#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gtx/attribution.hpp"
#include "gtx/dataset.hpp"

namespace gtx {

enum class TopKMode {
  kSigned,     // largest scores toward POS
  kMagnitude,  // largest absolute scores
};

// The k positions with the largest scores; ties go to the lower position.
// Throws std::invalid_argument unless 1 <= k <= scores.size().
ExplanationMask TopKMask(std::span<const double> scores, std::size_t k,
                         TopKMode mode = TopKMode::kSigned);

// |predicted ∩ truth| / k over positions. Throws std::invalid_argument when
// predicted does not cover exactly k positions, lengths differ or truth is
// empty.
double KAccuracy(const ExplanationMask& predicted, const ExplanationMask& truth,
                 std::size_t k);

struct KAccuracySummary {
  std::size_t k = 0;
  std::vector<std::pair<std::size_t, double>> per_instance;
  // Absent when nothing passed the gate.
  std::optional<double> mean;
  std::optional<double> std;
  std::size_t num_scored = 0;
  std::size_t num_skipped = 0;
};

class HashMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scores every attributed instance whose predicted label and dataset label are
// both POS; every other attributed instance is counted as skipped. Throws
// HashMismatchError if the file names another dataset and
// MissingInstanceError for indices outside the dataset or with the wrong
// number of scores.
KAccuracySummary ScoreAttributionFile(const Dataset& dataset, const AttributionFile& file,
                                      std::size_t k, TopKMode mode = TopKMode::kSigned);

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mann-Whitney AUC with ties counted as one half. Throws DegenerateInputError
// unless both classes are present.
double Auc(std::span<const double> scores, std::span<const Label> labels);

// Sample Pearson correlation. Throws DegenerateInputError for fewer than two
// points or zero variance, std::invalid_argument for unequal lengths.
double Pearson(std::span<const double> xs, std::span<const double> ys);

// Mean and sample standard deviation with compensated summation; std is 0 for
// a single value. Empty input yields nullopt.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
std::optional<MeanStd> Summarize(std::span<const double> values);

}  // namespace gtx
