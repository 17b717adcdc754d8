#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gtx/dataset.hpp"

namespace gtx {

struct AttributionVector {
  std::size_t index = 0;  // row in the dataset
  Label predicted_label = Label::kNeg;
  std::vector<double> scores;
};

// Interchange format shared by the built-in explainers and external ones:
// {"dataset_sha256", "explainer", "model", "instances": [{"index",
// "predicted_label", "scores"}]}.
struct AttributionFile {
  std::string dataset_sha256;
  std::string explainer;
  std::string model;
  std::vector<AttributionVector> instances;
};

class AttributionFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string FormatAttributionJson(const AttributionFile& file);
// Throws AttributionFormatError on malformed JSON, missing fields, non-finite
// scores or duplicate indices.
AttributionFile ParseAttributionJson(std::string_view text);

struct Prediction {
  std::size_t index = 0;
  Label predicted_label = Label::kNeg;
  double score = 0.0;  // POS probability
};

// CSV with header `index,predicted_label,score`.
std::string FormatPredictionsCsv(const std::vector<Prediction>& predictions);
std::vector<Prediction> ParsePredictionsCsv(std::string_view text);

}  // namespace gtx
