#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gtx/dataset.hpp"

namespace gtx {

// One categorical feature per string position: the index of the symbol in the
// sorted dataset alphabet.
using EncodedInstance = std::vector<std::uint8_t>;

// Any model mapping an encoded instance to a POS probability.
using ScoreFunction = std::function<double(std::span<const std::uint8_t>)>;

class UnknownSymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

EncodedInstance Encode(std::string_view s, std::string_view alphabet);
std::string Decode(std::span<const std::uint8_t> x, std::string_view alphabet);

struct EncodedDataset {
  std::vector<EncodedInstance> features;
  std::vector<Label> labels;
};

EncodedDataset EncodeDataset(const Dataset& d);

}  // namespace gtx
