#include "gtx/encoding.hpp"

namespace gtx {

EncodedInstance Encode(std::string_view s, std::string_view alphabet) {
  EncodedInstance out;
  out.reserve(s.size());
  for (char c : s) {
    const std::size_t code = alphabet.find(c);
    if (code == std::string_view::npos) {
      throw UnknownSymbolError(std::string("symbol '") + c + "' is not in the alphabet");
    }
    out.push_back(static_cast<std::uint8_t>(code));
  }
  return out;
}

std::string Decode(std::span<const std::uint8_t> x, std::string_view alphabet) {
  std::string out;
  out.reserve(x.size());
  for (std::uint8_t code : x) out.push_back(alphabet.at(code));
  return out;
}

EncodedDataset EncodeDataset(const Dataset& d) {
  EncodedDataset out;
  out.features.reserve(d.instances.size());
  out.labels.reserve(d.instances.size());
  for (const LabeledInstance& x : d.instances) {
    out.features.push_back(Encode(x.string, d.alphabet));
    out.labels.push_back(x.label);
  }
  return out;
}

}  // namespace gtx
