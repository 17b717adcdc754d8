#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "gtx/grammar.hpp"

namespace gtx {

// Exact number of parse trees. Grammars whose eps-rules allow a nonterminal to
// re-derive itself over the same span (e.g. A -> A B, B -> eps) have
// infinitely many trees for some strings; `infinite` flags that case.
struct TreeCount {
  boost::multiprecision::cpp_int trees = 0;
  bool infinite = false;

  bool is_zero() const { return !infinite && trees == 0; }
  bool is_unique() const { return !infinite && trees == 1; }
  std::string ToString() const { return infinite ? "inf" : trees.str(); }
};

class LengthBoundError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kDefaultParseLengthBound = 64;

// Counts distinct parse trees of `s` under `g` with a span dynamic program.
// Symbols outside the alphabet simply yield zero trees. Requires g to be an
// e-grammar; throws std::invalid_argument otherwise and LengthBoundError when
// |s| exceeds `max_length`.
TreeCount CountParseTrees(std::string_view s, const EGrammar& g,
                          std::size_t max_length = kDefaultParseLengthBound);

}  // namespace gtx
