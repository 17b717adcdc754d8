#pragma once

// Hand-written grammars and datasets shared by the unit and acceptance tests.

#include <string_view>
#include <utility>
#include <vector>

#include "gtx/dataset.hpp"
#include "gtx/derivation.hpp"
#include "gtx/grammar.hpp"
#include "gtx/grammar_text.hpp"

namespace gtx::testing {

// Worked grammar over {0,1} whose terminal rules emit 11, 00, 01 and 10.
inline constexpr std::string_view kExample2Grammar =
    "S -> B B | N N | eps\n"
    "B -> T T | Y Y | eps\n"
    "N -> T Y | Y T | eps\n"
    "T -> 1 1 | 0 0\n"
    "Y -> 0 1 | 1 0\n";

inline EGrammar Example2() { return ParseGrammarText(kExample2Grammar); }

// Leftmost derivations of the two worked parse trees for "11000000" and
// "11000110".
inline Derivation Derive(const EGrammar& g, const std::vector<std::string_view>& rules) {
  std::vector<RuleId> ids;
  for (std::string_view r : rules) ids.push_back(FindRule(g, r));
  return DerivationFromRules(g, ids);
}

inline Derivation Tree11000000(const EGrammar& g) {
  return Derive(g, {"S -> B B", "B -> T T", "T -> 1 1", "T -> 0 0", "B -> T T", "T -> 0 0",
                    "T -> 0 0"});
}

inline Derivation Tree11000110(const EGrammar& g) {
  return Derive(g, {"S -> B B", "B -> T T", "T -> 1 1", "T -> 0 0", "B -> Y Y", "Y -> 0 1",
                    "Y -> 1 0"});
}

// Six 5-symbol strings, three POS and three NEG.
inline Dataset Example1Dataset() {
  Dataset d;
  d.alphabet = "01";
  d.string_length = 5;
  const std::pair<const char*, Label> rows[] = {
      {"00100", Label::kNeg}, {"00001", Label::kNeg}, {"10000", Label::kNeg},
      {"11111", Label::kPos}, {"00111", Label::kPos}, {"10011", Label::kPos},
  };
  for (const auto& [s, label] : rows) {
    LabeledInstance x;
    x.label = label;
    x.string = s;
    d.instances.push_back(x);
  }
  return d;
}

}  // namespace gtx::testing
