#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gtx/grammar.hpp"
#include "gtx/random.hpp"

namespace gtx {

struct ParseNode {
  NonterminalId label = 0;
  RuleId rule = 0;
  // Children of a pair-rule node; -1 otherwise.
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Span [begin, end) of the derived string covered by this subtree.
  std::size_t begin = 0;
  std::size_t end = 0;
};

// nodes[0] is the root. Terminal-rule nodes are leaves that carry their rule's
// terminal string; eps nodes are leaves with an empty span.
struct ParseTree {
  std::vector<ParseNode> nodes;
};

struct Derivation {
  ParseTree tree;
  std::string yield;
  // Applications per rule, indexed by RuleId.
  std::vector<std::uint32_t> usage;
};

struct DeriveOptions {
  // Restarts from the start symbol before giving up on one string.
  std::size_t max_restarts = 1000;
};

// Samples derivations whose yield has exactly `length` terminals. Each step
// expands the leftmost nonterminal that heads terminal rules if there is one,
// otherwise the leftmost remaining nonterminal, choosing uniformly among its
// alternatives. Once `length` terminals exist and every pending nonterminal is
// nullable, they are all expanded to eps. Attempts that overshoot, run dry, or
// grow without bound are restarted.
class RandomDeriver {
 public:
  // Throws std::invalid_argument if g is not an e-grammar or length is 0.
  RandomDeriver(const EGrammar& g, std::size_t length, DeriveOptions options = {});

  // nullopt once the restart budget is spent. Immediate when no string of the
  // requested length is derivable at all.
  std::optional<Derivation> operator()(Rng& rng) const;

  bool length_reachable() const { return reachable_; }

 private:
  std::optional<Derivation> Attempt(Rng& rng) const;

  const EGrammar& grammar_;
  std::size_t length_;
  DeriveOptions options_;
  bool reachable_;
};

std::optional<Derivation> RandomDerive(const EGrammar& g, std::size_t length,
                                       Rng& rng, DeriveOptions options = {});

// Builds the derivation whose leftmost expansions apply `rules` in order
// (pre-order rule sequence of the tree). Throws std::invalid_argument if the
// sequence does not form a complete leftmost derivation from the start symbol.
Derivation DerivationFromRules(const EGrammar& g, std::span<const RuleId> rules);

}  // namespace gtx
