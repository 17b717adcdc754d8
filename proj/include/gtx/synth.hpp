#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gtx/grammar.hpp"

namespace gtx {

struct GrammarSpec {
  std::size_t num_nonterminals = 8;
  std::size_t target_g_complexity = 40;
  std::size_t alphabet_size = 2;
  std::size_t terminal_rhs_length = 2;
  std::uint64_t seed = 0;
  // 0 selects the defaults below.
  // Default: one per distinct terminal string, at most half the nonterminals
  // and at least 2.
  std::size_t num_terminal_nonterminals = 0;
  // Default: one per terminal nonterminal, so the nonterminal rules alone
  // decide which terminal strings co-occur.
  std::size_t num_terminal_rules = 0;
};

class InfeasibleSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Terminal glyphs used for synthesized alphabets: 0-9 then a-z.
std::string SynthAlphabet(std::size_t size);

// Random e-grammar with exactly `target_g_complexity` non-eps alternatives.
// Nonterminals split into N_v (start first) and N_t. Terminal rules get
// pairwise-distinct right-hand sides of one length; every N_v symbol has an
// eps alternative; pair rules are uniform random draws, after which a repair
// pass swaps drawn rules for links until every nonterminal is reachable from
// the start symbol. Deterministic in `spec.seed`.
EGrammar SynthEGrammar(const GrammarSpec& spec);

}  // namespace gtx
