#pragma once

// Hand-rolled random generators for property tests. Every generator takes the
// Rng explicitly so a failing case can be replayed from its seed.

#include <cstdint>
#include <string>
#include <vector>

#include "gtx/dataset.hpp"
#include "gtx/encoding.hpp"
#include "gtx/grammar.hpp"
#include "gtx/random.hpp"

namespace gtx::testing {

struct SmallGrammarShape {
  std::size_t variables = 3;      // nonterminals heading pair / eps rules
  std::size_t terminals = 2;      // nonterminals heading terminal rules
  std::size_t max_pairs = 3;      // pair rules per variable
  std::size_t max_terminal_rules = 2;
  std::size_t max_rhs_length = 2;
  bool uniform_terminals = false;  // unique rhs of one shared length
  std::string alphabet = "01";
};

// A random e-grammar; start symbol is nonterminal 0. Every variable gets an
// eps rule with probability 1/2 (the start always does, so the empty string is
// derivable); terminal nonterminals get between 1 and max_terminal_rules rules.
EGrammar RandomEGrammar(Rng& rng, const SmallGrammarShape& shape);

std::string RandomString(Rng& rng, std::size_t length, const std::string& alphabet);

// Scores in [-1, 1]; with probability 1/4 values are rounded to one decimal so
// ties occur.
std::vector<double> RandomScores(Rng& rng, std::size_t length);

ExplanationMask RandomMask(Rng& rng, std::size_t length, std::size_t covered);

EncodedInstance RandomInstance(Rng& rng, std::size_t length, std::size_t alphabet_size);

// A dataset of `n` distinct strings (n <= 2^length) with random labels and, for POS rows,
// random non-empty masks.
Dataset RandomDataset(Rng& rng, std::size_t n, std::size_t length);

}  // namespace gtx::testing
