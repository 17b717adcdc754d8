#pragma once

#include <string>
#include <string_view>

#include "gtx/grammar.hpp"

namespace gtx {

// Grammar source format, one rule group per line:
//
//   # comment
//   start: S            (optional; defaults to the first lhs)
//   alphabet: 0 1       (optional; defaults to the terminals used)
//   S -> B B | N N | eps
//   T -> 1 1 | 0 0
//
// Tokens are whitespace separated. Nonterminals are a single uppercase letter
// or a bracketed identifier such as [A12]; `eps` is the empty string; any
// other single printable character is a terminal.
//
// Throws GrammarError carrying the offending line and column.
EGrammar ParseGrammarText(std::string_view text);

// Canonical text form; ParseGrammarText(FormatGrammar(g)) reproduces g.
std::string FormatGrammar(const EGrammar& g);

// Formats one rule as "T -> 0 0".
std::string FormatRule(const EGrammar& g, RuleId id);

// Looks up the rule written as "T -> 0 0" (or "S -> eps"). Throws
// std::out_of_range if the grammar has no such rule.
RuleId FindRule(const EGrammar& g, std::string_view rule_text);

// SHA-256 of the canonical text, lowercase hex.
std::string GrammarHash(const EGrammar& g);

}  // namespace gtx
