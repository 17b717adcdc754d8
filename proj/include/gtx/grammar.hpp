#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtx {

using NonterminalId = std::uint16_t;
using RuleId = std::uint32_t;

// Glyph that marks an uncovered position in an explanation; never a terminal.
inline constexpr char kMaskGlyph = '.';

enum class SymbolKind : std::uint8_t { kTerminal, kNonterminal };

// A terminal is identified by its glyph, a nonterminal by its index into the
// grammar's nonterminal table.
struct Symbol {
  SymbolKind kind = SymbolKind::kTerminal;
  std::uint16_t id = 0;

  static Symbol Terminal(char glyph) {
    return {SymbolKind::kTerminal, static_cast<std::uint8_t>(glyph)};
  }
  static Symbol Nonterminal(NonterminalId id) {
    return {SymbolKind::kNonterminal, id};
  }
  bool is_terminal() const { return kind == SymbolKind::kTerminal; }
  char glyph() const { return static_cast<char>(id); }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

enum class RuleShape : std::uint8_t {
  kEpsilon,          // A -> eps
  kNonterminalPair,  // A -> B C
  kTerminalString,   // A -> a b c ...
  kMalformed,        // anything else; reported by ValidateEGrammar
};

struct Rule {
  NonterminalId lhs = 0;
  std::vector<Symbol> rhs;

  RuleShape shape() const;
  bool is_terminal_rule() const { return shape() == RuleShape::kTerminalString; }
  // Terminal glyphs of a terminal rule, in order.
  std::string terminal_string() const;
};

// Role of a nonterminal, inferred from the rules it heads.
enum class NonterminalRole : std::uint8_t {
  kVariable,  // N_v: heads pair / eps rules (or nothing)
  kTerminal,  // N_t: heads terminal rules only
  kMixed,     // heads both kinds; not an e-grammar
};

class GrammarError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kDuplicateDeclaration, kUndeclaredSymbol, kStructure };

  GrammarError(Kind kind, const std::string& message, std::size_t line = 0,
               std::size_t column = 0);

  Kind kind() const { return kind_; }
  // 1-based; 0 when the error is not tied to a source position.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

// An explanation-grammar candidate. Construction enforces only structural
// soundness (every referenced symbol exists); the e-grammar shape conditions
// are checked separately by ValidateEGrammar so that violations can be
// reported as data. Immutable after construction.
class EGrammar {
 public:
  EGrammar(std::vector<std::string> nonterminal_names, std::string alphabet,
           std::vector<Rule> rules, NonterminalId start);

  std::size_t num_nonterminals() const { return names_.size(); }
  const std::string& name(NonterminalId id) const { return names_[id]; }
  std::optional<NonterminalId> find_nonterminal(std::string_view name) const;

  // Sorted, duplicate-free terminal glyphs.
  const std::string& alphabet() const { return alphabet_; }
  bool has_terminal(char glyph) const;

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(RuleId id) const { return rules_[id]; }
  const std::vector<RuleId>& rules_for(NonterminalId id) const {
    return rules_by_lhs_[id];
  }
  NonterminalId start() const { return start_; }

  NonterminalRole role(NonterminalId id) const { return roles_[id]; }
  bool is_nullable(NonterminalId id) const { return nullable_[id]; }
  // For a nullable nonterminal, a rule that starts a minimal-height derivation
  // of the empty string.
  std::optional<RuleId> epsilon_rule(NonterminalId id) const;

  std::vector<RuleId> terminal_rules() const;

 private:
  std::vector<std::string> names_;
  std::string alphabet_;
  std::vector<Rule> rules_;
  NonterminalId start_;
  std::vector<std::vector<RuleId>> rules_by_lhs_;
  std::vector<NonterminalRole> roles_;
  std::vector<bool> nullable_;
  std::vector<std::optional<RuleId>> epsilon_rule_;
};

struct Violation {
  enum class Kind {
    kMixedRole,       // lhs heads both terminal and nonterminal rules
    kBadArity,        // nonterminal rhs that is neither a pair nor eps
    kMixedRhs,        // rhs mixes terminals and nonterminals
    kNameClash,       // a nonterminal name is also a terminal glyph
  };
  Kind kind;
  std::optional<RuleId> rule;
  std::string message;
};

// Empty result means the grammar is an e-grammar.
std::vector<Violation> ValidateEGrammar(const EGrammar& g);

// Number of rule alternatives whose right-hand side is not eps.
std::size_t GComplexity(const EGrammar& g);

struct PreconditionReport {
  bool satisfied = false;
  std::vector<std::string> issues;
};

// Conditions under which every explanation produced by LabelAndExplain is
// correct: terminal-rule right-hand sides are pairwise distinct and share a
// length.
PreconditionReport CheckExplanationPreconditions(const EGrammar& g);

// Common terminal-rule rhs length, if there is one.
std::optional<std::size_t> UniformTerminalLength(const EGrammar& g);

// derivable[n] is true iff some string of length n (n <= max_length) can be
// derived from the start symbol.
std::vector<bool> DerivableLengths(const EGrammar& g, std::size_t max_length);

}  // namespace gtx
