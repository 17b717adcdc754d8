#include "gtx/grammar.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gtx {

RuleShape Rule::shape() const {
  if (rhs.empty()) return RuleShape::kEpsilon;
  const bool all_terminal = std::all_of(
      rhs.begin(), rhs.end(), [](const Symbol& s) { return s.is_terminal(); });
  if (all_terminal) return RuleShape::kTerminalString;
  const bool all_nonterminal = std::none_of(
      rhs.begin(), rhs.end(), [](const Symbol& s) { return s.is_terminal(); });
  if (all_nonterminal && rhs.size() == 2) return RuleShape::kNonterminalPair;
  return RuleShape::kMalformed;
}

std::string Rule::terminal_string() const {
  std::string out;
  for (const Symbol& s : rhs) {
    if (s.is_terminal()) out.push_back(s.glyph());
  }
  return out;
}

GrammarError::GrammarError(Kind kind, const std::string& message,
                           std::size_t line, std::size_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

EGrammar::EGrammar(std::vector<std::string> nonterminal_names,
                   std::string alphabet, std::vector<Rule> rules,
                   NonterminalId start)
    : names_(std::move(nonterminal_names)),
      alphabet_(std::move(alphabet)),
      rules_(std::move(rules)),
      start_(start) {
  using Kind = GrammarError::Kind;
  if (names_.empty()) {
    throw GrammarError(Kind::kStructure, "grammar has no nonterminals");
  }
  std::set<std::string> seen;
  for (const std::string& n : names_) {
    if (n.empty()) throw GrammarError(Kind::kStructure, "empty nonterminal name");
    if (!seen.insert(n).second) {
      throw GrammarError(Kind::kDuplicateDeclaration,
                         "duplicate nonterminal '" + n + "'");
    }
  }
  std::sort(alphabet_.begin(), alphabet_.end());
  if (std::adjacent_find(alphabet_.begin(), alphabet_.end()) != alphabet_.end()) {
    throw GrammarError(Kind::kDuplicateDeclaration, "duplicate terminal glyph");
  }
  if (alphabet_.find(kMaskGlyph) != std::string::npos) {
    throw GrammarError(Kind::kStructure, "'.' is reserved and cannot be a terminal");
  }
  if (start_ >= names_.size()) {
    throw GrammarError(Kind::kUndeclaredSymbol, "start symbol out of range");
  }

  const std::size_t n = names_.size();
  rules_by_lhs_.resize(n);
  for (RuleId r = 0; r < rules_.size(); ++r) {
    const Rule& rule = rules_[r];
    if (rule.lhs >= n) {
      throw GrammarError(Kind::kUndeclaredSymbol,
                         "rule " + std::to_string(r) + " has an undeclared lhs");
    }
    for (const Symbol& s : rule.rhs) {
      if (s.is_terminal() ? !has_terminal(s.glyph()) : s.id >= n) {
        throw GrammarError(Kind::kUndeclaredSymbol,
                           "rule " + std::to_string(r) +
                               " references an undeclared symbol");
      }
    }
    rules_by_lhs_[rule.lhs].push_back(r);
  }

  roles_.assign(n, NonterminalRole::kVariable);
  for (NonterminalId a = 0; a < n; ++a) {
    bool terminal = false;
    bool variable = false;
    for (RuleId r : rules_by_lhs_[a]) {
      (rules_[r].is_terminal_rule() ? terminal : variable) = true;
    }
    if (terminal && variable) {
      roles_[a] = NonterminalRole::kMixed;
    } else if (terminal) {
      roles_[a] = NonterminalRole::kTerminal;
    }
  }

  // Nullable set and minimal-height eps derivations, by rounds of increasing
  // height.
  nullable_.assign(n, false);
  epsilon_rule_.assign(n, std::nullopt);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<bool> next = nullable_;
    for (RuleId r = 0; r < rules_.size(); ++r) {
      const Rule& rule = rules_[r];
      if (nullable_[rule.lhs] || next[rule.lhs]) continue;
      const RuleShape shape = rule.shape();
      const bool derives_empty =
          shape == RuleShape::kEpsilon ||
          (shape == RuleShape::kNonterminalPair && nullable_[rule.rhs[0].id] &&
           nullable_[rule.rhs[1].id]);
      if (derives_empty) {
        next[rule.lhs] = true;
        epsilon_rule_[rule.lhs] = r;
        changed = true;
      }
    }
    nullable_ = std::move(next);
  }
}

std::optional<NonterminalId> EGrammar::find_nonterminal(std::string_view name) const {
  for (NonterminalId i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

bool EGrammar::has_terminal(char glyph) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), glyph);
}

std::optional<RuleId> EGrammar::epsilon_rule(NonterminalId id) const {
  return epsilon_rule_[id];
}

std::vector<RuleId> EGrammar::terminal_rules() const {
  std::vector<RuleId> out;
  for (RuleId r = 0; r < rules_.size(); ++r) {
    if (rules_[r].is_terminal_rule()) out.push_back(r);
  }
  return out;
}

std::vector<Violation> ValidateEGrammar(const EGrammar& g) {
  std::vector<Violation> report;
  for (NonterminalId a = 0; a < g.num_nonterminals(); ++a) {
    if (g.role(a) == NonterminalRole::kMixed) {
      report.push_back({Violation::Kind::kMixedRole, std::nullopt,
                        "'" + g.name(a) +
                            "' heads both terminal and nonterminal rules"});
    }
    if (g.name(a).size() == 1 && g.has_terminal(g.name(a)[0])) {
      report.push_back({Violation::Kind::kNameClash, std::nullopt,
                        "'" + g.name(a) + "' is both a nonterminal and a terminal"});
    }
  }
  for (RuleId r = 0; r < g.rules().size(); ++r) {
    const Rule& rule = g.rule(r);
    if (rule.shape() != RuleShape::kMalformed) continue;
    const bool has_terminal = std::any_of(
        rule.rhs.begin(), rule.rhs.end(),
        [](const Symbol& s) { return s.is_terminal(); });
    if (has_terminal) {
      report.push_back({Violation::Kind::kMixedRhs, r,
                        "rule " + std::to_string(r) + " of '" + g.name(rule.lhs) +
                            "' mixes terminals and nonterminals"});
    } else {
      report.push_back({Violation::Kind::kBadArity, r,
                        "rule " + std::to_string(r) + " of '" + g.name(rule.lhs) +
                            "' has " + std::to_string(rule.rhs.size()) +
                            " nonterminals; expected a pair or eps"});
    }
  }
  return report;
}

std::size_t GComplexity(const EGrammar& g) {
  return static_cast<std::size_t>(std::count_if(
      g.rules().begin(), g.rules().end(),
      [](const Rule& r) { return !r.rhs.empty(); }));
}

std::optional<std::size_t> UniformTerminalLength(const EGrammar& g) {
  std::optional<std::size_t> length;
  for (const Rule& r : g.rules()) {
    if (!r.is_terminal_rule()) continue;
    if (length && *length != r.rhs.size()) return std::nullopt;
    length = r.rhs.size();
  }
  return length;
}

PreconditionReport CheckExplanationPreconditions(const EGrammar& g) {
  PreconditionReport report;
  std::map<std::string, RuleId> first_use;
  std::set<std::size_t> lengths;
  for (RuleId r : g.terminal_rules()) {
    const std::string rhs = g.rule(r).terminal_string();
    lengths.insert(rhs.size());
    const auto [it, inserted] = first_use.emplace(rhs, r);
    if (!inserted) {
      report.issues.push_back("terminal rules " + std::to_string(it->second) +
                              " and " + std::to_string(r) +
                              " share the right-hand side '" + rhs + "'");
    }
  }
  if (lengths.size() > 1) {
    std::string list;
    for (std::size_t len : lengths) {
      list += (list.empty() ? "" : ", ") + std::to_string(len);
    }
    report.issues.push_back("terminal rules have mixed lengths {" + list + "}");
  }
  report.satisfied = report.issues.empty();
  return report;
}

std::vector<bool> DerivableLengths(const EGrammar& g, std::size_t max_length) {
  const std::size_t n = g.num_nonterminals();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(max_length + 1, false));
  for (bool changed = true; changed;) {
    changed = false;
    for (const Rule& rule : g.rules()) {
      std::vector<bool>& dst = reach[rule.lhs];
      auto mark = [&](std::size_t len) {
        if (len <= max_length && !dst[len]) {
          dst[len] = true;
          changed = true;
        }
      };
      switch (rule.shape()) {
        case RuleShape::kEpsilon:
          mark(0);
          break;
        case RuleShape::kTerminalString:
          mark(rule.rhs.size());
          break;
        case RuleShape::kNonterminalPair: {
          const std::vector<bool>& left = reach[rule.rhs[0].id];
          const std::vector<bool>& right = reach[rule.rhs[1].id];
          for (std::size_t a = 0; a <= max_length; ++a) {
            if (!left[a]) continue;
            for (std::size_t b = 0; a + b <= max_length; ++b) {
              if (right[b]) mark(a + b);
            }
          }
          break;
        }
        case RuleShape::kMalformed:
          break;
      }
    }
  }
  return reach[g.start()];
}

}  // namespace gtx
