#include "gtx/grammar_text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gtx/hash.hpp"

namespace gtx {
namespace {

using Kind = GrammarError::Kind;

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Returns the bare nonterminal name for `S` or `[A12]` tokens.
std::optional<std::string> NonterminalName(const std::string& tok) {
  if (tok.size() == 1 && std::isupper(static_cast<unsigned char>(tok[0]))) {
    return tok;
  }
  if (tok.size() >= 3 && tok.front() == '[' && tok.back() == ']') {
    std::string inner = tok.substr(1, tok.size() - 2);
    if (std::all_of(inner.begin(), inner.end(), IsIdentChar)) return inner;
  }
  return std::nullopt;
}

bool IsTerminalToken(const std::string& tok) {
  if (tok.size() != 1) return false;
  const unsigned char c = static_cast<unsigned char>(tok[0]);
  if (!std::isgraph(c) || std::isupper(c)) return false;
  // Structural characters, the mask glyph, and CSV delimiters are reserved.
  return std::string_view("|#.[],\"").find(tok[0]) == std::string_view::npos;
}

std::vector<Line> Tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      line.tokens.push_back({std::string(raw.substr(start, i - start)), start + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

std::string PrintName(const std::string& name) {
  if (name.size() == 1 && std::isupper(static_cast<unsigned char>(name[0]))) {
    return name;
  }
  return "[" + name + "]";
}

}  // namespace

EGrammar ParseGrammarText(std::string_view text) {
  const std::vector<Line> lines = Tokenize(text);

  std::vector<std::string> names;
  std::map<std::string, NonterminalId> ids;
  std::optional<Token> start_token;
  std::size_t start_line = 0;
  std::optional<std::string> declared_alphabet;
  std::vector<const Line*> rule_lines;

  // Pass 1: headers and lhs declarations.
  for (const Line& line : lines) {
    const Token& head = line.tokens.front();
    if (head.text == "start:" || head.text == "alphabet:") {
      if (head.text == "start:") {
        if (start_token) {
          throw GrammarError(Kind::kDuplicateDeclaration, "duplicate start header",
                             line.number, head.column);
        }
        if (line.tokens.size() != 2) {
          throw GrammarError(Kind::kSyntax, "expected exactly one start symbol",
                             line.number, head.column);
        }
        start_token = line.tokens[1];
        start_line = line.number;
      } else {
        if (declared_alphabet) {
          throw GrammarError(Kind::kDuplicateDeclaration,
                             "duplicate alphabet header", line.number, head.column);
        }
        std::string alphabet;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
          const Token& tok = line.tokens[i];
          if (!IsTerminalToken(tok.text)) {
            throw GrammarError(Kind::kSyntax, "invalid terminal '" + tok.text + "'",
                               line.number, tok.column);
          }
          if (alphabet.find(tok.text[0]) != std::string::npos) {
            throw GrammarError(Kind::kDuplicateDeclaration,
                               "terminal '" + tok.text + "' listed twice",
                               line.number, tok.column);
          }
          alphabet.push_back(tok.text[0]);
        }
        if (alphabet.empty()) {
          throw GrammarError(Kind::kSyntax, "empty alphabet", line.number,
                             head.column);
        }
        declared_alphabet = std::move(alphabet);
      }
      continue;
    }
    const std::optional<std::string> lhs = NonterminalName(head.text);
    if (!lhs) {
      throw GrammarError(Kind::kSyntax, "expected a nonterminal, got '" + head.text + "'",
                         line.number, head.column);
    }
    if (line.tokens.size() < 3 || line.tokens[1].text != "->") {
      const Token& at = line.tokens.size() > 1 ? line.tokens[1] : head;
      throw GrammarError(Kind::kSyntax, "expected '->' after '" + head.text + "'",
                         line.number, at.column);
    }
    if (ids.count(*lhs)) {
      throw GrammarError(Kind::kDuplicateDeclaration,
                         "rules for '" + head.text + "' are declared twice",
                         line.number, head.column);
    }
    if (names.size() > UINT16_MAX) {
      throw GrammarError(Kind::kStructure, "too many nonterminals", line.number,
                         head.column);
    }
    ids.emplace(*lhs, static_cast<NonterminalId>(names.size()));
    names.push_back(*lhs);
    rule_lines.push_back(&line);
  }
  if (rule_lines.empty()) {
    throw GrammarError(Kind::kSyntax, "grammar text contains no rules",
                       lines.empty() ? 1 : lines.back().number, 1);
  }

  // Pass 2: right-hand sides.
  std::set<char> used_terminals;
  std::vector<Rule> rules;
  for (const Line* line : rule_lines) {
    const NonterminalId lhs = ids.at(*NonterminalName(line->tokens[0].text));
    std::set<std::vector<Symbol>> seen;
    std::vector<Symbol> rhs;
    bool saw_eps = false;
    std::size_t alt_column = line->tokens[1].column;
    auto finish_alternative = [&](std::size_t column) {
      if (rhs.empty() && !saw_eps) {
        throw GrammarError(Kind::kSyntax, "empty alternative (write 'eps')",
                           line->number, column);
      }
      if (!seen.insert(rhs).second) {
        throw GrammarError(Kind::kDuplicateDeclaration, "duplicate alternative",
                           line->number, alt_column);
      }
      rules.push_back({lhs, rhs});
      rhs.clear();
      saw_eps = false;
    };
    for (std::size_t i = 2; i < line->tokens.size(); ++i) {
      const Token& tok = line->tokens[i];
      if (rhs.empty() && !saw_eps) alt_column = tok.column;
      if (tok.text == "|") {
        finish_alternative(tok.column);
        continue;
      }
      if (saw_eps) {
        throw GrammarError(Kind::kSyntax, "'eps' must stand alone in an alternative",
                           line->number, tok.column);
      }
      if (tok.text == "eps") {
        if (!rhs.empty()) {
          throw GrammarError(Kind::kSyntax,
                             "'eps' must stand alone in an alternative",
                             line->number, tok.column);
        }
        saw_eps = true;
      } else if (const auto name = NonterminalName(tok.text)) {
        const auto it = ids.find(*name);
        if (it == ids.end()) {
          throw GrammarError(Kind::kUndeclaredSymbol,
                             "undeclared nonterminal '" + tok.text + "'",
                             line->number, tok.column);
        }
        rhs.push_back(Symbol::Nonterminal(it->second));
      } else if (IsTerminalToken(tok.text)) {
        if (declared_alphabet &&
            declared_alphabet->find(tok.text[0]) == std::string::npos) {
          throw GrammarError(Kind::kUndeclaredSymbol,
                             "terminal '" + tok.text + "' is not in the alphabet",
                             line->number, tok.column);
        }
        used_terminals.insert(tok.text[0]);
        rhs.push_back(Symbol::Terminal(tok.text[0]));
      } else {
        throw GrammarError(Kind::kSyntax, "unexpected token '" + tok.text + "'",
                           line->number, tok.column);
      }
    }
    finish_alternative(line->tokens.back().column);
  }

  NonterminalId start = 0;
  if (start_token) {
    const auto name = NonterminalName(start_token->text);
    if (!name) {
      throw GrammarError(Kind::kSyntax, "invalid start symbol '" + start_token->text + "'",
                         start_line, start_token->column);
    }
    const auto it = ids.find(*name);
    if (it == ids.end()) {
      throw GrammarError(Kind::kUndeclaredSymbol,
                         "start symbol '" + start_token->text + "' has no rules",
                         start_line, start_token->column);
    }
    start = it->second;
  }
  std::string alphabet = declared_alphabet
                             ? *declared_alphabet
                             : std::string(used_terminals.begin(), used_terminals.end());
  return EGrammar(std::move(names), std::move(alphabet), std::move(rules), start);
}

std::string FormatRule(const EGrammar& g, RuleId id) {
  const Rule& rule = g.rule(id);
  std::string out = PrintName(g.name(rule.lhs)) + " ->";
  if (rule.rhs.empty()) return out + " eps";
  for (const Symbol& s : rule.rhs) {
    out += ' ';
    out += s.is_terminal() ? std::string(1, s.glyph()) : PrintName(g.name(s.id));
  }
  return out;
}

std::string FormatGrammar(const EGrammar& g) {
  std::ostringstream out;
  out << "start: " << PrintName(g.name(g.start())) << '\n';
  out << "alphabet:";
  for (char c : g.alphabet()) out << ' ' << c;
  out << '\n';
  for (NonterminalId a = 0; a < g.num_nonterminals(); ++a) {
    const std::vector<RuleId>& ids = g.rules_for(a);
    if (ids.empty()) continue;
    out << PrintName(g.name(a)) << " ->";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::string rule = FormatRule(g, ids[i]);
      out << (i == 0 ? "" : " |") << rule.substr(rule.find("->") + 2);
    }
    out << '\n';
  }
  return out.str();
}

RuleId FindRule(const EGrammar& g, std::string_view rule_text) {
  // Normalize whitespace so "T -> 0 0" and "T->0 0" compare equal.
  auto squash = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    }
    return out;
  };
  const std::string wanted = squash(rule_text);
  for (RuleId r = 0; r < g.rules().size(); ++r) {
    if (squash(FormatRule(g, r)) == wanted) return r;
  }
  throw std::out_of_range("no rule '" + std::string(rule_text) + "'");
}

std::string GrammarHash(const EGrammar& g) { return Sha256Hex(FormatGrammar(g)); }

}  // namespace gtx
