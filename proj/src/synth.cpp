#include "gtx/synth.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <vector>

#include "gtx/random.hpp"

namespace gtx {
namespace {

using Pair = std::tuple<NonterminalId, NonterminalId, NonterminalId>;  // A -> B C

std::string NonterminalName(std::size_t index) {
  if (index == 0) return "S";
  static constexpr std::string_view kLetters = "ABCDEFGHIJKLMNOPQRTUVWXYZ";  // no S
  if (index - 1 < kLetters.size()) return std::string(1, kLetters[index - 1]);
  return "N" + std::to_string(index);
}

// Saturating integer power.
std::size_t CountStrings(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (out > SIZE_MAX / std::max<std::size_t>(base, 1)) return SIZE_MAX;
    out *= base;
  }
  return out;
}

std::vector<std::string> DistinctTerminalStrings(const std::string& alphabet,
                                                 std::size_t length, std::size_t count,
                                                 Rng& rng) {
  const std::size_t universe = CountStrings(alphabet.size(), length);
  auto decode = [&](std::size_t code) {
    std::string s(length, alphabet[0]);
    for (std::size_t i = length; i-- > 0;) {
      s[i] = alphabet[code % alphabet.size()];
      code /= alphabet.size();
    }
    return s;
  };
  std::vector<std::string> out;
  if (universe <= (1u << 16)) {
    std::vector<std::size_t> codes(universe);
    for (std::size_t i = 0; i < universe; ++i) codes[i] = i;
    rng.Shuffle(codes.begin(), codes.end());
    for (std::size_t i = 0; i < count; ++i) out.push_back(decode(codes[i]));
    return out;
  }
  std::set<std::string> chosen;
  while (out.size() < count) {
    std::string s(length, alphabet[0]);
    for (char& c : s) c = alphabet[rng.Index(alphabet.size())];
    if (chosen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

std::vector<bool> Reachable(std::size_t n, const std::vector<Pair>& pairs) {
  std::vector<bool> seen(n, false);
  seen[0] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [a, b, c] : pairs) {
      if (!seen[a]) continue;
      for (NonterminalId x : {b, c}) {
        if (!seen[x]) {
          seen[x] = true;
          changed = true;
        }
      }
    }
  }
  return seen;
}

}  // namespace

std::string SynthAlphabet(std::size_t size) {
  static constexpr std::string_view kGlyphs = "0123456789abcdefghijklmnopqrstuvwxyz";
  if (size == 0 || size > kGlyphs.size()) {
    throw InfeasibleSpecError("alphabet size must be in [1, 36]");
  }
  return std::string(kGlyphs.substr(0, size));
}

EGrammar SynthEGrammar(const GrammarSpec& spec) {
  const std::size_t n = spec.num_nonterminals;
  const std::size_t universe = CountStrings(spec.alphabet_size, spec.terminal_rhs_length);
  const std::size_t n_t = spec.num_terminal_nonterminals != 0
                              ? spec.num_terminal_nonterminals
                              : std::max<std::size_t>(2, std::min(universe, n / 2));
  if (n_t < 2 || n_t >= n) {
    throw InfeasibleSpecError("need at least 2 terminal nonterminals and 1 other");
  }
  if (n > UINT16_MAX) throw InfeasibleSpecError("too many nonterminals");
  if (spec.terminal_rhs_length == 0) {
    throw InfeasibleSpecError("terminal rhs length must be positive");
  }
  const std::string alphabet = SynthAlphabet(spec.alphabet_size);
  const std::size_t n_v = n - n_t;
  const std::size_t terminal_rules =
      spec.num_terminal_rules == 0 ? n_t : spec.num_terminal_rules;
  if (terminal_rules < n_t) {
    throw InfeasibleSpecError("each terminal nonterminal needs a terminal rule");
  }
  if (terminal_rules > universe) {
    throw InfeasibleSpecError(
        std::to_string(terminal_rules) + " terminal rules need distinct right-hand sides, "
        "but only " + std::to_string(universe) + " strings of length " + std::to_string(spec.terminal_rhs_length) + " exist");
  }
  if (spec.target_g_complexity < terminal_rules) {
    throw InfeasibleSpecError("G-complexity is below the number of terminal rules");
  }
  const std::size_t pair_rules = spec.target_g_complexity - terminal_rules;
  if (pair_rules < (n - 1 + 1) / 2) {
    throw InfeasibleSpecError("too few nonterminal rules to reach every nonterminal");
  }
  if (pair_rules > n_v * n * n) {
    throw InfeasibleSpecError("more nonterminal rules requested than distinct pairs exist");
  }

  Rng rng(spec.seed);

  // Terminal rules: the first n_t strings give each N_t one rule, the rest are
  // spread uniformly.
  const std::vector<std::string> rhs = DistinctTerminalStrings(
      alphabet, spec.terminal_rhs_length, terminal_rules, rng);
  std::vector<std::vector<std::string>> terminal_by_lhs(n_t);
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    terminal_by_lhs[i < n_t ? i : rng.Index(n_t)].push_back(rhs[i]);
  }

  // Pair rules: uniform distinct draws.
  std::set<Pair> drawn_set;
  std::vector<Pair> drawn;
  while (drawn.size() < pair_rules) {
    Pair p{static_cast<NonterminalId>(rng.Index(n_v)),
           static_cast<NonterminalId>(rng.Index(n)),
           static_cast<NonterminalId>(rng.Index(n))};
    if (drawn_set.insert(p).second) drawn.push_back(p);
  }

  // Reachability repair. Links are never removed, so the set of symbols
  // reachable through links only grows and the loop ends after at most n - 1
  // rounds.
  std::vector<bool> is_link(drawn.size(), false);
  std::vector<NonterminalId> link_hosts{0};
  while (true) {
    const std::vector<bool> seen = Reachable(n, drawn);
    std::vector<NonterminalId> missing;
    for (NonterminalId x = 0; x < n; ++x) {
      if (!seen[x]) missing.push_back(x);
    }
    if (missing.empty()) break;
    std::vector<std::size_t> removable;
    for (std::size_t i = 0; i < drawn.size(); ++i) {
      if (!is_link[i]) removable.push_back(i);
    }
    if (removable.empty()) {
      throw InfeasibleSpecError("cannot make every nonterminal reachable");
    }
    const std::size_t victim = removable[rng.Index(removable.size())];
    const NonterminalId host = link_hosts[rng.Index(link_hosts.size())];
    const NonterminalId u = missing[0];
    const NonterminalId v = missing.size() > 1 ? missing[1]
                                               : static_cast<NonterminalId>(rng.Index(n));
    const Pair link{host, u, v};
    drawn_set.erase(drawn[victim]);
    if (!drawn_set.insert(link).second) {
      throw InfeasibleSpecError("reachability link collides with an existing rule");
    }
    drawn[victim] = link;
    is_link[victim] = true;
    for (NonterminalId x : {u, v}) {
      if (x < n_v && std::find(link_hosts.begin(), link_hosts.end(), x) == link_hosts.end()) {
        link_hosts.push_back(x);
      }
    }
  }

  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(NonterminalName(i));
  std::vector<Rule> rules;
  for (NonterminalId a = 0; a < n_v; ++a) {
    for (const auto& [lhs, b, c] : drawn_set) {
      if (lhs == a) rules.push_back({a, {Symbol::Nonterminal(b), Symbol::Nonterminal(c)}});
    }
    rules.push_back({a, {}});
  }
  for (std::size_t t = 0; t < n_t; ++t) {
    const auto a = static_cast<NonterminalId>(n_v + t);
    std::vector<std::string> strings = terminal_by_lhs[t];
    std::sort(strings.begin(), strings.end());
    for (const std::string& s : strings) {
      Rule rule{a, {}};
      for (char c : s) rule.rhs.push_back(Symbol::Terminal(c));
      rules.push_back(std::move(rule));
    }
  }
  return EGrammar(std::move(names), alphabet, std::move(rules), 0);
}

}  // namespace gtx
