#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gtx::testing {

EGrammar RandomEGrammar(Rng& rng, const SmallGrammarShape& shape) {
  const std::size_t n = shape.variables + shape.terminals;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
  std::vector<Rule> rules;
  auto nt = [](std::size_t id) { return Symbol::Nonterminal(static_cast<NonterminalId>(id)); };

  for (std::size_t v = 0; v < shape.variables; ++v) {
    const auto lhs = static_cast<NonterminalId>(v);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t count = rng.Index(shape.max_pairs + 1);
    for (std::size_t k = 0; k < count; ++k) pairs.emplace(rng.Index(n), rng.Index(n));
    for (const auto& [b, c] : pairs) rules.push_back({lhs, {nt(b), nt(c)}});
    if (v == 0 || rng.Bernoulli(0.5)) rules.push_back({lhs, {}});
  }

  std::set<std::string> used;
  const std::size_t width = 1 + rng.Index(shape.max_rhs_length);
  for (std::size_t t = 0; t < shape.terminals; ++t) {
    const auto lhs = static_cast<NonterminalId>(shape.variables + t);
    const std::size_t count = 1 + rng.Index(shape.max_terminal_rules);
    std::set<std::string> mine;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t len =
          shape.uniform_terminals ? width : 1 + rng.Index(shape.max_rhs_length);
      std::string rhs;
      for (std::size_t i = 0; i < len; ++i) {
        rhs += shape.alphabet[rng.Index(shape.alphabet.size())];
      }
      if (shape.uniform_terminals && used.count(rhs)) continue;
      if (!mine.insert(rhs).second) continue;
      used.insert(rhs);
      Rule rule{lhs, {}};
      for (char c : rhs) rule.rhs.push_back(Symbol::Terminal(c));
      rules.push_back(rule);
    }
    if (mine.empty()) {
      // Uniqueness ate every draw; fall back to any unused string of this width.
      for (std::size_t code = 0;; ++code) {
        std::string rhs;
        std::size_t rest = code;
        for (std::size_t i = 0; i < width; ++i) {
          rhs += shape.alphabet[rest % shape.alphabet.size()];
          rest /= shape.alphabet.size();
        }
        if (rest != 0) break;
        if (used.insert(rhs).second) {
          Rule rule{lhs, {}};
          for (char c : rhs) rule.rhs.push_back(Symbol::Terminal(c));
          rules.push_back(rule);
          break;
        }
      }
    }
  }
  return EGrammar(std::move(names), shape.alphabet, std::move(rules), 0);
}

std::string RandomString(Rng& rng, std::size_t length, const std::string& alphabet) {
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s += alphabet[rng.Index(alphabet.size())];
  return s;
}

std::vector<double> RandomScores(Rng& rng, std::size_t length) {
  const bool coarse = rng.Index(4) == 0;
  std::vector<double> out(length);
  for (double& v : out) {
    v = 2.0 * rng.Uniform() - 1.0;
    if (coarse) v = std::round(v * 10.0) / 10.0;
  }
  return out;
}

ExplanationMask RandomMask(Rng& rng, std::size_t length, std::size_t covered) {
  std::vector<std::size_t> positions(length);
  std::iota(positions.begin(), positions.end(), 0);
  rng.Shuffle(positions.begin(), positions.end());
  positions.resize(covered);
  return ExplanationMask(length, positions);
}

EncodedInstance RandomInstance(Rng& rng, std::size_t length, std::size_t alphabet_size) {
  EncodedInstance x(length);
  for (auto& v : x) v = static_cast<std::uint8_t>(rng.Index(alphabet_size));
  return x;
}

Dataset RandomDataset(Rng& rng, std::size_t n, std::size_t length) {
  if (length < 63 && n > (std::size_t{1} << length)) {
    throw std::invalid_argument("more distinct strings requested than exist");
  }
  Dataset d;
  d.alphabet = "01";
  d.string_length = length;
  std::set<std::string> seen;
  while (d.instances.size() < n) {
    std::string s = RandomString(rng, length, d.alphabet);
    if (!seen.insert(s).second) continue;
    LabeledInstance x;
    x.label = rng.Bernoulli(0.5) ? Label::kPos : Label::kNeg;
    x.string = s;
    x.explanation = x.label == Label::kPos ? RandomMask(rng, length, 1 + rng.Index(length))
                                           : ExplanationMask(length, {});
    d.instances.push_back(std::move(x));
  }
  return d;
}

}  // namespace gtx::testing
