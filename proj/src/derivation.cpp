#include "gtx/derivation.hpp"

#include <stdexcept>

namespace gtx {
namespace {

// Appends the children created by applying `r` at `node`, returning the new
// frontier entries in left-to-right order.
std::vector<std::int32_t> Apply(const EGrammar& g, RuleId r, std::int32_t node,
                                Derivation& d) {
  const Rule& rule = g.rule(r);
  d.tree.nodes[node].rule = r;
  ++d.usage[r];
  if (rule.shape() != RuleShape::kNonterminalPair) return {};
  const auto left = static_cast<std::int32_t>(d.tree.nodes.size());
  d.tree.nodes.push_back({rule.rhs[0].id, 0, -1, -1, 0, 0});
  d.tree.nodes.push_back({rule.rhs[1].id, 0, -1, -1, 0, 0});
  d.tree.nodes[node].left = left;
  d.tree.nodes[node].right = left + 1;
  return {left, left + 1};
}

void ExpandToEmpty(const EGrammar& g, std::int32_t node, Derivation& d) {
  const RuleId r = *g.epsilon_rule(d.tree.nodes[node].label);
  for (std::int32_t child : Apply(g, r, node, d)) ExpandToEmpty(g, child, d);
}

// Assigns spans and builds the yield by an in-order walk.
void Finish(const EGrammar& g, Derivation& d) {
  d.yield.clear();
  std::vector<std::pair<std::int32_t, bool>> stack{{0, false}};
  while (!stack.empty()) {
    auto [id, closing] = stack.back();
    stack.pop_back();
    ParseNode& node = d.tree.nodes[id];
    if (closing) {
      node.end = d.yield.size();
      continue;
    }
    node.begin = d.yield.size();
    const Rule& rule = g.rule(node.rule);
    if (rule.shape() == RuleShape::kTerminalString) {
      d.yield += rule.terminal_string();
      node.end = d.yield.size();
    } else if (node.left >= 0) {
      stack.push_back({id, true});
      stack.push_back({node.right, false});
      stack.push_back({node.left, false});
    } else {
      node.end = node.begin;
    }
  }
}

Derivation EmptyDerivation(const EGrammar& g) {
  Derivation d;
  d.tree.nodes.push_back({g.start(), 0, -1, -1, 0, 0});
  d.usage.assign(g.rules().size(), 0);
  return d;
}

}  // namespace

RandomDeriver::RandomDeriver(const EGrammar& g, std::size_t length,
                             DeriveOptions options)
    : grammar_(g), length_(length), options_(options) {
  if (length == 0) throw std::invalid_argument("derivation length must be positive");
  if (!ValidateEGrammar(g).empty()) {
    throw std::invalid_argument("random derivation requires an e-grammar");
  }
  reachable_ = DerivableLengths(g, length)[length];
}

std::optional<Derivation> RandomDeriver::operator()(Rng& rng) const {
  if (!reachable_) return std::nullopt;
  for (std::size_t attempt = 0; attempt < options_.max_restarts; ++attempt) {
    if (auto d = Attempt(rng)) return d;
  }
  return std::nullopt;
}

std::optional<Derivation> RandomDeriver::Attempt(Rng& rng) const {
  const EGrammar& g = grammar_;
  Derivation d = EmptyDerivation(g);
  std::vector<std::int32_t> frontier{0};
  std::size_t produced = 0;
  const std::size_t frontier_cap = 8 * length_ + 64;
  const std::size_t step_cap = 64 * (length_ + 1) + 1024;

  for (std::size_t step = 0;; ++step) {
    if (produced == length_) {
      for (std::int32_t node : frontier) {
        if (!g.is_nullable(d.tree.nodes[node].label)) return std::nullopt;
      }
      for (std::int32_t node : frontier) ExpandToEmpty(g, node, d);
      Finish(g, d);
      return d;
    }
    if (produced > length_ || frontier.empty() || frontier.size() > frontier_cap ||
        step > step_cap) {
      return std::nullopt;
    }

    std::size_t pick = 0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (g.role(d.tree.nodes[frontier[i]].label) == NonterminalRole::kTerminal) {
        pick = i;
        break;
      }
    }
    const std::int32_t node = frontier[pick];
    const std::vector<RuleId>& choices = g.rules_for(d.tree.nodes[node].label);
    if (choices.empty()) return std::nullopt;
    const RuleId r = choices[rng.Index(choices.size())];
    const std::vector<std::int32_t> children = Apply(g, r, node, d);
    if (g.rule(r).shape() == RuleShape::kTerminalString) {
      produced += g.rule(r).rhs.size();
    }
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
    frontier.insert(frontier.begin() + static_cast<std::ptrdiff_t>(pick),
                    children.begin(), children.end());
  }
}

std::optional<Derivation> RandomDerive(const EGrammar& g, std::size_t length,
                                       Rng& rng, DeriveOptions options) {
  return RandomDeriver(g, length, options)(rng);
}

Derivation DerivationFromRules(const EGrammar& g, std::span<const RuleId> rules) {
  Derivation d = EmptyDerivation(g);
  std::vector<std::int32_t> frontier{0};
  for (RuleId r : rules) {
    if (r >= g.rules().size()) throw std::invalid_argument("rule id out of range");
    if (frontier.empty()) {
      throw std::invalid_argument("rule sequence continues after the tree is complete");
    }
    const std::int32_t node = frontier.front();
    if (g.rule(r).lhs != d.tree.nodes[node].label) {
      throw std::invalid_argument("rule " + std::to_string(r) +
                                  " does not expand the leftmost nonterminal '" +
                                  g.name(d.tree.nodes[node].label) + "'");
    }
    const std::vector<std::int32_t> children = Apply(g, r, node, d);
    frontier.erase(frontier.begin());
    frontier.insert(frontier.begin(), children.begin(), children.end());
  }
  if (!frontier.empty()) {
    throw std::invalid_argument("rule sequence leaves nonterminals unexpanded");
  }
  Finish(g, d);
  return d;
}

}  // namespace gtx
