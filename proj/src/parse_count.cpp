#include "gtx/parse_count.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace gtx {
namespace {

using boost::multiprecision::cpp_int;

TreeCount Add(const TreeCount& a, const TreeCount& b) {
  if (a.infinite || b.infinite) return {0, true};
  return {a.trees + b.trees, false};
}

TreeCount Mul(const TreeCount& a, const TreeCount& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.infinite || b.infinite) return {0, true};
  return {a.trees * b.trees, false};
}

struct Edge {
  std::size_t target;
  TreeCount weight;
};

// Tarjan's algorithm. Components come out in reverse topological order: a
// component is emitted only after every component it has an edge into.
std::vector<std::vector<std::size_t>> StronglyConnected(
    const std::vector<std::vector<Edge>>& graph) {
  const std::size_t n = graph.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const Edge& e : graph[v]) {
      if (index[e.target] < 0) {
        visit(e.target);
        low[v] = std::min(low[v], low[e.target]);
      } else if (on_stack[e.target]) {
        low[v] = std::min(low[v], index[e.target]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> component;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      out.push_back(std::move(component));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return out;
}

bool HasSelfLoop(const std::vector<Edge>& edges, std::size_t v) {
  return std::any_of(edges.begin(), edges.end(),
                     [v](const Edge& e) { return e.target == v; });
}

// Solves x = base + W x over extended naturals. A cycle of non-zero edges
// that receives any positive inflow makes every node on it infinite.
std::vector<TreeCount> SolveLinear(const std::vector<TreeCount>& base,
                                   const std::vector<std::vector<Edge>>& graph) {
  const std::size_t n = base.size();
  std::vector<TreeCount> x(n);
  std::vector<int> component_of(n, -1);
  const auto components = StronglyConnected(graph);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& members = components[c];
    for (std::size_t v : members) component_of[v] = static_cast<int>(c);
    TreeCount inflow;
    for (std::size_t v : members) {
      TreeCount value = base[v];
      for (const Edge& e : graph[v]) {
        if (component_of[e.target] == static_cast<int>(c)) continue;
        value = Add(value, Mul(e.weight, x[e.target]));
      }
      x[v] = value;
      inflow = Add(inflow, value);
    }
    const bool cyclic = members.size() > 1 || HasSelfLoop(graph[members[0]], members[0]);
    if (cyclic) {
      const TreeCount shared = inflow.is_zero() ? TreeCount{} : TreeCount{0, true};
      for (std::size_t v : members) x[v] = shared;
    }
  }
  return x;
}

// Number of distinct eps-derivation trees for every nonterminal.
std::vector<TreeCount> EmptyCounts(const EGrammar& g) {
  const std::size_t n = g.num_nonterminals();
  std::vector<std::vector<Edge>> graph(n);
  for (const Rule& rule : g.rules()) {
    if (rule.shape() != RuleShape::kNonterminalPair) continue;
    const NonterminalId b = rule.rhs[0].id;
    const NonterminalId c = rule.rhs[1].id;
    if (g.is_nullable(b) && g.is_nullable(c)) {
      graph[rule.lhs].push_back({b, {1, false}});
      graph[rule.lhs].push_back({c, {1, false}});
    }
  }
  std::vector<TreeCount> x(n);
  std::vector<int> component_of(n, -1);
  const auto components = StronglyConnected(graph);
  for (std::size_t ci = 0; ci < components.size(); ++ci) {
    const auto& members = components[ci];
    for (std::size_t v : members) component_of[v] = static_cast<int>(ci);
    if (members.size() > 1 || HasSelfLoop(graph[members[0]], members[0])) {
      for (std::size_t v : members) x[v] = {0, true};
      continue;
    }
    const auto a = static_cast<NonterminalId>(members[0]);
    TreeCount value;
    for (RuleId r : g.rules_for(a)) {
      const Rule& rule = g.rule(r);
      if (rule.shape() == RuleShape::kEpsilon) {
        value = Add(value, {1, false});
      } else if (rule.shape() == RuleShape::kNonterminalPair) {
        value = Add(value, Mul(x[rule.rhs[0].id], x[rule.rhs[1].id]));
      }
    }
    x[a] = value;
  }
  return x;
}

}  // namespace

TreeCount CountParseTrees(std::string_view s, const EGrammar& g,
                          std::size_t max_length) {
  if (s.size() > max_length) {
    throw LengthBoundError("string length " + std::to_string(s.size()) +
                           " exceeds the parse bound " + std::to_string(max_length));
  }
  if (!ValidateEGrammar(g).empty()) {
    throw std::invalid_argument("parse counting requires an e-grammar");
  }
  const std::vector<TreeCount> empty = EmptyCounts(g);
  const std::size_t len = s.size();
  if (len == 0) return empty[g.start()];

  const std::size_t n = g.num_nonterminals();
  // table[(i * (len + 1) + j) * n + a]: trees of nonterminal a over s[i, j).
  std::vector<TreeCount> table((len + 1) * (len + 1) * n);
  auto at = [&](std::size_t i, std::size_t j, std::size_t a) -> TreeCount& {
    return table[(i * (len + 1) + j) * n + a];
  };
  for (std::size_t i = 0; i <= len; ++i) {
    for (std::size_t a = 0; a < n; ++a) at(i, i, a) = empty[a];
  }

  std::vector<TreeCount> base(n);
  std::vector<std::vector<Edge>> graph(n);
  for (std::size_t width = 1; width <= len; ++width) {
    for (std::size_t i = 0; i + width <= len; ++i) {
      const std::size_t j = i + width;
      std::fill(base.begin(), base.end(), TreeCount{});
      for (auto& edges : graph) edges.clear();
      for (const Rule& rule : g.rules()) {
        const std::size_t a = rule.lhs;
        if (rule.shape() == RuleShape::kTerminalString) {
          if (rule.rhs.size() == width && rule.terminal_string() == s.substr(i, width)) {
            base[a] = Add(base[a], {1, false});
          }
          continue;
        }
        if (rule.shape() != RuleShape::kNonterminalPair) continue;
        const NonterminalId b = rule.rhs[0].id;
        const NonterminalId c = rule.rhs[1].id;
        for (std::size_t k = i + 1; k < j; ++k) {
          const TreeCount& left = at(i, k, b);
          if (left.is_zero()) continue;
          base[a] = Add(base[a], Mul(left, at(k, j, c)));
        }
        // Zero-width splits: one child derives eps, the other the whole span.
        if (!empty[c].is_zero()) graph[a].push_back({b, empty[c]});
        if (!empty[b].is_zero()) graph[a].push_back({c, empty[b]});
      }
      const std::vector<TreeCount> solved = SolveLinear(base, graph);
      for (std::size_t a = 0; a < n; ++a) at(i, j, a) = solved[a];
    }
  }
  return at(0, len, g.start());
}

}  // namespace gtx
