#pragma once

// Isomorphism-free generation of free trees (n <= 12) and of small connected
// graphs (n <= 7), both by one-vertex augmentation plus canonical dedup.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "steklov/canonical.hpp"
#include "steklov/graph.hpp"

namespace steklov {

/// One representative per isomorphism class of trees on n vertices, in
/// canonical-code order. Counts: 1 2 3 6 11 23 47 106 235 551 for n = 3..12.
inline std::vector<BoundaryGraph> enumerate_trees(int n) {
  if (n < 3 || n > 12) throw ValidationError(ValidationKind::bad_parameter, "enumerate_trees needs 3 <= n <= 12");
  std::map<std::string, BoundaryGraph> level;
  level.emplace(tree_canonical(BoundaryGraph::with_leaf_boundary(3, {{0, 1}, {1, 2}})),
                BoundaryGraph::with_leaf_boundary(3, {{0, 1}, {1, 2}}));
  for (int m = 3; m < n; ++m) {
    std::map<std::string, BoundaryGraph> next;
    for (const auto& [code, g] : level)
      for (Vertex x = 0; x < g.size(); ++x) {
        auto grown = add_pendant(g, x).graph;
        next.try_emplace(tree_canonical(grown), std::move(grown));
      }
    level = std::move(next);
  }
  std::vector<BoundaryGraph> out;
  for (auto& [code, g] : level) out.push_back(std::move(g));
  return out;
}

/// Plain undirected graph on <= 8 vertices as adjacency bitmasks.
struct SmallGraph {
  int n = 0;
  std::vector<std::uint8_t> adj;

  int degree(int v) const { return __builtin_popcount(adj[static_cast<std::size_t>(v)]); }
  bool edge(int a, int b) const { return (adj[static_cast<std::size_t>(a)] >> b) & 1; }
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (edge(a, b)) out.push_back({a, b});
    return out;
  }
};

/// Canonical bitstring: permutations restricted to degree-sorted classes.
inline std::string small_graph_canonical(const SmallGraph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) order[static_cast<std::size_t>(v)] = v;
  auto key = [&](int v) {
    std::vector<int> nb;
    for (int w = 0; w < g.n; ++w)
      if (g.edge(v, w)) nb.push_back(g.degree(w));
    std::sort(nb.begin(), nb.end());
    return std::make_pair(g.degree(v), nb);
  };
  std::vector<std::pair<int, std::vector<int>>> keys;
  for (int v = 0; v < g.n; ++v) keys.push_back(key(v));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });
  std::vector<std::pair<int, int>> classes;
  for (int i = 0; i < g.n;) {
    int j = i;
    while (j < g.n && keys[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] ==
                          keys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
      ++j;
    classes.push_back({i, j});
    i = j;
  }
  std::string best;
  std::function<void(std::size_t)> rec = [&](std::size_t ci) {
    if (ci == classes.size()) {
      std::string c;
      for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
          c += g.edge(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]) ? '1' : '0';
      if (best.empty() || c < best) best = std::move(c);
      return;
    }
    auto [b, e] = classes[ci];
    std::sort(order.begin() + b, order.begin() + e);
    do rec(ci + 1);
    while (std::next_permutation(order.begin() + b, order.begin() + e));
  };
  rec(0);
  std::string head;
  for (int v : order) head += static_cast<char>('0' + g.degree(v));
  std::sort(head.begin(), head.end());
  return std::to_string(g.n) + ":" + head + ":" + best;
}

/// All connected graphs on n vertices up to isomorphism (n <= 7), canonical order.
/// Counts: 1 1 2 6 21 112 853 for n = 1..7.
inline std::vector<SmallGraph> enumerate_connected_graphs(int n) {
  if (n < 1 || n > 7)
    throw ValidationError(ValidationKind::bad_parameter, "enumerate_connected_graphs needs 1 <= n <= 7");
  std::map<std::string, SmallGraph> level;
  SmallGraph one{1, {0}};
  level.emplace(small_graph_canonical(one), one);
  for (int m = 1; m < n; ++m) {
    std::map<std::string, SmallGraph> next;
    for (const auto& [code, g] : level) {
      for (unsigned mask = 1; mask < (1u << m); ++mask) {
        SmallGraph h{m + 1, g.adj};
        h.adj.push_back(static_cast<std::uint8_t>(mask));
        for (int v = 0; v < m; ++v)
          if ((mask >> v) & 1) h.adj[static_cast<std::size_t>(v)] |= static_cast<std::uint8_t>(1u << m);
        next.try_emplace(small_graph_canonical(h), std::move(h));
      }
    }
    level = std::move(next);
  }
  std::vector<SmallGraph> out;
  for (auto& [code, g] : level) out.push_back(std::move(g));
  return out;
}

/// Connected graphs on n vertices whose degree-1 boundary passes strict validation.
/// With `cyclic_only`, trees are dropped.
inline std::vector<BoundaryGraph> enumerate_boundary_graphs(int n, bool cyclic_only) {
  std::vector<BoundaryGraph> out;
  for (const auto& s : enumerate_connected_graphs(n)) {
    auto edges = s.edges();
    if (cyclic_only && static_cast<int>(edges.size()) < n) continue;
    try {
      out.push_back(BoundaryGraph::with_leaf_boundary(n, std::move(edges)));
    } catch (const ValidationError&) {
    }
  }
  return out;
}

}  // namespace steklov
