#pragma once

// Isomorphism-invariant encodings and a small subgraph (injective homomorphism) search.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "steklov/graph.hpp"

namespace steklov {

namespace detail {

inline std::string ahu_encode(const BoundaryGraph& g, Vertex v, Vertex parent) {
  std::vector<std::string> kids;
  for (Vertex w : g.neighbors(v))
    if (w != parent) kids.push_back(ahu_encode(g, w, v));
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  for (auto& k : kids) out += k;
  out += ")";
  return out;
}

}  // namespace detail

/// AHU level-sequence encoding rooted at `root`.
inline std::string rooted_tree_code(const BoundaryGraph& g, Vertex root) {
  require_tree(g);
  require_vertex(g, root);
  return detail::ahu_encode(g, root, -1);
}

/// Canonical code of a free tree: minimum rooted code over its centers.
inline std::string tree_canonical(const BoundaryGraph& g) {
  require_tree(g);
  std::string best;
  for (Vertex c : centers(g)) {
    auto code = detail::ahu_encode(g, c, -1);
    if (best.empty() || code < best) best = code;
  }
  return best;
}

inline bool trees_isomorphic(const BoundaryGraph& a, const BoundaryGraph& b) {
  return a.size() == b.size() && tree_canonical(a) == tree_canonical(b);
}

/// Canonical adjacency code of a small general graph (boundary marks included).
/// Vertices are ordered by a refined degree invariant, then every ordering
/// within each invariant class is tried; cost grows like the product of class
/// factorials, so this is meant for n <= 10.
inline std::string graph_canonical(const BoundaryGraph& g) {
  const int n = g.size();
  if (n > 12) throw ValidationError(ValidationKind::bad_parameter, "graph_canonical limited to n <= 12");
  struct Key {
    int boundary;
    int degree;
    std::vector<int> nb;
    auto operator<=>(const Key&) const = default;
  };
  std::vector<Key> key(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    auto& k = key[static_cast<std::size_t>(v)];
    k.boundary = g.is_boundary(v) ? 0 : 1;
    k.degree = g.degree(v);
    for (Vertex w : g.neighbors(v)) k.nb.push_back(g.degree(w));
    std::sort(k.nb.begin(), k.nb.end());
  }
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)];
  });
  std::vector<std::pair<int, int>> classes;  // [begin, end) in `order`
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && key[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] ==
                        key[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
      ++j;
    classes.push_back({i, j});
    i = j;
  }
  std::string header;
  for (auto [b, e] : classes) {
    const auto& k = key[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])];
    header += std::to_string(e - b) + ":" + std::to_string(k.boundary) + "," +
              std::to_string(k.degree) + ";";
  }
  std::string best;
  auto code_of = [&](const std::vector<Vertex>& ord) {
    std::string c(static_cast<std::size_t>(n * (n - 1) / 2), '0');
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        c[idx++] = g.has_edge(ord[static_cast<std::size_t>(i)], ord[static_cast<std::size_t>(j)]) ? '1' : '0';
    return c;
  };
  std::function<void(std::size_t)> recurse = [&](std::size_t ci) {
    if (ci == classes.size()) {
      auto c = code_of(order);
      if (best.empty() || c < best) best = std::move(c);
      return;
    }
    auto [b, e] = classes[ci];
    std::sort(order.begin() + b, order.begin() + e);
    do {
      recurse(ci + 1);
    } while (std::next_permutation(order.begin() + b, order.begin() + e));
  };
  recurse(0);
  return std::to_string(n) + "|" + header + "|" + best;
}

/// True when `pattern` admits an injective homomorphism into `host`.
inline bool contains_subgraph(const BoundaryGraph& host, const BoundaryGraph& pattern,
                              int max_host_vertices = 20) {
  if (host.size() > max_host_vertices)
    throw ValidationError(ValidationKind::bad_parameter, "subgraph search limited to " +
                                                             std::to_string(max_host_vertices) +
                                                             " host vertices");
  const int np = pattern.size();
  const int nh = host.size();
  if (np > nh || pattern.edge_count() > host.edge_count()) return false;

  // BFS order from a max-degree vertex: every later vertex has an earlier neighbor.
  Vertex start = 0;
  for (Vertex v = 1; v < np; ++v)
    if (pattern.degree(v) > pattern.degree(start)) start = v;
  std::vector<Vertex> order;
  std::vector<char> seen(static_cast<std::size_t>(np), 0);
  order.push_back(start);
  seen[static_cast<std::size_t>(start)] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Vertex w : pattern.neighbors(order[i]))
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        order.push_back(w);
      }

  std::vector<Vertex> image(static_cast<std::size_t>(np), -1);
  std::vector<char> used(static_cast<std::size_t>(nh), 0);
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == order.size()) return true;
    const Vertex p = order[i];
    for (Vertex h = 0; h < nh; ++h) {
      if (used[static_cast<std::size_t>(h)] || host.degree(h) < pattern.degree(p)) continue;
      bool ok = true;
      for (Vertex q : pattern.neighbors(p)) {
        Vertex hq = image[static_cast<std::size_t>(q)];
        if (hq >= 0 && !host.has_edge(h, hq)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      image[static_cast<std::size_t>(p)] = h;
      used[static_cast<std::size_t>(h)] = 1;
      if (place(i + 1)) return true;
      image[static_cast<std::size_t>(p)] = -1;
      used[static_cast<std::size_t>(h)] = 0;
    }
    return false;
  };
  return place(0);
}

}  // namespace steklov
