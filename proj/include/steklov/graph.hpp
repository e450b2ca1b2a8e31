#pragma once

// Boundary-marked finite graphs and the surgeries used on them: branches,
// wedge sums, doubling, pendant addition and leaf removal.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"

namespace steklov {

using Vertex = int;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// strict enforces every standing assumption; relaxed waives the
/// boundary-boundary edge and interior connectivity rules (two-vertex base cases).
enum class Validation { strict, relaxed };

class BoundaryGraph {
 public:
  BoundaryGraph() = default;

  static BoundaryGraph build(int n, std::vector<Edge> edges, std::vector<Vertex> boundary,
                             Validation mode = Validation::strict) {
    BoundaryGraph g;
    g.init(n, std::move(edges), mode);
    std::vector<char> mark(static_cast<std::size_t>(n), 0);
    for (Vertex b : boundary) {
      if (b < 0 || b >= n)
        throw ValidationError(ValidationKind::out_of_range, "boundary id " + std::to_string(b));
      mark[static_cast<std::size_t>(b)] = 1;
    }
    g.set_boundary(std::move(mark));
    g.validate();
    return g;
  }

  /// Boundary = degree-1 vertices (the tree convention, also the default for general graphs).
  static BoundaryGraph with_leaf_boundary(int n, std::vector<Edge> edges,
                                          Validation mode = Validation::strict) {
    BoundaryGraph g;
    g.init(n, std::move(edges), mode);
    std::vector<char> mark(static_cast<std::size_t>(n), 0);
    for (Vertex v = 0; v < n; ++v) mark[static_cast<std::size_t>(v)] = g.degree(v) == 1;
    g.set_boundary(std::move(mark));
    g.validate();
    return g;
  }

  int size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Undirected edges with u < v, sorted.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  bool has_edge(Vertex a, Vertex b) const {
    const auto& nb = adj_[static_cast<std::size_t>(a)];
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  bool is_boundary(Vertex v) const { return is_boundary_[static_cast<std::size_t>(v)] != 0; }
  /// Ascending ids.
  const std::vector<Vertex>& boundary() const noexcept { return boundary_; }
  const std::vector<Vertex>& interior() const noexcept { return interior_; }
  /// Position of v inside boundary(), or -1.
  int boundary_index(Vertex v) const { return boundary_pos_[static_cast<std::size_t>(v)]; }

  bool is_tree() const noexcept { return static_cast<int>(edges_.size()) == n_ - 1; }
  bool boundary_is_leaves() const {
    for (Vertex v = 0; v < n_; ++v)
      if (is_boundary(v) != (degree(v) == 1)) return false;
    return true;
  }
  Validation validation() const noexcept { return mode_; }

  friend bool operator==(const BoundaryGraph& a, const BoundaryGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.boundary_ == b.boundary_;
  }

 private:
  void init(int n, std::vector<Edge> edges, Validation mode) {
    if (n < 2) throw ValidationError(ValidationKind::bad_parameter, "need at least 2 vertices");
    n_ = n;
    mode_ = mode;
    for (auto& e : edges) {
      if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
        throw ValidationError(ValidationKind::out_of_range,
                              "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      if (e.u == e.v) throw ValidationError(ValidationKind::self_loop, "at " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
      throw ValidationError(ValidationKind::multi_edge,
                            "(" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    edges_ = std::move(edges);
    adj_.assign(static_cast<std::size_t>(n), {});
    for (const auto& e : edges_) {
      adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  void set_boundary(std::vector<char> mark) {
    is_boundary_ = std::move(mark);
    boundary_.clear();
    interior_.clear();
    boundary_pos_.assign(static_cast<std::size_t>(n_), -1);
    for (Vertex v = 0; v < n_; ++v) {
      if (is_boundary(v)) {
        boundary_pos_[static_cast<std::size_t>(v)] = static_cast<int>(boundary_.size());
        boundary_.push_back(v);
      } else {
        interior_.push_back(v);
      }
    }
  }

  // Size of the component of `start` restricted to vertices with keep[v].
  int reach(Vertex start, const std::vector<char>& keep) const {
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<Vertex> stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    int count = 0;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      ++count;
      for (Vertex w : neighbors(v)) {
        auto wi = static_cast<std::size_t>(w);
        if (keep[wi] && !seen[wi]) {
          seen[wi] = 1;
          stack.push_back(w);
        }
      }
    }
    return count;
  }

  void validate() const {
    if (boundary_.empty()) throw ValidationError(ValidationKind::empty_boundary);
    const std::vector<char> all(static_cast<std::size_t>(n_), 1);
    if (reach(0, all) != n_) throw ValidationError(ValidationKind::disconnected);
    if (mode_ == Validation::relaxed) return;
    for (const auto& e : edges_)
      if (is_boundary(e.u) && is_boundary(e.v))
        throw ValidationError(ValidationKind::boundary_boundary_edge,
                              "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    if (interior_.empty()) throw ValidationError(ValidationKind::disconnected_interior, "empty");
    std::vector<char> inner(static_cast<std::size_t>(n_), 0);
    for (Vertex v : interior_) inner[static_cast<std::size_t>(v)] = 1;
    if (reach(interior_.front(), inner) != static_cast<int>(interior_.size()))
      throw ValidationError(ValidationKind::disconnected_interior);
  }

  int n_ = 0;
  Validation mode_ = Validation::strict;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<char> is_boundary_;
  std::vector<Vertex> boundary_;
  std::vector<Vertex> interior_;
  std::vector<int> boundary_pos_;
};

// ---------------------------------------------------------------------------
// Queries

inline std::vector<Vertex> leaves(const BoundaryGraph& g) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.size(); ++v)
    if (g.degree(v) == 1) out.push_back(v);
  return out;
}

inline void require_vertex(const BoundaryGraph& g, Vertex v) {
  if (v < 0 || v >= g.size())
    throw ValidationError(ValidationKind::out_of_range, "vertex " + std::to_string(v));
}

inline void require_tree(const BoundaryGraph& g) {
  if (!g.is_tree()) throw ValidationError(ValidationKind::not_a_tree);
}

/// BFS hop distances from `source`.
inline std::vector<int> distances(const BoundaryGraph& g, Vertex source) {
  require_vertex(g, source);
  std::vector<int> dist(static_cast<std::size_t>(g.size()), -1);
  std::queue<Vertex> q;
  dist[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop();
    for (Vertex w : g.neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

inline int eccentricity(const BoundaryGraph& g, Vertex v) {
  auto d = distances(g, v);
  return *std::max_element(d.begin(), d.end());
}

inline int diameter(const BoundaryGraph& g) {
  int best = 0;
  for (Vertex v = 0; v < g.size(); ++v) best = std::max(best, eccentricity(g, v));
  return best;
}

/// Vertices of minimum eccentricity, ascending.
inline std::vector<Vertex> centers(const BoundaryGraph& g) {
  std::vector<int> ecc(static_cast<std::size_t>(g.size()));
  for (Vertex v = 0; v < g.size(); ++v) ecc[static_cast<std::size_t>(v)] = eccentricity(g, v);
  const int r = *std::min_element(ecc.begin(), ecc.end());
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.size(); ++v)
    if (ecc[static_cast<std::size_t>(v)] == r) out.push_back(v);
  return out;
}

/// Path x_0..x_L realizing the diameter of a tree (lexicographically first endpoints).
inline std::vector<Vertex> diametral_path(const BoundaryGraph& g) {
  require_tree(g);
  Vertex a = 0;
  int best = -1;
  for (Vertex v = 0; v < g.size(); ++v) {
    int e = eccentricity(g, v);
    if (e > best) {
      best = e;
      a = v;
    }
  }
  auto da = distances(g, a);
  Vertex b = static_cast<Vertex>(std::max_element(da.begin(), da.end()) - da.begin());
  // Walk back from b towards a along decreasing distance.
  std::vector<Vertex> path{b};
  Vertex cur = b;
  while (cur != a) {
    for (Vertex w : g.neighbors(cur)) {
      if (da[static_cast<std::size_t>(w)] == da[static_cast<std::size_t>(cur)] - 1) {
        cur = w;
        break;
      }
    }
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

/// Component of `start` once edge (cut_a, cut_b) is deleted, ascending.
inline std::vector<Vertex> component_without_edge(const BoundaryGraph& g, Vertex start,
                                                  Vertex cut_a, Vertex cut_b) {
  std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
  std::vector<Vertex> stack{start}, out;
  seen[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (Vertex w : g.neighbors(v)) {
      if ((v == cut_a && w == cut_b) || (v == cut_b && w == cut_a)) continue;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Subgraph extraction

/// A graph cut out of a parent, with local ids assigned in ascending parent-id order.
struct Subgraph {
  BoundaryGraph graph;
  std::vector<Vertex> to_parent;  // local -> parent

  Vertex local(Vertex parent_id) const {
    auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent_id);
    if (it == to_parent.end() || *it != parent_id)
      throw ValidationError(ValidationKind::out_of_range,
                            "vertex " + std::to_string(parent_id) + " not in subgraph");
    return static_cast<Vertex>(it - to_parent.begin());
  }
};

namespace detail {

// Strict when legal, relaxed otherwise (only for two-vertex pieces or relaxed inputs).
inline BoundaryGraph build_leaf_boundary_best(int n, std::vector<Edge> edges, bool allow_relaxed) {
  if (n == 2 || allow_relaxed) {
    try {
      return BoundaryGraph::with_leaf_boundary(n, edges, Validation::strict);
    } catch (const ValidationError& e) {
      if (e.kind() != ValidationKind::boundary_boundary_edge &&
          e.kind() != ValidationKind::disconnected_interior)
        throw;
      return BoundaryGraph::with_leaf_boundary(n, std::move(edges), Validation::relaxed);
    }
  }
  return BoundaryGraph::with_leaf_boundary(n, std::move(edges), Validation::strict);
}

inline BoundaryGraph build_best(int n, std::vector<Edge> edges, std::vector<Vertex> boundary,
                                bool allow_relaxed) {
  if (n == 2 || allow_relaxed) {
    try {
      return BoundaryGraph::build(n, edges, boundary, Validation::strict);
    } catch (const ValidationError& e) {
      if (e.kind() != ValidationKind::boundary_boundary_edge &&
          e.kind() != ValidationKind::disconnected_interior)
        throw;
      return BoundaryGraph::build(n, std::move(edges), std::move(boundary), Validation::relaxed);
    }
  }
  return BoundaryGraph::build(n, std::move(edges), std::move(boundary), Validation::strict);
}

}  // namespace detail

/// Induced tree on `vertices` (ascending parent ids) with boundary recomputed as leaves.
inline Subgraph induced_tree(const BoundaryGraph& g, std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  Subgraph sub;
  sub.to_parent = vertices;
  std::vector<int> local(static_cast<std::size_t>(g.size()), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    local[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    int a = local[static_cast<std::size_t>(e.u)];
    int b = local[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) edges.push_back({a, b});
  }
  sub.graph = detail::build_leaf_boundary_best(static_cast<int>(vertices.size()), std::move(edges),
                                               true);
  return sub;
}

// ---------------------------------------------------------------------------
// Branches

/// H is the component containing `from` after deleting edge (from,to); the
/// closure H(from,to) also contains `to` and the edge (from,to).
struct BranchRef {
  BoundaryGraph parent;
  Vertex from = 0;
  Vertex to = 0;
  bool closed = false;
  std::vector<Vertex> vertices;     // parent ids, ascending
  std::optional<Subgraph> subtree;  // absent for a one-vertex open branch
};

inline BranchRef branch(const BoundaryGraph& g, Vertex u, Vertex v, bool closed) {
  require_tree(g);
  require_vertex(g, u);
  require_vertex(g, v);
  if (!g.has_edge(u, v))
    throw ValidationError(ValidationKind::edge_absent,
                          "(" + std::to_string(u) + "," + std::to_string(v) + ")");
  BranchRef ref;
  ref.parent = g;
  ref.from = u;
  ref.to = v;
  ref.closed = closed;
  ref.vertices = component_without_edge(g, u, u, v);
  if (closed) {
    ref.vertices.insert(std::upper_bound(ref.vertices.begin(), ref.vertices.end(), v), v);
  }
  if (ref.vertices.size() >= 2) ref.subtree = induced_tree(g, ref.vertices);
  return ref;
}

/// Closed branches H_j(x_j, x) for each neighbor x_j of x, in neighbor order.
inline std::vector<BranchRef> closed_branches_at(const BoundaryGraph& g, Vertex x) {
  std::vector<BranchRef> out;
  for (Vertex nb : g.neighbors(x)) out.push_back(branch(g, nb, x, true));
  return out;
}

// ---------------------------------------------------------------------------
// Surgeries

struct WedgeResult {
  BoundaryGraph graph;
  std::vector<Vertex> map_first;   // g1 id -> result id
  std::vector<Vertex> map_second;  // g2 id -> result id
  Vertex glued = 0;
};

/// Disjoint union with x1 ~ x2 identified. Trees get leaves as boundary; other
/// graphs keep the union of boundaries, minus the glued vertex once it has degree > 1.
inline WedgeResult wedge_sum(const BoundaryGraph& g1, Vertex x1, const BoundaryGraph& g2,
                             Vertex x2) {
  require_vertex(g1, x1);
  require_vertex(g2, x2);
  WedgeResult r;
  const int n1 = g1.size();
  r.map_first.resize(static_cast<std::size_t>(n1));
  std::iota(r.map_first.begin(), r.map_first.end(), 0);
  r.map_second.resize(static_cast<std::size_t>(g2.size()));
  Vertex next = n1;
  for (Vertex v = 0; v < g2.size(); ++v)
    r.map_second[static_cast<std::size_t>(v)] = (v == x2) ? x1 : next++;
  r.glued = x1;

  std::vector<Edge> edges = g1.edges();
  for (const auto& e : g2.edges())
    edges.push_back({r.map_second[static_cast<std::size_t>(e.u)],
                     r.map_second[static_cast<std::size_t>(e.v)]});
  const bool relaxed_in =
      g1.validation() == Validation::relaxed || g2.validation() == Validation::relaxed;

  if (g1.is_tree() && g2.is_tree()) {
    r.graph = detail::build_leaf_boundary_best(next, std::move(edges), relaxed_in);
    return r;
  }
  std::vector<Vertex> boundary;
  for (Vertex b : g1.boundary()) boundary.push_back(b);
  for (Vertex b : g2.boundary()) boundary.push_back(r.map_second[static_cast<std::size_t>(b)]);
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  if (g1.degree(x1) + g2.degree(x2) > 1)
    boundary.erase(std::remove(boundary.begin(), boundary.end(), x1), boundary.end());
  r.graph = detail::build_best(next, std::move(edges), std::move(boundary), relaxed_in);
  return r;
}

struct DoublingResult {
  BoundaryGraph graph;
  Vertex wedge = 0;
  std::vector<Vertex> copy_map;  // original id -> id of its image in the second copy
};

/// (G)^2_x: g glued to an isomorphic copy of itself at x. Original ids are kept.
inline DoublingResult double_at(const BoundaryGraph& g, Vertex x) {
  auto w = wedge_sum(g, x, g, x);
  return {std::move(w.graph), w.glued, std::move(w.map_second)};
}

struct PendantResult {
  BoundaryGraph graph;
  Vertex attached_to = 0;
  Vertex pendant = 0;  // always the old vertex count
};

/// Attach a new degree-1 vertex to x. Boundary is recomputed as leaves for
/// trees and for graphs whose boundary already is the leaf set.
inline PendantResult add_pendant(const BoundaryGraph& g, Vertex x) {
  require_vertex(g, x);
  std::vector<Edge> edges = g.edges();
  const Vertex y = g.size();
  edges.push_back({x, y});
  const bool relaxed_in = g.validation() == Validation::relaxed;
  if (g.is_tree() || g.boundary_is_leaves())
    return {detail::build_leaf_boundary_best(y + 1, std::move(edges), relaxed_in), x, y};
  std::vector<Vertex> boundary = g.boundary();
  boundary.erase(std::remove(boundary.begin(), boundary.end(), x), boundary.end());
  boundary.push_back(y);
  return {detail::build_best(y + 1, std::move(edges), std::move(boundary), relaxed_in), x, y};
}

struct RemovalResult {
  BoundaryGraph graph;
  std::vector<Vertex> old_to_new;  // -1 for the removed vertex
};

/// Delete leaf v; ids above v shift down by one.
inline RemovalResult remove_leaf(const BoundaryGraph& g, Vertex v) {
  require_vertex(g, v);
  if (g.degree(v) != 1)
    throw ValidationError(ValidationKind::illegal_removal, std::to_string(v) + " is not a leaf");
  if (g.size() < 4)
    throw ValidationError(ValidationKind::illegal_removal, "result would have fewer than 3 vertices");
  RemovalResult r;
  r.old_to_new.resize(static_cast<std::size_t>(g.size()));
  for (Vertex u = 0; u < g.size(); ++u)
    r.old_to_new[static_cast<std::size_t>(u)] = u < v ? u : (u == v ? -1 : u - 1);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (e.u == v || e.v == v) continue;
    edges.push_back({r.old_to_new[static_cast<std::size_t>(e.u)],
                     r.old_to_new[static_cast<std::size_t>(e.v)]});
  }
  const int n = g.size() - 1;
  try {
    if (g.is_tree() || g.boundary_is_leaves()) {
      r.graph = BoundaryGraph::with_leaf_boundary(n, std::move(edges));
    } else {
      std::vector<Vertex> boundary;
      for (Vertex b : g.boundary())
        if (b != v) boundary.push_back(r.old_to_new[static_cast<std::size_t>(b)]);
      r.graph = BoundaryGraph::build(n, std::move(edges), std::move(boundary));
    }
  } catch (const ValidationError& e) {
    throw ValidationError(ValidationKind::illegal_removal, e.what());
  }
  return r;
}

}  // namespace steklov
