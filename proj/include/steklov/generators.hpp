#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "steklov/graph.hpp"

namespace steklov {

/// splitmix64 step; derives well-spread sub-seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Path v0 - v1 - ... - vL with L edges.
inline BoundaryGraph path_tree(int edges) {
  if (edges < 2) throw ValidationError(ValidationKind::bad_parameter, "path needs L >= 2");
  std::vector<Edge> e;
  for (int i = 0; i < edges; ++i) e.push_back({i, i + 1});
  return BoundaryGraph::with_leaf_boundary(edges + 1, std::move(e));
}

/// Center 0 with leaves 1..k.
inline BoundaryGraph star(int k) {
  if (k < 3) throw ValidationError(ValidationKind::bad_parameter, "star needs k >= 3");
  std::vector<Edge> e;
  for (int i = 1; i <= k; ++i) e.push_back({0, i});
  return BoundaryGraph::with_leaf_boundary(k + 1, std::move(e));
}

/// Center 0 with one path of each given length (all >= 1) attached.
inline BoundaryGraph spider(const std::vector<int>& arms) {
  if (arms.size() < 2) throw ValidationError(ValidationKind::bad_parameter, "spider needs 2 arms");
  std::vector<Edge> e;
  int next = 1;
  for (int len : arms) {
    if (len < 1) throw ValidationError(ValidationKind::bad_parameter, "arm length must be >= 1");
    int prev = 0;
    for (int i = 0; i < len; ++i) {
      e.push_back({prev, next});
      prev = next++;
    }
  }
  return BoundaryGraph::with_leaf_boundary(next, std::move(e));
}

namespace detail {

// Grow `children` new vertices below each frontier vertex, `depth` levels deep. BFS ids.
inline void grow_regular(std::vector<Edge>& edges, int& next, std::vector<Vertex> frontier,
                         int children, int depth) {
  for (int level = 0; level < depth; ++level) {
    std::vector<Vertex> nf;
    for (Vertex p : frontier) {
      for (int c = 0; c < children; ++c) {
        edges.push_back({p, next});
        nf.push_back(next++);
      }
    }
    frontier = std::move(nf);
  }
}

}  // namespace detail

/// Radius-R ball around a vertex of the (D+1)-regular tree. Center is vertex 0.
inline BoundaryGraph ball(int D, int R) {
  if (D < 2 || R < 1) throw ValidationError(ValidationKind::bad_parameter, "ball needs D>=2, R>=1");
  std::vector<Edge> e;
  int next = 1;
  std::vector<Vertex> first;
  for (int c = 0; c <= D; ++c) {
    e.push_back({0, next});
    first.push_back(next++);
  }
  detail::grow_regular(e, next, first, D, R - 1);
  return BoundaryGraph::with_leaf_boundary(next, std::move(e));
}

/// Union of two radius-R balls with adjacent centers z=0 ~ w=1 in the (D+1)-regular tree.
inline BoundaryGraph double_ball(int D, int R) {
  if (D < 2 || R < 1)
    throw ValidationError(ValidationKind::bad_parameter, "double_ball needs D>=2, R>=1");
  std::vector<Edge> e{{0, 1}};
  int next = 2;
  std::vector<Vertex> fz, fw;
  for (int c = 0; c < D; ++c) {
    e.push_back({0, next});
    fz.push_back(next++);
  }
  for (int c = 0; c < D; ++c) {
    e.push_back({1, next});
    fw.push_back(next++);
  }
  detail::grow_regular(e, next, fz, D, R - 1);
  detail::grow_regular(e, next, fw, D, R - 1);
  return BoundaryGraph::with_leaf_boundary(next, std::move(e));
}

/// Decode a Pruefer sequence over labels 0..n-1 (length n-2) into tree edges.
inline std::vector<Edge> pruefer_decode(const std::vector<int>& seq) {
  const int n = static_cast<int>(seq.size()) + 2;
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int s : seq) {
    if (s < 0 || s >= n) throw ValidationError(ValidationKind::out_of_range, "pruefer label");
    ++degree[static_cast<std::size_t>(s)];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> leafq;
  for (int v = 0; v < n; ++v)
    if (degree[static_cast<std::size_t>(v)] == 1) leafq.push(v);
  std::vector<Edge> edges;
  for (int s : seq) {
    int leaf = leafq.top();
    leafq.pop();
    edges.push_back({leaf, s});
    if (--degree[static_cast<std::size_t>(s)] == 1) leafq.push(s);
  }
  int a = leafq.top();
  leafq.pop();
  int b = leafq.top();
  edges.push_back({a, b});
  return edges;
}

/// Uniform labeled tree on n vertices, deterministic in `seed`.
inline BoundaryGraph random_tree(int n, std::uint64_t seed) {
  if (n < 3) throw ValidationError(ValidationKind::bad_parameter, "random_tree needs n >= 3");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, n - 1);
  std::vector<int> seq(static_cast<std::size_t>(n - 2));
  for (auto& s : seq) s = label(rng);
  return BoundaryGraph::with_leaf_boundary(n, pruefer_decode(seq));
}

/// Random connected graph: a random tree plus `extra` random chords, retried
/// until the degree-1 boundary satisfies the standing assumptions.
inline BoundaryGraph random_graph_with_cycles(int n, int extra, std::uint64_t seed) {
  if (n < 4 || extra < 1)
    throw ValidationError(ValidationKind::bad_parameter, "random graph needs n>=4, extra>=1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, n - 1);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<int> seq(static_cast<std::size_t>(n - 2));
    for (auto& s : seq) s = label(rng);
    auto edges = pruefer_decode(seq);
    std::set<std::pair<int, int>> have;
    for (auto& e : edges) have.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    int added = 0;
    for (int tries = 0; added < extra && tries < 100; ++tries) {
      int a = label(rng), b = label(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (have.insert({a, b}).second) {
        edges.push_back({a, b});
        ++added;
      }
    }
    if (added < extra) continue;
    try {
      return BoundaryGraph::with_leaf_boundary(n, std::move(edges));
    } catch (const ValidationError&) {
      // no leaves left, or interior broken: draw again
    }
  }
  throw ValidationError(ValidationKind::bad_parameter, "could not draw a valid graph");
}

/// Cycle C_m (m even, m >= 4) with one pendant at vertex 0 and one at vertex m/2.
inline BoundaryGraph cycle_with_opposite_pendants(int m) {
  if (m < 4 || m % 2 != 0)
    throw ValidationError(ValidationKind::bad_parameter, "cycle length must be even and >= 4");
  std::vector<Edge> e;
  for (int i = 0; i < m; ++i) e.push_back({i, (i + 1) % m});
  e.push_back({0, m});
  e.push_back({m / 2, m + 1});
  return BoundaryGraph::with_leaf_boundary(m + 2, std::move(e));
}

/// Parse the inline generator language `family:params`:
///   path:L  star:k  ball:D,R  double_ball:D,R  random:n,seed  spider:a,b,...
///   cycle_pendants:m
inline BoundaryGraph generate(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string family(spec.substr(0, colon));
  std::vector<long long> args;
  if (colon != std::string_view::npos) {
    std::string rest(spec.substr(colon + 1));
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        args.push_back(v);
      } catch (const std::exception&) {
        throw ValidationError(ValidationKind::bad_parameter, "bad generator argument '" + tok + "'");
      }
    }
  }
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw ValidationError(ValidationKind::bad_parameter,
                            family + " expects " + std::to_string(k) + " argument(s)");
  };
  if (family == "path") return need(1), path_tree(static_cast<int>(args[0]));
  if (family == "star") return need(1), star(static_cast<int>(args[0]));
  if (family == "ball") return need(2), ball(static_cast<int>(args[0]), static_cast<int>(args[1]));
  if (family == "double_ball")
    return need(2), double_ball(static_cast<int>(args[0]), static_cast<int>(args[1]));
  if (family == "random")
    return need(2), random_tree(static_cast<int>(args[0]), static_cast<std::uint64_t>(args[1]));
  if (family == "cycle_pendants") return need(1), cycle_with_opposite_pendants(static_cast<int>(args[0]));
  if (family == "spider") {
    std::vector<int> arms(args.begin(), args.end());
    return spider(arms);
  }
  throw ValidationError(ValidationKind::bad_parameter, "unknown generator family '" + family + "'");
}

}  // namespace steklov
