#pragma once

// lambda-flows to a vertex x on a tree: all Steklov equations hold except at x.
// solve_flow uses the transfer recursion (linear time); solve_flow_dense is an
// independent square solve used as its oracle. sigma(G, x) is the first lambda
// whose flow vanishes at x, computed either as lambda_2 of the doubling at x
// or by bisection on the recursion.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steklov/graph.hpp"
#include "steklov/linalg.hpp"
#include "steklov/spectral.hpp"
#include "steklov/tolerances.hpp"

namespace steklov {

struct LambdaFlow {
  double lambda = 0.0;
  Vertex target = 0;
  Vertex norm_vertex = 0;  // f(norm_vertex) == 1
  std::vector<double> values;

  double at(Vertex v) const { return values.at(static_cast<std::size_t>(v)); }
};

/// Value at the parent (c) and inflow (d) of a subtree whose root carries value 1.
struct TransferPair {
  double c = 1.0;
  double d = 0.0;
};

inline TransferPair leaf_transfer(double lambda) { return {1.0 - lambda, lambda}; }

/// Smallest boundary vertex other than x.
inline Vertex default_norm_vertex(const BoundaryGraph& g, Vertex x) {
  for (Vertex b : g.boundary())
    if (b != x) return b;
  throw ValidationError(ValidationKind::bad_parameter, "no boundary vertex other than the target");
}

namespace detail {

struct Rooted {
  std::vector<Vertex> parent;  // -1 at the root
  std::vector<Vertex> order;   // BFS order from the root
  std::vector<int> depth;
};

inline Rooted root_tree(const BoundaryGraph& g, Vertex root) {
  Rooted r;
  const auto n = static_cast<std::size_t>(g.size());
  r.parent.assign(n, -2);
  r.depth.assign(n, 0);
  r.parent[static_cast<std::size_t>(root)] = -1;
  r.order.push_back(root);
  for (std::size_t head = 0; head < r.order.size(); ++head) {
    const Vertex u = r.order[head];
    for (Vertex w : g.neighbors(u)) {
      if (r.parent[static_cast<std::size_t>(w)] == -2) {
        r.parent[static_cast<std::size_t>(w)] = u;
        r.depth[static_cast<std::size_t>(w)] = r.depth[static_cast<std::size_t>(u)] + 1;
        r.order.push_back(w);
      }
    }
  }
  return r;
}

inline void check_flow_args(const BoundaryGraph& g, Vertex x, double lambda, Vertex w) {
  require_vertex(g, x);
  require_vertex(g, w);
  if (!(lambda >= 0.0)) throw ValidationError(ValidationKind::bad_parameter, "lambda must be >= 0");
  if (w == x || !g.is_boundary(w))
    throw ValidationError(ValidationKind::bad_parameter,
                          "normalization vertex must be a boundary vertex other than the target");
}

inline LambdaFlow normalized(std::vector<double> values, double lambda, Vertex x, Vertex w) {
  const double fw = values[static_cast<std::size_t>(w)];
  const double scale = max_abs(values);
  if (!(std::abs(fw) > 1e-14 * scale))
    throw ResonanceError(ResonanceError::Kind::normalization_failure, lambda, fw,
                         "flow vanishes at the normalization vertex " + std::to_string(w));
  for (auto& v : values) v /= fw;
  return {lambda, x, w, std::move(values)};
}

}  // namespace detail

/// Transfer recursion rooted at x. Post-order: a subtree with root value 1
/// reports c (value at its parent) and d (flow into the parent); a node's d is
/// the sum of its children's d_k / c_k plus lambda if it is a boundary vertex.
/// Pre-order back-substitution sets f(child) = f(parent) / c_child.
inline LambdaFlow solve_flow(const BoundaryGraph& g, Vertex x, double lambda,
                             std::optional<Vertex> norm_vertex = std::nullopt,
                             const Tolerances& tol = {}) {
  require_tree(g);
  const Vertex w = norm_vertex.value_or(default_norm_vertex(g, x));
  detail::check_flow_args(g, x, lambda, w);
  const auto rooted = detail::root_tree(g, x);
  const auto n = static_cast<std::size_t>(g.size());

  std::vector<TransferPair> pair(n);
  auto require_nonresonant = [&](Vertex k) {
    const double c = pair[static_cast<std::size_t>(k)].c;
    if (std::abs(c) < tol.resonance)
      throw ResonanceError(ResonanceError::Kind::resonant_lambda, lambda, c,
                           "resonant lambda " + std::to_string(lambda) + ": transfer coefficient at vertex " +
                               std::to_string(k) + " vanishes");
  };
  // Only the lone child of a leaf target may carry c = 0.
  const bool single_child = g.degree(x) == 1;

  for (std::size_t i = n; i-- > 1;) {
    const Vertex u = rooted.order[i];
    double inflow = g.is_boundary(u) ? lambda : 0.0;
    for (Vertex k : g.neighbors(u)) {
      if (k == rooted.parent[static_cast<std::size_t>(u)]) continue;
      require_nonresonant(k);
      inflow += pair[static_cast<std::size_t>(k)].d / pair[static_cast<std::size_t>(k)].c;
    }
    pair[static_cast<std::size_t>(u)] = {1.0 - inflow, inflow};
  }

  std::vector<double> f(n, 0.0);
  if (single_child) {
    const Vertex x1 = g.neighbors(x)[0];
    f[static_cast<std::size_t>(x1)] = 1.0;
    f[static_cast<std::size_t>(x)] = pair[static_cast<std::size_t>(x1)].c;
  } else {
    f[static_cast<std::size_t>(x)] = 1.0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const Vertex u = rooted.order[i];
    const Vertex p = rooted.parent[static_cast<std::size_t>(u)];
    if (single_child && p == x) continue;
    require_nonresonant(u);
    f[static_cast<std::size_t>(u)] = f[static_cast<std::size_t>(p)] / pair[static_cast<std::size_t>(u)].c;
  }
  return detail::normalized(std::move(f), lambda, x, w);
}

/// Square solve of {harmonic on interior minus x, Steklov on boundary minus x, f(w)=1}.
/// Works on any graph; throws ResonanceError(near_singular) with the smallest singular value.
inline LambdaFlow solve_flow_dense(const BoundaryGraph& g, Vertex x, double lambda,
                                   std::optional<Vertex> norm_vertex = std::nullopt) {
  const Vertex w = norm_vertex.value_or(default_norm_vertex(g, x));
  detail::check_flow_args(g, x, lambda, w);
  const auto n = static_cast<std::size_t>(g.size());
  Matrix a(n, n);
  std::vector<double> rhs(n, 0.0);
  std::size_t row = 0;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (v == x) continue;
    a(row, static_cast<std::size_t>(v)) = g.degree(v) - (g.is_boundary(v) ? lambda : 0.0);
    for (Vertex u : g.neighbors(v)) a(row, static_cast<std::size_t>(u)) -= 1.0;
    ++row;
  }
  a(row, static_cast<std::size_t>(w)) = 1.0;
  rhs[row] = 1.0;

  PivotedLu lu(a);
  auto fail = [&] {
    const double smin = smallest_singular_value(a);
    throw ResonanceError(ResonanceError::Kind::near_singular, lambda, smin,
                         "near-singular flow system at lambda " + std::to_string(lambda) +
                             " (smallest singular value " + std::to_string(smin) + ")");
  };
  if (lu.min_pivot_ratio() < 1e-12) fail();
  auto f = lu.solve(rhs);
  auto af = a.apply(f);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(af[i] - rhs[i]));
  if (res > 1e-9 * std::max(1.0, max_abs(f))) fail();
  return {lambda, x, w, std::move(f)};
}

/// Largest violation of the defining equations away from the target.
inline double verify_flow(const BoundaryGraph& g, const LambdaFlow& flow) {
  auto lap = laplacian_apply(g, flow.values);
  double worst = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (v == flow.target) continue;
    const auto i = static_cast<std::size_t>(v);
    const double r = g.is_boundary(v) ? lap[i] - flow.lambda * flow.values[i] : lap[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// Largest violation over tree edges (u,v), u farther from the target, of
///   f(u) - f(v) = lambda * (sum of f over boundary vertices behind u).
inline double edge_flow_residual(const BoundaryGraph& g, const LambdaFlow& flow) {
  require_tree(g);
  const auto rooted = detail::root_tree(g, flow.target);
  std::vector<double> behind(static_cast<std::size_t>(g.size()), 0.0);
  double worst = 0.0;
  for (std::size_t i = rooted.order.size(); i-- > 1;) {
    const Vertex u = rooted.order[i];
    const Vertex p = rooted.parent[static_cast<std::size_t>(u)];
    if (g.is_boundary(u)) behind[static_cast<std::size_t>(u)] += flow.at(u);
    const double grad = flow.at(u) - flow.at(p);
    worst = std::max(worst, std::abs(grad - flow.lambda * behind[static_cast<std::size_t>(u)]));
    behind[static_cast<std::size_t>(p)] += behind[static_cast<std::size_t>(u)];
  }
  return worst;
}

struct PositivityDetail {
  bool gradients_positive = false;  // f(y) - f(z) > 0 whenever y is farther from x than z
  bool boundary_positive = false;   // f > 0 on boundary minus x
  double min_gradient = 0.0;
  double min_boundary = 0.0;
};

/// Both sides of the gradient/boundary positivity equivalence (lambda > 0).
/// A disagreement larger than 1e-9 in either margin is a fault.
inline PositivityDetail positivity_detail(const BoundaryGraph& g, const LambdaFlow& flow) {
  require_tree(g);
  if (!(flow.lambda > 0.0))
    throw ValidationError(ValidationKind::bad_parameter, "positivity check needs lambda > 0");
  const auto rooted = detail::root_tree(g, flow.target);
  PositivityDetail d;
  d.min_gradient = std::numeric_limits<double>::infinity();
  d.min_boundary = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rooted.order.size(); ++i) {
    const Vertex u = rooted.order[i];
    d.min_gradient = std::min(d.min_gradient, flow.at(u) - flow.at(rooted.parent[static_cast<std::size_t>(u)]));
  }
  for (Vertex b : g.boundary())
    if (b != flow.target) d.min_boundary = std::min(d.min_boundary, flow.at(b));
  d.gradients_positive = d.min_gradient > 0.0;
  d.boundary_positive = d.min_boundary > 0.0;
  if (d.gradients_positive != d.boundary_positive &&
      std::min(std::abs(d.min_gradient), std::abs(d.min_boundary)) > 1e-9)
    throw InternalFault("gradient positivity and boundary positivity disagree (min gradient " +
                        std::to_string(d.min_gradient) + ", min boundary " +
                        std::to_string(d.min_boundary) + ")");
  return d;
}

inline bool positivity_check(const BoundaryGraph& g, const LambdaFlow& flow) {
  auto d = positivity_detail(g, flow);
  return d.gradients_positive && d.boundary_positive;
}

enum class SigmaMethod { doubling, bisection };

inline std::string to_string(SigmaMethod m) { return m == SigmaMethod::doubling ? "doubling" : "bisection"; }

struct SigmaResult {
  double sigma = 0.0;
  SigmaMethod method = SigmaMethod::doubling;
  LambdaFlow witness;
  /// Recursion bound: min of sigma over the closed branches at x's neighbor.
  /// +inf for a single edge; NaN when the doubling method is used.
  double sigma1 = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> anomalies;
};

/// |f(x)| and positivity margin of a sigma witness, both required within tol.witness.
inline bool witness_ok(const BoundaryGraph& g, const SigmaResult& r, const Tolerances& tol = {}) {
  if (!std::isfinite(r.sigma)) return false;
  if (std::abs(r.witness.at(r.witness.target)) > tol.witness) return false;
  auto d = positivity_detail(g, r.witness);
  return d.min_gradient > tol.witness && d.min_boundary > tol.witness;
}

namespace detail {

inline void require_sigma_args(const BoundaryGraph& g, Vertex x) {
  require_tree(g);
  require_vertex(g, x);
  if (!g.is_boundary(x))
    throw ValidationError(ValidationKind::bad_parameter,
                          "sigma is defined for boundary vertices; " + std::to_string(x) + " is interior");
}

inline SigmaResult sigma_doubling(const BoundaryGraph& g, Vertex x, const Tolerances& tol) {
  const auto dbl = double_at(g, x);
  const auto spec = steklov_spectrum(dbl.graph, tol);
  SigmaResult r;
  r.method = SigmaMethod::doubling;
  r.sigma = spec.lambda(2);
  const Vertex w = default_norm_vertex(g, x);
  // Eigenvector of the lambda_2 group with most mass on the original copy.
  auto [lo, hi] = spec.group_of(2, tol.multiplicity);
  std::size_t best = lo;
  double best_mass = -1.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    auto ext = spec.extension(k);
    double mass = 0.0;
    for (Vertex v = 0; v < g.size(); ++v) mass += ext[static_cast<std::size_t>(v)] * ext[static_cast<std::size_t>(v)];
    if (mass > best_mass) {
      best_mass = mass;
      best = k;
    }
  }
  auto ext = spec.extension(best);
  std::vector<double> f(ext.begin(), ext.begin() + g.size());
  try {
    r.witness = normalized(std::move(f), r.sigma, x, w);
  } catch (const ResonanceError&) {
    r.anomalies.push_back("doubling witness vanishes at the normalization vertex");
    r.witness = {r.sigma, x, w, std::vector<double>(static_cast<std::size_t>(g.size()), 0.0)};
  }
  return r;
}

inline SigmaResult sigma_bisection(const BoundaryGraph& g, Vertex x, const Tolerances& tol) {
  SigmaResult r;
  r.method = SigmaMethod::bisection;
  const Vertex w = default_norm_vertex(g, x);
  const Vertex x1 = g.neighbors(x)[0];
  if (g.size() == 2) {
    // (1 - lambda) f(z) = f(x): the flow vanishes at x exactly at lambda = 1.
    r.sigma = 1.0;
    r.sigma1 = std::numeric_limits<double>::infinity();
    r.witness = solve_flow(g, x, 1.0, w, tol);
    return r;
  }
  double sigma1 = std::numeric_limits<double>::infinity();
  for (Vertex xj : g.neighbors(x1)) {
    if (xj == x) continue;
    const auto br = branch(g, xj, x1, true);
    const auto& sub = *br.subtree;
    sigma1 = std::min(sigma1, sigma_bisection(sub.graph, sub.local(x1), tol).sigma);
  }
  r.sigma1 = sigma1;

  auto value_at_x = [&](double lambda) {
    try {
      return solve_flow(g, x, lambda, w, tol).at(x);
    } catch (const ResonanceError&) {
      return solve_flow(g, x, lambda + 1e-10, w, tol).at(x);
    }
  };
  auto bracket = [&](int points) -> std::optional<std::pair<double, double>> {
    double prev = 0.0;
    for (int i = 1; i < points; ++i) {
      const double lam = sigma1 * i / points;
      if (value_at_x(lam) <= 0.0) return std::make_pair(prev, lam);
      prev = lam;
    }
    return std::nullopt;
  };
  auto found = bracket(64);
  if (!found) found = bracket(256);
  if (!found) {
    auto dbl = sigma_doubling(g, x, tol);
    if (witness_ok(g, dbl, tol))
      throw InternalFault("sigma bisection: no sign change of f(x) on [0, sigma1) with sigma1 = " +
                          std::to_string(sigma1) + " although doubling gives " +
                          std::to_string(dbl.sigma));
    r.sigma = std::numeric_limits<double>::infinity();
    r.anomalies.push_back("no admissible lambda found; Sigma(G,x) appears empty");
    r.witness = dbl.witness;
    return r;
  }
  auto [lo, hi] = *found;
  while (hi - lo > tol.bisection) {
    const double mid = 0.5 * (lo + hi);
    if (value_at_x(mid) > 0.0) lo = mid; else hi = mid;
  }
  r.sigma = 0.5 * (lo + hi);
  try {
    r.witness = solve_flow(g, x, r.sigma, w, tol);
  } catch (const ResonanceError&) {
    r.witness = solve_flow(g, x, r.sigma + 1e-10, w, tol);
  }
  return r;
}

}  // namespace detail

inline SigmaResult sigma(const BoundaryGraph& g, Vertex x, SigmaMethod method = SigmaMethod::doubling,
                         const Tolerances& tol = {}) {
  detail::require_sigma_args(g, x);
  return method == SigmaMethod::doubling ? detail::sigma_doubling(g, x, tol)
                                         : detail::sigma_bisection(g, x, tol);
}

inline nlohmann::json flow_to_json(const BoundaryGraph& g, const LambdaFlow& flow) {
  nlohmann::json j{{"lambda", flow.lambda},
                   {"target", flow.target},
                   {"norm_vertex", flow.norm_vertex},
                   {"values", flow.values},
                   {"residual", verify_flow(g, flow)}};
  if (g.is_tree()) j["edge_flow_residual"] = edge_flow_residual(g, flow);
  return j;
}

}  // namespace steklov
