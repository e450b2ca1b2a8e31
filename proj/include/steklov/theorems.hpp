#pragma once

// Checkers for the monotonicity, doubling, partition, diameter and
// degree/diameter results on trees. Each returns a CheckReport with margins;
// "discrepancies" are findings that never flip the pass flag.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steklov/canonical.hpp"
#include "steklov/flows.hpp"
#include "steklov/generators.hpp"
#include "steklov/graph.hpp"
#include "steklov/graph_io.hpp"
#include "steklov/spectral.hpp"
#include "steklov/tolerances.hpp"

namespace steklov {

struct CheckReport {
  std::string check;
  nlohmann::json instance = nlohmann::json::object();
  bool pass = true;
  std::map<std::string, double> margins;
  std::vector<std::string> anomalies;      // assertion-class failures and oddities
  std::vector<std::string> discrepancies;  // reported findings, not failures
  nlohmann::json details = nlohmann::json::object();
  Tolerances tolerances;

  void fail(std::string why) {
    pass = false;
    anomalies.push_back(std::move(why));
  }

  nlohmann::json to_json() const {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : margins) {
      if (std::isfinite(v)) m[k] = v;
      else m[k] = v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    }
    return {{"check", check},        {"instance", instance},
            {"pass", pass},          {"margins", m},
            {"anomalies", anomalies}, {"discrepancies", discrepancies},
            {"details", details},    {"tolerances", tolerances.to_json()}};
  }
};

inline nlohmann::json describe_instance(const BoundaryGraph& g) {
  return {{"n", g.size()}, {"graph6", to_graph6(g)}, {"boundary", g.boundary()}};
}

namespace detail {

inline CheckReport make_report(std::string name, const BoundaryGraph& g, const Tolerances& tol) {
  CheckReport r;
  r.check = std::move(name);
  r.instance = describe_instance(g);
  r.tolerances = tol;
  return r;
}

// Bisection sigma of every closed branch F_j(z_j, z), evaluated at z inside the branch.
inline std::vector<double> branch_sigmas(const BoundaryGraph& g, Vertex z, const Tolerances& tol) {
  std::vector<double> out;
  for (const auto& br : closed_branches_at(g, z)) {
    const auto& sub = *br.subtree;
    out.push_back(sigma(sub.graph, sub.local(z), SigmaMethod::bisection, tol).sigma);
  }
  return out;
}

inline double max_abs_at(const Spectrum& s, std::size_t k, Vertex v) {
  auto [lo, hi] = s.group_of(k, 1e-8);
  double worst = 0.0;
  for (std::size_t j = lo; j <= hi; ++j)
    worst = std::max(worst, std::abs(s.extension(j)[static_cast<std::size_t>(v)]));
  return worst;
}

}  // namespace detail

/// lambda_2 never decreases along a random chain of leaf deletions down to three vertices.
inline CheckReport check_monotonicity_chain(const BoundaryGraph& g, std::uint64_t seed,
                                            const Tolerances& tol = {}) {
  require_tree(g);
  auto r = detail::make_report("monotonicity", g, tol);
  r.instance["seed"] = seed;
  std::mt19937_64 rng(seed);
  BoundaryGraph cur = g;
  std::vector<Vertex> label(static_cast<std::size_t>(g.size()));
  for (Vertex v = 0; v < g.size(); ++v) label[static_cast<std::size_t>(v)] = v;
  std::vector<double> chain{lambda2(cur, tol)};
  std::vector<Vertex> removed;
  double worst = std::numeric_limits<double>::infinity();
  while (cur.size() > 3) {
    auto cand = leaves(cur);
    std::shuffle(cand.begin(), cand.end(), rng);
    bool moved = false;
    for (Vertex v : cand) {
      try {
        auto rem = remove_leaf(cur, v);
        removed.push_back(label[static_cast<std::size_t>(v)]);
        std::vector<Vertex> next_label(static_cast<std::size_t>(rem.graph.size()));
        for (Vertex u = 0; u < cur.size(); ++u)
          if (rem.old_to_new[static_cast<std::size_t>(u)] >= 0)
            next_label[static_cast<std::size_t>(rem.old_to_new[static_cast<std::size_t>(u)])] =
                label[static_cast<std::size_t>(u)];
        label = std::move(next_label);
        cur = std::move(rem.graph);
        moved = true;
        break;
      } catch (const ValidationError& e) {
        if (e.kind() != ValidationKind::illegal_removal) throw;
      }
    }
    if (!moved) {
      r.anomalies.push_back("no legal leaf removal at n = " + std::to_string(cur.size()));
      break;
    }
    const double lam = lambda2(cur, tol);
    const double gap = lam - chain.back();  // smaller graph minus larger graph
    worst = std::min(worst, gap);
    if (gap < -tol.assertion)
      r.fail("lambda_2 decreased from " + std::to_string(chain.back()) + " to " + std::to_string(lam) +
             " after removing vertex " + std::to_string(removed.back()));
    chain.push_back(lam);
  }
  r.margins["worst_gap"] = worst;
  r.details["chain"] = chain;
  r.details["removed"] = removed;
  return r;
}

/// lambda_2 of the doubling at x is the least branch sigma, and
/// every lambda_2 eigenfunction of the doubling vanishes at the wedge vertex.
inline CheckReport check_doubling(const BoundaryGraph& g, Vertex x, const Tolerances& tol = {}) {
  require_tree(g);
  require_vertex(g, x);
  auto r = detail::make_report("doubling", g, tol);
  r.instance["x"] = x;
  const auto dbl = double_at(g, x);
  const auto spec = steklov_spectrum(dbl.graph, tol);
  const double lam = spec.lambda(2);
  const auto sig = detail::branch_sigmas(g, x, tol);
  const double mn = *std::min_element(sig.begin(), sig.end());
  const double gap = std::abs(lam - mn);
  const double at_wedge = detail::max_abs_at(spec, 2, dbl.wedge);
  r.margins["identity_gap"] = gap;
  r.margins["wedge_value"] = at_wedge;
  r.details["lambda2_double"] = lam;
  r.details["branch_sigma"] = sig;
  if (gap >= tol.equality) r.fail("lambda_2 of the doubling differs from the least branch sigma");
  if (at_wedge >= tol.vanishing) r.fail("a lambda_2 eigenfunction of the doubling is nonzero at the wedge");
  return r;
}

/// Boundary x: sigma (doubling) agrees with bisection and lies
/// strictly below lambda_2(G). Interior x: lambda_2 of the doubling <= lambda_2(G).
inline CheckReport check_partition(const BoundaryGraph& g, Vertex x, const Tolerances& tol = {}) {
  require_tree(g);
  require_vertex(g, x);
  auto r = detail::make_report("partition", g, tol);
  r.instance["x"] = x;
  const double lam_g = lambda2(g, tol);
  r.details["lambda2"] = lam_g;
  if (g.is_boundary(x)) {
    const auto sd = sigma(g, x, SigmaMethod::doubling, tol);
    const auto sb = sigma(g, x, SigmaMethod::bisection, tol);
    r.details["sigma_doubling"] = sd.sigma;
    r.details["sigma_bisection"] = sb.sigma;
    r.margins["method_gap"] = std::abs(sd.sigma - sb.sigma);
    r.margins["strict_gap"] = lam_g - sd.sigma;
    r.margins["scaled_strict_gap"] = (lam_g - sd.sigma) / lam_g;
    if (std::abs(sd.sigma - sb.sigma) >= tol.agreement) r.fail("doubling and bisection sigma disagree");
    if (!(sd.sigma < lam_g - 1e-9 * lam_g)) r.fail("sigma(G,x) is not strictly below lambda_2(G)");
  } else {
    const double lam_d = lambda2(double_at(g, x).graph, tol);
    r.details["lambda2_double"] = lam_d;
    r.margins["interior_gap"] = lam_g - lam_d;
    if (lam_d > lam_g + tol.assertion) r.fail("lambda_2 of the doubling exceeds lambda_2(G)");
  }
  return r;
}

struct DiameterDecomposition {
  std::vector<Vertex> path;              // x_0 .. x_L
  std::vector<int> relative_boundary;    // n_k for k = 1..L-1 (index k-1)
  std::vector<std::vector<Vertex>> hanging;  // vertex set of G_k, k = 1..L-1
  int length = 0;

  /// H_2 = G_{L/2}; empty unless L is even.
  std::vector<Vertex> middle() const {
    if (length % 2 != 0) return {};
    return hanging[static_cast<std::size_t>(length / 2 - 1)];
  }
};

inline DiameterDecomposition diameter_decomposition(const BoundaryGraph& g) {
  require_tree(g);
  DiameterDecomposition d;
  d.path = diametral_path(g);
  d.length = static_cast<int>(d.path.size()) - 1;
  for (int k = 1; k < d.length; ++k) {
    const Vertex xk = d.path[static_cast<std::size_t>(k)];
    const Vertex prev = d.path[static_cast<std::size_t>(k - 1)];
    const Vertex next = d.path[static_cast<std::size_t>(k + 1)];
    std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
    seen[static_cast<std::size_t>(prev)] = seen[static_cast<std::size_t>(next)] = 1;
    seen[static_cast<std::size_t>(xk)] = 1;
    std::vector<Vertex> comp{xk};
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (Vertex w : g.neighbors(comp[i]))
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    int nk = 0;
    for (Vertex v : comp) nk += g.is_boundary(v) ? 1 : 0;
    d.relative_boundary.push_back(nk);
    d.hanging.push_back(std::move(comp));
  }
  return d;
}

/// lambda_2 <= 2/L always; on equality the structural conditions (L even,
/// n_k = 0 off the middle, lambda_2 of the doubled middle piece >= 2/L) are
/// evaluated and any disagreement is reported as a discrepancy.
inline CheckReport check_diameter(const BoundaryGraph& g, const Tolerances& tol = {}) {
  require_tree(g);
  auto r = detail::make_report("diameter", g, tol);
  const double lam = lambda2(g, tol);
  const int L = diameter(g);
  const double bound = 2.0 / L;
  r.details["lambda2"] = lam;
  r.details["diameter"] = L;
  r.margins["bound_gap"] = bound - lam;
  if (lam > bound + 1e-9) r.fail("lambda_2 exceeds 2/L");
  const bool equality = std::abs(lam - bound) < tol.equality;
  r.details["equality"] = equality;
  if (!equality) return r;

  const auto dec = diameter_decomposition(g);
  r.details["path"] = dec.path;
  r.details["n_k"] = dec.relative_boundary;
  const bool even = L % 2 == 0;
  bool off_middle_empty = true;
  for (int k = 1; k < L; ++k)
    if ((!even || k != L / 2) && dec.relative_boundary[static_cast<std::size_t>(k - 1)] != 0)
      off_middle_empty = false;
  bool middle_ok = true;
  if (even) {
    const auto mid = dec.middle();
    if (mid.size() >= 2) {
      const auto sub = induced_tree(g, mid);
      const Vertex c = sub.local(dec.path[static_cast<std::size_t>(L / 2)]);
      const double lam_mid = lambda2(double_at(sub.graph, c).graph, tol);
      r.details["lambda2_doubled_middle"] = lam_mid;
      middle_ok = lam_mid >= bound - tol.equality;
    }
  }
  r.details["conditions"] = {{"L_even", even}, {"n_k_zero_off_middle", off_middle_empty},
                             {"middle_doubling_ok", middle_ok}};
  if (!even)
    r.discrepancies.push_back("lambda_2 = 2/L = " + std::to_string(bound) + " with odd L = " +
                              std::to_string(L) + ", but the characterization requires L even");
  if (!off_middle_empty)
    r.discrepancies.push_back("equality holds although some n_k off the middle is nonzero");
  if (!middle_ok)
    r.discrepancies.push_back("equality holds although the doubled middle piece has lambda_2 < 2/L");
  return r;
}

namespace detail {

inline double ipow(int base, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace detail

/// Lower bound for degree <= D+1 and diameter <= L, with the rigidity cases:
/// even L equality iff g contains the doubled closed center branch of ball(D, L/2);
/// odd L equality iff g is double_ball(D, (L-1)/2).
inline CheckReport check_degree_diameter(const BoundaryGraph& g, int D, int L,
                                         const Tolerances& tol = {}) {
  require_tree(g);
  if (D < 2 || L < 2) throw ValidationError(ValidationKind::bad_parameter, "need D >= 2 and L >= 2");
  int maxdeg = 0;
  for (Vertex v = 0; v < g.size(); ++v) maxdeg = std::max(maxdeg, g.degree(v));
  if (maxdeg > D + 1)
    throw ValidationError(ValidationKind::bad_parameter, "max degree " + std::to_string(maxdeg) +
                                                             " exceeds D+1 = " + std::to_string(D + 1));
  if (diameter(g) > L)
    throw ValidationError(ValidationKind::bad_parameter, "diameter exceeds L = " + std::to_string(L));
  auto r = detail::make_report("degree_diameter", g, tol);
  r.instance["D"] = D;
  r.instance["L"] = L;
  const double lam = lambda2(g, tol);
  const bool even = L % 2 == 0;
  const int R = even ? L / 2 : (L - 1) / 2;
  const double bound = even ? (D - 1) / (detail::ipow(D, R) - 1)
                            : 2.0 * (D - 1) / (detail::ipow(D, R + 1) + detail::ipow(D, R) - 2);
  r.details["lambda2"] = lam;
  r.details["bound"] = bound;
  r.margins["bound_gap"] = lam - bound;
  if (lam < bound - 1e-9) r.fail("lambda_2 below the degree/diameter lower bound");
  const bool equality = std::abs(lam - bound) < tol.equality;
  r.details["equality"] = equality;

  if (even) {
    if (g.size() > 20) {
      r.anomalies.push_back("rigidity structure not checked above 20 vertices");
      return r;
    }
    const auto b = ball(D, R);
    const auto h1 = branch(b, 1, 0, true);
    const auto pattern = double_at(h1.subtree->graph, h1.subtree->local(0)).graph;
    const bool contains = contains_subgraph(g, pattern);
    r.details["contains_rigid_piece"] = contains;
    if (equality && !contains) r.fail("equality without the doubled center branch");
    if (!equality && contains) r.fail("contains the doubled center branch but the bound is strict");
  } else {
    const bool iso = trees_isomorphic(g, double_ball(D, R));
    r.details["isomorphic_to_double_ball"] = iso;
    if (equality && !iso) r.fail("equality but not isomorphic to double_ball");
    if (!equality && iso) r.fail("isomorphic to double_ball but the bound is strict");
  }
  return r;
}

/// The branch dichotomy at z: one branch strictly below lambda_2 forces all others
/// strictly above; the minimum equals lambda_2 iff at least two branches attain it,
/// and then every lambda_2 eigenfunction vanishes at z.
inline CheckReport check_branch_dichotomy(const BoundaryGraph& g, Vertex z, const Tolerances& tol = {}) {
  require_tree(g);
  require_vertex(g, z);
  if (g.degree(z) < 2) throw ValidationError(ValidationKind::bad_parameter, "z must have degree >= 2");
  auto r = detail::make_report("branch_dichotomy", g, tol);
  r.instance["z"] = z;
  const auto spec = steklov_spectrum(g, tol);
  const double lam = spec.lambda(2);
  const auto sig = detail::branch_sigmas(g, z, tol);
  int below = 0, at = 0, above = 0;
  for (double s : sig) {
    if (s < lam - tol.equality) ++below;
    else if (s > lam + tol.equality) ++above;
    else ++at;
  }
  r.details["lambda2"] = lam;
  r.details["branch_sigma"] = sig;
  r.details["counts"] = {{"below", below}, {"at", at}, {"above", above}};
  auto sorted = sig;
  std::sort(sorted.begin(), sorted.end());
  r.margins["min_minus_lambda2"] = sorted[0] - lam;
  r.margins["second_minus_lambda2"] = sorted[1] - lam;
  if (below > 0 && (below > 1 || at > 0))
    r.fail("a branch sigma below lambda_2 but another is not above it");
  if (below == 0 && at == 1) r.fail("the minimum attains lambda_2 on a single branch");
  if (below == 0 && at == 0) r.fail("every branch sigma exceeds lambda_2");
  if (at >= 2) {
    const double vz = detail::max_abs_at(spec, 2, z);
    r.margins["eigenfunction_at_z"] = vz;
    if (vz >= tol.vanishing) r.fail("lambda_2 eigenfunction nonzero at z although two branches attain it");
  }
  return r;
}

}  // namespace steklov
