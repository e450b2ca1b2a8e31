#pragma once

// Laplacian, harmonic extension, the Dirichlet-to-Neumann matrix and its
// Steklov spectrum.
//
// Edges are stored undirected. The Rayleigh quotient sums each undirected
// edge once over the boundary mass; the directed-edge form carries a factor
// 2 in numerator and denominator that cancels. The normal derivative at a
// boundary vertex is taken as the full Laplacian there, which coincides with
// the interior-neighbor sum whenever no edge joins two boundary vertices.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "steklov/graph.hpp"
#include "steklov/linalg.hpp"
#include "steklov/tolerances.hpp"

namespace steklov {

inline std::vector<double> laplacian_apply(const BoundaryGraph& g, std::span<const double> f) {
  if (static_cast<int>(f.size()) != g.size())
    throw ValidationError(ValidationKind::bad_parameter, "function size != vertex count");
  std::vector<double> out(f.size(), 0.0);
  for (Vertex v = 0; v < g.size(); ++v) {
    double s = 0.0;
    for (Vertex w : g.neighbors(v)) s += f[static_cast<std::size_t>(v)] - f[static_cast<std::size_t>(w)];
    out[static_cast<std::size_t>(v)] = s;
  }
  return out;
}

/// Outward normal derivative on the boundary, in boundary() order.
inline std::vector<double> normal_derivative(const BoundaryGraph& g, std::span<const double> f) {
  auto lap = laplacian_apply(g, f);
  std::vector<double> out;
  out.reserve(g.boundary().size());
  for (Vertex b : g.boundary()) out.push_back(lap[static_cast<std::size_t>(b)]);
  return out;
}

enum class InteriorSolver { dense, tree };

namespace detail {

// Interior block of the Laplacian and its coupling to the boundary.
struct InteriorSystem {
  std::vector<int> interior_pos;  // vertex -> position in interior(), or -1
  Matrix block;                   // L_{Omega,Omega}
  Matrix coupling;                // -L_{Omega,boundary}: 1 where an interior vertex touches a boundary vertex

  explicit InteriorSystem(const BoundaryGraph& g)
      : interior_pos(static_cast<std::size_t>(g.size()), -1),
        block(g.interior().size(), g.interior().size()),
        coupling(g.interior().size(), g.boundary().size()) {
    for (std::size_t i = 0; i < g.interior().size(); ++i)
      interior_pos[static_cast<std::size_t>(g.interior()[i])] = static_cast<int>(i);
    for (std::size_t i = 0; i < g.interior().size(); ++i) {
      const Vertex v = g.interior()[i];
      block(i, i) = g.degree(v);
      for (Vertex w : g.neighbors(v)) {
        if (int j = interior_pos[static_cast<std::size_t>(w)]; j >= 0)
          block(i, static_cast<std::size_t>(j)) = -1.0;
        else
          coupling(i, static_cast<std::size_t>(g.boundary_index(w))) = 1.0;
      }
    }
  }
};

// Leaf-peeling elimination for a forest-structured interior block.
inline std::vector<double> solve_interior_tree(const BoundaryGraph& g, const InteriorSystem& sys,
                                               std::vector<double> rhs) {
  const auto& interior = g.interior();
  const std::size_t m = interior.size();
  std::size_t inner_edges = 0;
  for (const auto& e : g.edges())
    if (sys.interior_pos[static_cast<std::size_t>(e.u)] >= 0 &&
        sys.interior_pos[static_cast<std::size_t>(e.v)] >= 0)
      ++inner_edges;

  std::vector<int> parent(m, -2);
  std::vector<std::size_t> order;
  order.reserve(m);
  std::size_t components = 0;
  for (std::size_t root = 0; root < m; ++root) {
    if (parent[root] != -2) continue;
    ++components;
    parent[root] = -1;
    order.push_back(root);
    for (std::size_t head = order.size() - 1; head < order.size(); ++head) {
      const std::size_t u = order[head];
      for (Vertex w : g.neighbors(interior[u])) {
        const int j = sys.interior_pos[static_cast<std::size_t>(w)];
        if (j < 0 || j == parent[u]) continue;
        if (parent[static_cast<std::size_t>(j)] == -2) {
          parent[static_cast<std::size_t>(j)] = static_cast<int>(u);
          order.push_back(static_cast<std::size_t>(j));
        }
      }
    }
  }
  if (inner_edges + components != m)
    throw ValidationError(ValidationKind::not_a_tree, "interior block is not forest-structured");

  std::vector<double> diag(m);
  for (std::size_t i = 0; i < m; ++i) diag[i] = sys.block(i, i);
  for (std::size_t k = m; k-- > 0;) {
    const std::size_t u = order[k];
    if (parent[u] >= 0) {
      const auto p = static_cast<std::size_t>(parent[u]);
      diag[p] -= 1.0 / diag[u];
      rhs[p] += rhs[u] / diag[u];
    }
  }
  std::vector<double> x(m);
  for (std::size_t u : order) {
    const double up = parent[u] >= 0 ? x[static_cast<std::size_t>(parent[u])] : 0.0;
    x[u] = (rhs[u] + up) / diag[u];
  }
  return x;
}

}  // namespace detail

/// Harmonic extension of boundary data (given in boundary() order) to all vertices.
inline std::vector<double> harmonic_extension(const BoundaryGraph& g,
                                              std::span<const double> f_boundary,
                                              InteriorSolver solver = InteriorSolver::dense) {
  if (f_boundary.size() != g.boundary().size())
    throw ValidationError(ValidationKind::bad_parameter, "boundary data size != |boundary|");
  std::vector<double> full(static_cast<std::size_t>(g.size()), 0.0);
  for (std::size_t i = 0; i < g.boundary().size(); ++i)
    full[static_cast<std::size_t>(g.boundary()[i])] = f_boundary[i];
  if (g.interior().empty()) return full;
  detail::InteriorSystem sys(g);
  auto rhs = sys.coupling.apply(f_boundary);
  std::vector<double> inner = solver == InteriorSolver::dense
                                  ? Cholesky(sys.block).solve(rhs)
                                  : detail::solve_interior_tree(g, sys, std::move(rhs));
  for (std::size_t i = 0; i < g.interior().size(); ++i)
    full[static_cast<std::size_t>(g.interior()[i])] = inner[i];
  return full;
}

struct DtnMatrix {
  std::vector<Vertex> boundary;  // row/column order
  Matrix values;
};

/// Schur complement of the interior block in the full Laplacian.
inline DtnMatrix dtn_matrix(const BoundaryGraph& g) {
  const std::size_t b = g.boundary().size();
  DtnMatrix out{g.boundary(), Matrix(b, b)};
  for (std::size_t i = 0; i < b; ++i) {
    const Vertex v = g.boundary()[i];
    out.values(i, i) = g.degree(v);
    for (Vertex w : g.neighbors(v))
      if (int j = g.boundary_index(w); j >= 0) out.values(i, static_cast<std::size_t>(j)) = -1.0;
  }
  if (g.interior().empty()) return out;
  detail::InteriorSystem sys(g);
  // L_BB - L_BO L_OO^{-1} L_OB with L_OB = -coupling.
  const Matrix solved = Cholesky(sys.block).solve(sys.coupling);
  const Matrix correction = sys.coupling.transpose() * solved;
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) out.values(i, j) -= correction(i, j);
  return out;
}

struct Spectrum {
  std::vector<Vertex> boundary;
  std::vector<double> eigenvalues;  // ascending, lambda_1 first
  Matrix vectors;                   // |boundary| x |boundary|, orthonormal columns
  Matrix extensions;                // n x |boundary|, harmonic extension of each column
  int sweeps = 0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  /// 1-based, matching lambda_1 <= lambda_2 <= ...
  double lambda(std::size_t k) const { return eigenvalues.at(k - 1); }
  std::vector<double> boundary_vector(std::size_t k) const { return vectors.column(k - 1); }
  std::vector<double> extension(std::size_t k) const { return extensions.column(k - 1); }

  /// Indices [first, last] (1-based, inclusive) of the eigenvalues within `tol` of lambda_k.
  std::pair<std::size_t, std::size_t> group_of(std::size_t k, double tol = 1e-8) const {
    std::size_t lo = k, hi = k;
    while (lo > 1 && std::abs(lambda(lo - 1) - lambda(k)) <= tol) --lo;
    while (hi < size() && std::abs(lambda(hi + 1) - lambda(k)) <= tol) ++hi;
    return {lo, hi};
  }
};

/// Full eigendecomposition of the DtN matrix with harmonic extensions.
/// For strict-mode graphs lambda_max <= 1 is enforced as an invariant.
inline Spectrum steklov_spectrum(const BoundaryGraph& g, const Tolerances& tol = {}) {
  const DtnMatrix dtn = dtn_matrix(g);
  auto eig = jacobi_eigen(dtn.values, tol.eigen_offdiag, tol.eigen_max_sweeps);
  Spectrum s;
  s.boundary = dtn.boundary;
  s.eigenvalues = std::move(eig.values);
  s.vectors = std::move(eig.vectors);
  s.sweeps = eig.sweeps;
  const std::size_t b = s.boundary.size();
  s.extensions = Matrix(static_cast<std::size_t>(g.size()), b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t k = 0; k < b; ++k)
      s.extensions(static_cast<std::size_t>(s.boundary[i]), k) = s.vectors(i, k);
  if (!g.interior().empty()) {
    detail::InteriorSystem sys(g);
    const Matrix inner = Cholesky(sys.block).solve(sys.coupling * s.vectors);
    for (std::size_t i = 0; i < g.interior().size(); ++i)
      for (std::size_t k = 0; k < b; ++k)
        s.extensions(static_cast<std::size_t>(g.interior()[i]), k) = inner(i, k);
  }
  if (g.validation() == Validation::strict && s.eigenvalues.back() > 1.0 + 1e-9)
    throw InternalFault("Steklov spectrum exceeds 1 on a strict graph: " +
                        std::to_string(s.eigenvalues.back()));
  return s;
}

inline double lambda2(const BoundaryGraph& g, const Tolerances& tol = {}) {
  if (g.boundary().size() < 2)
    throw ValidationError(ValidationKind::bad_parameter, "lambda_2 needs at least two boundary vertices");
  return steklov_spectrum(g, tol).lambda(2);
}

/// max_k ||Lambda v_k - lambda_k v_k||_inf
inline double max_eigen_residual(const DtnMatrix& dtn, const Spectrum& s) {
  double worst = 0.0;
  for (std::size_t k = 1; k <= s.size(); ++k) {
    auto v = s.boundary_vector(k);
    auto av = dtn.values.apply(v);
    for (std::size_t i = 0; i < v.size(); ++i)
      worst = std::max(worst, std::abs(av[i] - s.lambda(k) * v[i]));
  }
  return worst;
}

/// Undirected edge energy over boundary mass.
inline double rayleigh(const BoundaryGraph& g, std::span<const double> f) {
  if (static_cast<int>(f.size()) != g.size())
    throw ValidationError(ValidationKind::bad_parameter, "function size != vertex count");
  double num = 0.0;
  for (const auto& e : g.edges()) {
    const double d = f[static_cast<std::size_t>(e.u)] - f[static_cast<std::size_t>(e.v)];
    num += d * d;
  }
  double den = 0.0;
  for (Vertex b : g.boundary()) den += f[static_cast<std::size_t>(b)] * f[static_cast<std::size_t>(b)];
  if (den == 0.0)
    throw ValidationError(ValidationKind::bad_parameter, "function vanishes on the boundary");
  return num / den;
}

/// Largest violation of: Laplacian zero on the interior, normal derivative = lambda f on the boundary.
inline double check_steklov_system(const BoundaryGraph& g, std::span<const double> f, double lambda) {
  auto lap = laplacian_apply(g, f);
  double worst = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    const double r = g.is_boundary(v) ? lap[i] - lambda * f[i] : lap[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// |1/2 sum_directed (f(x)-f(y))^2 - (Lf, f)_V|.
inline double green_identity_gap(const BoundaryGraph& g, std::span<const double> f) {
  double directed = 0.0;
  for (const auto& e : g.edges()) {
    const double d = f[static_cast<std::size_t>(e.u)] - f[static_cast<std::size_t>(e.v)];
    directed += 2.0 * d * d;
  }
  auto lap = laplacian_apply(g, f);
  return std::abs(0.5 * directed - dot(lap, f));
}

inline nlohmann::json spectrum_to_json(const Spectrum& s, bool with_vectors = false) {
  nlohmann::json j;
  j["boundary"] = s.boundary;
  j["eigenvalues"] = s.eigenvalues;
  if (s.size() >= 2) j["lambda2"] = s.lambda(2);
  if (with_vectors) {
    nlohmann::json cols = nlohmann::json::array();
    for (std::size_t k = 1; k <= s.size(); ++k) cols.push_back(s.boundary_vector(k));
    j["eigenvectors"] = std::move(cols);
  }
  return j;
}

}  // namespace steklov
