#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <catch_amalgamated.hpp>

#include "steklov/generators.hpp"
#include "steklov/spectral.hpp"

using namespace steklov;
using Catch::Matchers::WithinAbs;

namespace {

// Independent DtN: Eigen Schur complement of the full Laplacian.
Eigen::VectorXd eigen_oracle_spectrum(const BoundaryGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    L(e.u, e.u) += 1;
    L(e.v, e.v) += 1;
    L(e.u, e.v) -= 1;
    L(e.v, e.u) -= 1;
  }
  const auto& B = g.boundary();
  const auto& I = g.interior();
  const auto nb = static_cast<Eigen::Index>(B.size()), ni = static_cast<Eigen::Index>(I.size());
  Eigen::MatrixXd Lbb(nb, nb), Lbi(nb, ni), Lii(ni, ni);
  for (Eigen::Index a = 0; a < nb; ++a) {
    for (Eigen::Index b = 0; b < nb; ++b) Lbb(a, b) = L(B[a], B[b]);
    for (Eigen::Index b = 0; b < ni; ++b) Lbi(a, b) = L(B[a], I[b]);
  }
  for (Eigen::Index a = 0; a < ni; ++a)
    for (Eigen::Index b = 0; b < ni; ++b) Lii(a, b) = L(I[a], I[b]);
  Eigen::MatrixXd S = Lbb;
  if (ni > 0) S -= Lbi * Lii.ldlt().solve(Lbi.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues();
}

std::vector<BoundaryGraph> sample_graphs() {
  std::vector<BoundaryGraph> gs{path_tree(2), path_tree(7), star(3), star(8), ball(2, 2), ball(3, 2),
                                double_ball(2, 2), cycle_with_opposite_pendants(4), cycle_with_opposite_pendants(10)};
  for (std::uint64_t s = 0; s < 25; ++s) gs.push_back(random_tree(4 + static_cast<int>(s % 20), s));
  for (std::uint64_t s = 0; gs.size() < 44; ++s) {
    auto g = random_graph_with_cycles(8 + static_cast<int>(s % 6), 2, s);
    if (g.boundary().size() >= 2) gs.push_back(std::move(g));
  }
  return gs;
}

}  // namespace

TEST_CASE("laplacian examples") {
  const auto p3 = path_tree(2);
  CHECK(laplacian_apply(p3, std::vector<double>{1, 1, 1}) == std::vector<double>{0, 0, 0});
  CHECK(laplacian_apply(p3, std::vector<double>{1, 0, 0}) == std::vector<double>{1, -1, 0});
  const auto s = laplacian_apply(star(3), std::vector<double>{1, 0, 0, 0});
  CHECK(s == std::vector<double>{3, -1, -1, -1});
}

TEST_CASE("harmonic extension examples") {
  const auto p3 = path_tree(2);
  CHECK_THAT(harmonic_extension(p3, std::vector<double>{1, 0})[1], WithinAbs(0.5, 1e-15));
  const auto c = harmonic_extension(ball(2, 2), std::vector<double>(6, 2.5));
  for (double v : c) CHECK_THAT(v, WithinAbs(2.5, 1e-13));
  const auto p4 = harmonic_extension(path_tree(3), std::vector<double>{1, -1});
  CHECK_THAT(p4[1], WithinAbs(1.0 / 3, 1e-15));
  CHECK_THAT(p4[2], WithinAbs(-1.0 / 3, 1e-15));
}

TEST_CASE("tree elimination agrees with the dense interior solve") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto g = random_tree(4 + static_cast<int>(s % 25), s);
    std::vector<double> fb(g.boundary().size());
    for (auto& x : fb) x = d(rng);
    const auto a = harmonic_extension(g, fb, InteriorSolver::dense);
    const auto b = harmonic_extension(g, fb, InteriorSolver::tree);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK_THAT(a[i], WithinAbs(b[i], 1e-11));
    const auto lap = laplacian_apply(g, a);
    for (Vertex v : g.interior()) CHECK(std::abs(lap[static_cast<std::size_t>(v)]) < 1e-10 * (1 + max_abs(fb)));
  }
  CHECK_THROWS_AS(harmonic_extension(cycle_with_opposite_pendants(4), std::vector<double>{1, 0},
                                     InteriorSolver::tree),
                  ValidationError);
}

TEST_CASE("dtn examples") {
  const auto p3 = dtn_matrix(path_tree(2)).values;
  CHECK_THAT(p3(0, 0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(p3(0, 1), WithinAbs(-0.5, 1e-15));
  const auto s3 = dtn_matrix(star(3)).values;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK_THAT(s3(i, j), WithinAbs((i == j ? 1.0 : 0.0) - 1.0 / 3, 1e-15));
  const auto p4 = dtn_matrix(path_tree(3)).values;
  CHECK_THAT(p4(0, 0), WithinAbs(1.0 / 3, 1e-15));
  CHECK_THAT(p4(1, 0), WithinAbs(-1.0 / 3, 1e-15));
  // relaxed single edge: normal derivative is the Laplacian at both ends
  const auto e = dtn_matrix(BoundaryGraph::build(2, {{0, 1}}, {0, 1}, Validation::relaxed)).values;
  CHECK(e(0, 0) == 1.0);
  CHECK(e(0, 1) == -1.0);
}

TEST_CASE("dtn invariants and normal derivative identity") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  for (const auto& g : sample_graphs()) {
    const auto m = dtn_matrix(g);
    const std::size_t b = m.boundary.size();
    const double scale = m.values.frobenius();
    for (std::size_t i = 0; i < b; ++i) {
      double row = 0;
      for (std::size_t j = 0; j < b; ++j) {
        CHECK(std::abs(m.values(i, j) - m.values(j, i)) <= 1e-12 * scale);
        row += m.values(i, j);
      }
      CHECK(std::abs(row) < 1e-10);
    }
    std::vector<double> fb(b);
    for (auto& x : fb) x = d(rng);
    const auto ext = harmonic_extension(g, fb);
    const auto dn = normal_derivative(g, ext);
    const auto lf = m.values.apply(fb);
    for (std::size_t i = 0; i < b; ++i)
      CHECK_THAT(lf[i], WithinAbs(dn[i], 1e-10));
    const auto eig = jacobi_eigen(m.values);
    CHECK(eig.values.front() > -1e-10);
  }
}

TEST_CASE("spectrum matches the Eigen oracle") {
  for (const auto& g : sample_graphs()) {
    const auto s = steklov_spectrum(g);
    const auto ref = eigen_oracle_spectrum(g);
    REQUIRE(s.size() == static_cast<std::size_t>(ref.size()));
    for (std::size_t k = 0; k < s.size(); ++k)
      CHECK_THAT(s.eigenvalues[k], WithinAbs(ref(static_cast<Eigen::Index>(k)), 1e-10));
    CHECK(max_eigen_residual(dtn_matrix(g), s) < 1e-9);
    CHECK_THAT(s.lambda(1), WithinAbs(0.0, 1e-10));
    CHECK(s.lambda(2) > 0);
    CHECK(s.eigenvalues.back() <= 1 + 1e-9);
    for (std::size_t k = 1; k <= s.size(); ++k) {
      CHECK(check_steklov_system(g, s.extension(k), s.lambda(k)) < 1e-9);
      CHECK_THAT(rayleigh(g, s.extension(k)), WithinAbs(s.lambda(k), 1e-9));
    }
  }
}

TEST_CASE("first eigenvector is constant") {
  const auto s = steklov_spectrum(ball(2, 2));
  const auto v = s.boundary_vector(1);
  for (double x : v) CHECK_THAT(x, WithinAbs(1 / std::sqrt(6.0), 1e-10));
}

TEST_CASE("spectrum examples") {
  const auto p3 = steklov_spectrum(path_tree(2));
  CHECK_THAT(p3.lambda(1), WithinAbs(0, 1e-14));
  CHECK_THAT(p3.lambda(2), WithinAbs(1, 1e-14));
  for (int L = 2; L <= 12; ++L) CHECK_THAT(lambda2(path_tree(L)), WithinAbs(2.0 / L, 1e-12));
  CHECK_THAT(lambda2(ball(2, 2)), WithinAbs(1.0 / 3, 1e-12));
  const auto c = steklov_spectrum(cycle_with_opposite_pendants(4));
  CHECK(c.size() == 2);
  CHECK_THAT(c.lambda(2), WithinAbs(2.0 / 3, 1e-12));
  // interior values of the antisymmetric eigenfunction: +-1/3 at the pendant feet, 0 on the other two
  auto f = c.extension(2);
  for (auto& x : f) x /= f[4];
  CHECK_THAT(f[0], WithinAbs(1.0 / 3, 1e-12));
  CHECK_THAT(f[2], WithinAbs(-1.0 / 3, 1e-12));
  CHECK_THAT(f[1], WithinAbs(0, 1e-12));
  CHECK_THAT(f[3], WithinAbs(0, 1e-12));
}

TEST_CASE("multiplicity groups") {
  const auto s = steklov_spectrum(star(4));
  CHECK(s.group_of(2) == std::pair<std::size_t, std::size_t>{2, 4});
  CHECK(s.group_of(1) == std::pair<std::size_t, std::size_t>{1, 1});
}

TEST_CASE("rayleigh examples") {
  const auto p3 = path_tree(2);
  CHECK_THAT(rayleigh(p3, std::vector<double>{1, 0, -1}), WithinAbs(1, 1e-15));
  CHECK(rayleigh(p3, std::vector<double>{2, 2, 2}) == 0);
  CHECK_THAT(rayleigh(p3, std::vector<double>{1, 0.5, 0}), WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(rayleigh(p3, std::vector<double>{0, 1, 0}), ValidationError);
}

TEST_CASE("steklov system residual examples") {
  const auto p3 = path_tree(2);
  CHECK(check_steklov_system(p3, std::vector<double>{1, 1, 1}, 0) == 0);
  CHECK(check_steklov_system(p3, std::vector<double>{1, 0, 0}, 1) == 1);
  // P4 at 2/3: f = (1, 1/3, -1/3, -1)
  CHECK(check_steklov_system(path_tree(3), std::vector<double>{1, 1.0 / 3, -1.0 / 3, -1}, 2.0 / 3) < 1e-12);
}

TEST_CASE("green identity and variational bound on random functions") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> d;
  for (const auto& g : sample_graphs()) {
    const double lam2 = lambda2(g);
    double worst_green = 0;
    for (int t = 0; t < 100; ++t) {
      std::vector<double> f(static_cast<std::size_t>(g.size()));
      for (auto& x : f) x = d(rng);
      double scale = 0;
      for (double x : f) scale += x * x;
      worst_green = std::max(worst_green, green_identity_gap(g, f) / (1 + scale));
      double mean = 0;
      for (Vertex b : g.boundary()) mean += f[static_cast<std::size_t>(b)];
      mean /= static_cast<double>(g.boundary().size());
      for (Vertex b : g.boundary()) f[static_cast<std::size_t>(b)] -= mean;
      CHECK(rayleigh(g, f) >= lam2 - 1e-9);
    }
    CHECK(worst_green < 1e-10);
  }
}

TEST_CASE("doubled spectrum vanishes at the wedge") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = random_tree(4 + static_cast<int>(s % 10), s);
    const Vertex x = g.boundary()[s % g.boundary().size()];
    const auto d = double_at(g, x);
    const auto sp = steklov_spectrum(d.graph);
    auto [lo, hi] = sp.group_of(2);
    for (std::size_t k = lo; k <= hi; ++k) CHECK(std::abs(sp.extension(k)[static_cast<std::size_t>(d.wedge)]) < 1e-7);
  }
}

TEST_CASE("spectrum json") {
  const auto j = spectrum_to_json(steklov_spectrum(path_tree(4)), true);
  CHECK(j["boundary"] == nlohmann::json::array({0, 4}));
  CHECK(j["eigenvalues"].size() == 2);
  CHECK_THAT(j["lambda2"].get<double>(), WithinAbs(0.5, 1e-12));
  CHECK(j["eigenvectors"].size() == 2);
  // shortest round-trip formatting reproduces the doubles exactly
  const auto back = nlohmann::json::parse(j.dump());
  CHECK(back["lambda2"].get<double>() == j["lambda2"].get<double>());
}
