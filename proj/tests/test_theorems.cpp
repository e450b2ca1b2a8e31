#include <cmath>

#include <catch_amalgamated.hpp>

#include "steklov/generators.hpp"
#include "steklov/theorems.hpp"

using namespace steklov;
using Catch::Matchers::WithinAbs;

namespace {

BoundaryGraph tree_for(std::uint64_t i, int nmin = 4, int span = 11) {
  const auto s = mix_seed(77, i);
  return random_tree(nmin + static_cast<int>(s % static_cast<std::uint64_t>(span)), s);
}

}  // namespace

TEST_CASE("monotonicity examples") {
  const auto p = check_monotonicity_chain(path_tree(3), 1);
  CHECK(p.pass);
  REQUIRE(p.details["chain"].size() == 2);
  CHECK_THAT(p.details["chain"][0].get<double>(), WithinAbs(2.0 / 3, 1e-12));
  CHECK_THAT(p.details["chain"][1].get<double>(), WithinAbs(1.0, 1e-12));

  const auto b = check_monotonicity_chain(ball(2, 2), 5);
  CHECK(b.pass);
  CHECK_THAT(b.details["chain"].front().get<double>(), WithinAbs(1.0 / 3, 1e-12));
  CHECK_THAT(b.details["chain"].back().get<double>(), WithinAbs(1.0, 1e-12));

  // already at the smallest size: nothing to remove
  const auto t = check_monotonicity_chain(path_tree(2), 1);
  CHECK(t.pass);
  CHECK(t.details["removed"].empty());
}

TEST_CASE("monotonicity chains are reproducible and record original labels") {
  const auto g = random_tree(12, 3);
  const auto a = check_monotonicity_chain(g, 9);
  const auto b = check_monotonicity_chain(g, 9);
  CHECK(a.to_json() == b.to_json());
  const auto removed = a.details["removed"].get<std::vector<int>>();
  CHECK(removed.size() == 9);
  std::vector<int> sorted = removed;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  for (int v : removed) CHECK((v >= 0 && v < 12));
}

TEST_CASE("monotonicity holds on random chains") {
  double worst = 1e300;
  for (std::uint64_t i = 0; i < 150; ++i) {
    const auto r = check_monotonicity_chain(tree_for(i), i);
    CHECK(r.pass);
    worst = std::min(worst, r.margins.at("worst_gap"));
  }
  CHECK(worst > -1e-8);
}

TEST_CASE("doubling identity examples") {
  const auto s = check_doubling(star(3), 0);
  CHECK(s.pass);
  CHECK_THAT(s.details["lambda2_double"].get<double>(), WithinAbs(1, 1e-10));

  // P3 doubled at a leaf is P5
  const auto p = check_doubling(path_tree(2), 0);
  CHECK(p.pass);
  CHECK_THAT(p.details["lambda2_double"].get<double>(), WithinAbs(0.5, 1e-10));
  CHECK(p.details["branch_sigma"].size() == 1);
}

TEST_CASE("doubling identity on random instances") {
  for (std::uint64_t i = 0; i < 80; ++i) {
    const auto g = tree_for(i);
    const Vertex x = static_cast<Vertex>(mix_seed(5, i) % static_cast<std::uint64_t>(g.size()));
    const auto r = check_doubling(g, x);
    CHECK(r.pass);
    CHECK(r.margins.at("identity_gap") < 1e-8);
    CHECK(r.margins.at("wedge_value") < 1e-7);
  }
}

TEST_CASE("partition examples") {
  const auto p = check_partition(path_tree(2), 0);
  CHECK(p.pass);
  CHECK_THAT(p.details["sigma_doubling"].get<double>(), WithinAbs(0.5, 1e-10));
  CHECK(p.margins.at("strict_gap") > 0.4);

  const auto c = check_partition(star(3), 0);
  CHECK(c.pass);
  CHECK(c.margins.count("interior_gap") == 1);
}

TEST_CASE("partition on random instances") {
  for (std::uint64_t i = 0; i < 80; ++i) {
    const auto g = tree_for(i, 3, 12);
    for (Vertex x : {g.boundary().front(), g.interior().empty() ? g.boundary().back() : g.interior().front()}) {
      const auto r = check_partition(g, x);
      CHECK(r.pass);
      if (g.is_boundary(x)) CHECK(r.margins.at("method_gap") < 1e-8);
    }
  }
}

TEST_CASE("diameter decomposition") {
  // spider with arms 3,3,1: x0..x6 through the center, one extra leaf at the middle
  const auto g = spider({3, 3, 1});
  const auto d = diameter_decomposition(g);
  CHECK(d.length == 6);
  CHECK(d.relative_boundary == std::vector<int>{0, 0, 1, 0, 0});
  CHECK(d.middle().size() == 2);
  CHECK(diameter_decomposition(path_tree(3)).middle().empty());
}

TEST_CASE("diameter checker") {
  const auto odd = check_diameter(path_tree(3));
  CHECK(odd.pass);
  CHECK(odd.details["equality"] == true);
  REQUIRE(odd.discrepancies.size() == 1);
  CHECK(odd.discrepancies[0].find("odd L = 3") != std::string::npos);
  CHECK(odd.details["conditions"]["L_even"] == false);

  const auto even = check_diameter(path_tree(4));
  CHECK(even.pass);
  CHECK(even.details["equality"] == true);
  CHECK(even.discrepancies.empty());

  const auto strict = check_diameter(ball(2, 2));
  CHECK(strict.pass);
  CHECK(strict.details["equality"] == false);
  CHECK_THAT(strict.margins.at("bound_gap"), WithinAbs(0.5 - 1.0 / 3, 1e-10));

  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto r = check_diameter(tree_for(i, 3, 20));
    CHECK(r.pass);
    CHECK(r.margins.at("bound_gap") > -1e-9);
  }
}

TEST_CASE("degree diameter bound and rigidity") {
  const auto b = check_degree_diameter(ball(2, 2), 2, 4);
  CHECK(b.pass);
  CHECK(b.details["equality"] == true);
  CHECK(b.details["contains_rigid_piece"] == true);

  const auto o = check_degree_diameter(double_ball(2, 1), 2, 3);
  CHECK(o.pass);
  CHECK(o.details["equality"] == true);
  CHECK(o.details["isomorphic_to_double_ball"] == true);
  CHECK_THAT(o.details["lambda2"].get<double>(), WithinAbs(2.0 / 4, 1e-10));

  const auto p = check_degree_diameter(path_tree(4), 2, 4);
  CHECK(p.pass);
  CHECK(p.details["equality"] == false);

  CHECK_THROWS_AS(check_degree_diameter(star(5), 2, 4), ValidationError);
  CHECK_THROWS_AS(check_degree_diameter(path_tree(6), 2, 4), ValidationError);
  CHECK_THROWS_AS(check_degree_diameter(path_tree(3), 1, 4), ValidationError);

  int checked = 0;
  for (std::uint64_t i = 0; checked < 60 && i < 5000; ++i) {
    const auto g = tree_for(i, 4, 14);
    int maxdeg = 0;
    for (Vertex v = 0; v < g.size(); ++v) maxdeg = std::max(maxdeg, g.degree(v));
    const int D = std::max(2, maxdeg - 1);
    const int L = diameter(g);
    if (L < 2) continue;
    const auto r = check_degree_diameter(g, D, L);
    CHECK(r.pass);
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("branch dichotomy") {
  const auto s = check_branch_dichotomy(star(3), 0);
  CHECK(s.pass);
  CHECK(s.details["counts"]["at"] == 3);
  CHECK(s.margins.at("eigenfunction_at_z") < 1e-7);

  const auto p = check_branch_dichotomy(path_tree(3), 1);
  CHECK(p.pass);
  CHECK(p.details["counts"]["below"] == 1);
  CHECK(p.details["counts"]["above"] == 1);

  const auto d = check_branch_dichotomy(double_ball(2, 1), 0);
  CHECK(d.pass);
  CHECK_THROWS_AS(check_branch_dichotomy(star(3), 1), ValidationError);

  for (std::uint64_t i = 0; i < 60; ++i) {
    const auto g = tree_for(i);
    for (Vertex z : g.interior()) CHECK(check_branch_dichotomy(g, z).pass);
  }
}

TEST_CASE("check report json") {
  auto r = check_doubling(path_tree(2), 0);
  r.margins["unbounded"] = std::numeric_limits<double>::infinity();
  const auto j = r.to_json();
  CHECK(j["check"] == "doubling");
  CHECK(j["instance"]["graph6"] == "Bg");
  CHECK(j["margins"]["unbounded"] == "inf");
  CHECK(j["tolerances"].contains("equality"));
  CHECK(j["pass"] == true);
}
