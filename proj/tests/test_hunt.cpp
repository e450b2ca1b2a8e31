#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>

#include <catch_amalgamated.hpp>

#include "steklov/enumerate.hpp"
#include "steklov/generators.hpp"
#include "steklov/hunt.hpp"

using namespace steklov;
using Catch::Matchers::WithinAbs;

namespace {

// Minimal adjacency string over every vertex permutation.
std::string brute_canonical(int n, const std::vector<Edge>& edges) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string s(static_cast<std::size_t>(n * n), '0');
    for (const auto& e : edges) {
      const int a = perm[static_cast<std::size_t>(e.u)], b = perm[static_cast<std::size_t>(e.v)];
      s[static_cast<std::size_t>(a * n + b)] = s[static_cast<std::size_t>(b * n + a)] = '1';
    }
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::size_t brute_tree_count(int n) {
  std::set<std::string> seen;
  std::vector<int> seq(static_cast<std::size_t>(n - 2), 0);
  while (true) {
    seen.insert(brute_canonical(n, pruefer_decode(seq)));
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return seen.size();
}

std::size_t brute_connected_count(int n) {
  std::vector<Edge> all;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) all.push_back({a, b});
  std::set<std::string> seen;
  for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
    std::vector<Edge> e;
    std::vector<int> comp(static_cast<std::size_t>(n));
    std::iota(comp.begin(), comp.end(), 0);
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1) e.push_back(all[i]);
    // union-find connectivity
    std::function<int(int)> find = [&](int v) {
      return comp[static_cast<std::size_t>(v)] == v ? v : comp[static_cast<std::size_t>(v)] = find(comp[static_cast<std::size_t>(v)]);
    };
    int parts = n;
    for (const auto& x : e) {
      int a = find(x.u), b = find(x.v);
      if (a != b) {
        comp[static_cast<std::size_t>(a)] = b;
        --parts;
      }
    }
    if (parts == 1) seen.insert(brute_canonical(n, e));
  }
  return seen.size();
}

HuntConfig small_trees(int n_max = 7) {
  HuntConfig c;
  c.problem = Problem::trees;
  c.n_max = n_max;
  c.k_min = 3;
  return c;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("steklov_test_" + name)).string();
}

}  // namespace

TEST_CASE("tree enumeration counts") {
  const std::vector<std::size_t> expected{1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551};
  for (int n = 3; n <= 12; ++n) CHECK(enumerate_trees(n).size() == expected[static_cast<std::size_t>(n - 2)]);
  CHECK(brute_tree_count(5) == enumerate_trees(5).size());
  CHECK(brute_tree_count(7) == enumerate_trees(7).size());
  for (const auto& t : enumerate_trees(8)) {
    CHECK(t.size() == 8);
    CHECK(t.is_tree());
  }
  CHECK_THROWS_AS(enumerate_trees(2), ValidationError);
}

TEST_CASE("connected graph enumeration counts") {
  const std::vector<std::size_t> expected{1, 1, 2, 6, 21, 112, 853};
  for (int n = 1; n <= 7; ++n) CHECK(enumerate_connected_graphs(n).size() == expected[static_cast<std::size_t>(n - 1)]);
  for (int n = 3; n <= 5; ++n) CHECK(brute_connected_count(n) == enumerate_connected_graphs(n).size());
  for (const auto& g : enumerate_boundary_graphs(6, true)) {
    CHECK(!g.is_tree());
    CHECK(g.boundary().size() >= 1);
  }
}

TEST_CASE("small graph canonical form is label invariant") {
  SmallGraph a{4, {0b0010, 0b0101, 0b1010, 0b0100}};  // path 0-1-2-3
  SmallGraph b{4, {0b1100, 0b1000, 0b0001, 0b0011}};  // path 1-3-0-2 relabeled
  CHECK(small_graph_canonical(a) == small_graph_canonical(b));
  SmallGraph s{4, {0b1110, 0b0001, 0b0001, 0b0001}};
  CHECK(small_graph_canonical(a) != small_graph_canonical(s));
}

TEST_CASE("hunt config validation") {
  auto c = small_trees();
  c.budget = 0;
  CHECK_THROWS_AS(run_hunt(c), ValidationError);
  c = small_trees();
  c.k_min = 1;
  CHECK_THROWS_AS(run_hunt(c), ValidationError);
  c = small_trees();
  c.k_min = 4;
  c.k_max = 3;
  CHECK_THROWS_AS(run_hunt(c), ValidationError);
  c = small_trees();
  c.n_max = 2;
  CHECK_THROWS_AS(run_hunt(c), ValidationError);
  c = small_trees();
  c.output = "/nonexistent-dir/report.json";
  CHECK_THROWS_AS(run_hunt(c), ValidationError);
}

TEST_CASE("k = 2 pendant sanity on P4") {
  auto c = small_trees();
  c.k_min = 2;
  c.k_max = 2;
  c.seed_graph = path_tree(3);
  const auto r = run_hunt(c);
  CHECK(r.status == "complete");
  CHECK(r.pairs_examined == 4);
  CHECK(r.violations.empty());
  // the tightest pendant is at an inner vertex: lambda_2 = 3/5
  CHECK_THAT(lambda2(add_pendant(path_tree(3), 1).graph), WithinAbs(0.6, 1e-12));
  CHECK_THAT(r.min_margin.at(2), WithinAbs(2.0 / 3 - 0.6, 1e-10));
  CHECK(std::find_if(r.warnings.begin(), r.warnings.end(),
                     [](const std::string& w) { return w.find("regression gate") != std::string::npos; }) !=
        r.warnings.end());
}

TEST_CASE("k = 2 gate over all small trees") {
  auto c = small_trees(8);
  c.k_min = 2;
  c.k_max = 2;
  const auto r = run_hunt(c);
  CHECK(r.violations.empty());
  CHECK(r.total_instances == 1 + 2 + 3 + 6 + 11 + 23);
  CHECK(r.min_margin.at(2) > -1e-8);
}

TEST_CASE("hunt is deterministic and independent of worker count") {
  auto c = small_trees(9);
  c.exhaustive_limit = 7;
  c.random_per_size = 15;
  const auto a = run_hunt(c);
  const auto b = run_hunt(c);
  c.workers = 4;
  const auto d = run_hunt(c);
  CHECK(a.content_json() == b.content_json());
  CHECK(a.content_json() == d.content_json());
  CHECK(a.total_instances == 1 + 2 + 3 + 6 + 11 + 30);
  c.seed = 2;
  CHECK(run_hunt(c).content_json() != a.content_json());
}

TEST_CASE("resume continues to the same result as a full run") {
  auto c = small_trees(8);
  const auto full = run_hunt(c);
  c.budget = 10;
  const auto part = run_hunt(c);
  CHECK(part.status == "budget_exhausted");
  CHECK(part.cursor == 10);
  c.budget = 1'000'000;
  const auto both = resume_hunt(part, c);
  CHECK(both.status == "complete");
  CHECK(both.content_json() == full.content_json());

  // through the JSON round trip
  const auto reread = HuntReport::from_json(nlohmann::json::parse(part.to_json().dump()));
  CHECK(resume_hunt(reread, c).content_json() == full.content_json());

  auto other = c;
  other.k_min = 4;
  CHECK_THROWS_AS(resume_hunt(part, other), ValidationError);
}

TEST_CASE("problem 2 smoke run") {
  HuntConfig c;
  c.problem = Problem::cycles;
  c.n_max = 6;
  c.k_min = 2;
  const auto r = run_hunt(c);
  CHECK(r.status == "complete");
  CHECK(r.total_instances == static_cast<std::int64_t>(enumerate_boundary_graphs(4, true).size() +
                                                       enumerate_boundary_graphs(5, true).size() +
                                                       enumerate_boundary_graphs(6, true).size()));
  CHECK(r.pairs_examined > 0);
  for (const auto& v : r.violations) CHECK(reverify(v));
  CHECK(r.content_json()["config"]["problem"] == "problem2");
}

TEST_CASE("tree input to problem 2 is routed to problem 1") {
  HuntConfig c;
  c.problem = Problem::cycles;
  c.seed_graph = ball(2, 2);
  const auto r = run_hunt(c);
  CHECK(r.config.problem == Problem::trees);
  CHECK(r.warnings.front().find("problem 1") != std::string::npos);
}

TEST_CASE("report files and violation reverification") {
  // force violations: a negative tolerance flags every comparison
  auto c = small_trees(5);
  c.violation_tol = -1.0;
  c.output = temp_path("report.json");
  std::filesystem::remove_all(c.output + ".violations");
  const auto r = run_hunt(c);
  REQUIRE(!r.violations.empty());
  std::ifstream in(c.output);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["violation_count"] == r.violations.size());
  CHECK(j.contains("timing"));
  CHECK(!r.content_json().contains("timing"));
  CHECK(std::filesystem::exists(c.output + ".violations"));
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(c.output + ".violations")) {
    (void)e;
    ++files;
  }
  CHECK(files == 2 * r.violations.size());
  for (const auto& v : j["violations"]) {
    const auto p = CandidatePair::from_json(v);
    CHECK(reverify(p, 1e-9, -1.0));
    CHECK(!reverify(p));  // not a genuine violation
  }
  std::filesystem::remove(c.output);
  std::filesystem::remove_all(c.output + ".violations");
}

TEST_CASE("margin histogram bins") {
  MarginHistogram h;
  for (double m : {-1.0, 0.0, 1e-6, 5e-4, 5e-3, 5e-2, 0.5}) h.add(m);
  CHECK(h.counts == std::vector<std::int64_t>{1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("figure pair reconstruction") {
  const auto f = find_fig1(6);
  REQUIRE(f.found);
  CHECK_THAT(f.pair.spectrum_g1[1], WithinAbs(0.5, 1e-9));
  CHECK_THAT(f.pair.spectrum_g2[1], WithinAbs(2.0 / 3, 1e-9));
  CHECK(f.pair.g1 == path_tree(4));
  CHECK(f.pair.g2 == cycle_with_opposite_pendants(4));
  CHECK(contains_subgraph(f.pair.g2, f.pair.g1));
  CHECK(reverify(f.pair));
  CHECK(f.pendant_search["hits"].empty());
  CHECK_THROWS_AS(find_fig1(5), ValidationError);
}
