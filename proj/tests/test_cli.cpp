#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "cli.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::ostringstream out, err;
  std::istringstream in(stdin_text);
  const int code = steklov::cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("steklov_cli_" + name)).string();
}

// Structural equality with numbers compared to 1e-12.
bool json_close(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>()) <= 1e-12;
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()) || !json_close(it.value(), b.at(it.key()))) return false;
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!json_close(a[i], b[i])) return false;
    return true;
  }
  return a == b;
}

}  // namespace

TEST_CASE("number formatting") {
  using steklov::cli::num;
  CHECK(num(0.5) == "0.5");
  CHECK(num(-4e-17) == "0");
  CHECK(num(2.0 / 3) == "0.666666666667");
}

TEST_CASE("spectrum output") {
  auto r = run_cli({"spectrum", "--gen", "path:4"});
  CHECK(r.code == 0);
  CHECK(r.out == "0 0.5\n");
  r = run_cli({"spectrum", "--gen", "star:3", "--vectors"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("0 1 1\n"));
  r = run_cli({"spectrum", "--format", "dot", "--gen", "path:2"});
  CHECK_THAT(r.out, ContainsSubstring("graph G {"));
}

TEST_CASE("spectrum json matches the golden file") {
  const auto r = run_cli({"spectrum", "--gen", "path:4", "--json"});
  REQUIRE(r.code == 0);
  std::ifstream f(std::string(STEKLOV_GOLDEN_DIR) + "/spectrum_path4.json");
  REQUIRE(f);
  const auto golden = nlohmann::json::parse(f);
  CHECK(json_close(nlohmann::json::parse(r.out), golden));
}

TEST_CASE("graphs from stdin and files") {
  auto r = run_cli({"spectrum", "--input", "-"}, "DhC\n");
  CHECK(r.code == 0);
  CHECK(r.out == "0 0.5\n");
  r = run_cli({"spectrum"}, "3 2\n0 2\n0 1\n1 2\n");
  CHECK(r.out == "0 1\n");
  r = run_cli({"spectrum", "--input", std::string(STEKLOV_GOLDEN_DIR) + "/single_edge.txt", "--relaxed"});
  CHECK(r.code == 0);
  CHECK(r.out == "0 2\n");
  r = run_cli({"spectrum", "--input", "/nonexistent/file.txt"});
  CHECK(r.code == 3);
}

TEST_CASE("sigma command") {
  auto r = run_cli({"sigma", "--gen", "path:2", "--at", "leaf"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("0.5 / 0.5 (doubling/bisection)"));
  r = run_cli({"sigma", "--gen", "ball:2,2", "--at", "leaf", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["delta"].get<double>() < 1e-8);
  CHECK(j["witness"]["target"] == j["x"]);
  r = run_cli({"sigma", "--gen", "star:3", "--at", "center"});
  CHECK(r.code == 2);
}

TEST_CASE("flow command") {
  auto r = run_cli({"flow", "--gen", "path:2", "--to", "v2", "--lambda", "0.5"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("values 1 0.5 0\n"));
  r = run_cli({"flow", "--gen", "path:2", "--to", "v2", "--lambda", "0.5", "--dense", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK_THAT(j["values"][1].get<double>(), WithinAbs(0.5, 1e-12));
  r = run_cli({"flow", "--gen", "star:3", "--to", "v1", "--lambda", "1"});
  CHECK(r.code == 4);
  CHECK_THAT(r.err, ContainsSubstring("resonance"));
  r = run_cli({"flow", "--gen", "path:3", "--to", "v9", "--lambda", "0.1"});
  CHECK(r.code == 2);
  r = run_cli({"flow", "--gen", "path:3", "--to", "v0", "--lambda", "0.1", "--norm", "v3"});
  CHECK(r.code == 0);
}

TEST_CASE("verify command") {
  auto r = run_cli({"verify", "monotonicity", "--random-trees", "20", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("20 passed, 0 failed"));
  for (const std::string check : {"doubling", "partition", "diameter", "dichotomy"}) {
    r = run_cli({"verify", check, "--random-trees", "10", "--seed", "4"});
    INFO(check << ": " << r.err);
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("10 passed, 0 failed"));
  }
  r = run_cli({"verify", "degree_diameter", "--gen", "ball:2,2", "--D", "2", "--L", "4"});
  CHECK(r.code == 0);
  r = run_cli({"verify", "diameter", "--gen", "path:3"});
  CHECK_THAT(r.out, ContainsSubstring("odd L = 3"));
  CHECK_THAT(r.out, ContainsSubstring("1 passed, 0 failed, 1 discrepancies"));

  const auto path = temp_path("verify.jsonl");
  r = run_cli({"verify", "doubling", "--random-trees", "3", "--out", path});
  CHECK(r.code == 0);
  std::ifstream f(path);
  int lines = 0;
  for (std::string line; std::getline(f, line); ++lines) CHECK(nlohmann::json::parse(line)["check"] == "doubling");
  CHECK(lines == 3);
  std::filesystem::remove(path);

  r = run_cli({"verify", "nonsense", "--gen", "path:3"});
  CHECK(r.code == 2);
}

TEST_CASE("hunt command") {
  const auto path = temp_path("hunt.json");
  auto r = run_cli({"hunt", "problem1", "--nmax", "7", "--budget", "5", "--out", path});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("budget_exhausted, 5/"));
  r = run_cli({"hunt", "problem1", "--nmax", "7", "--resume", path, "--out", path});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("complete"));
  const auto full = run_cli({"hunt", "problem1", "--nmax", "7", "--json"});
  std::ifstream f(path);
  auto resumed = nlohmann::json::parse(f);
  auto whole = nlohmann::json::parse(full.out.substr(0, full.out.rfind("hunt problem1")));
  resumed.erase("timing");
  whole.erase("timing");
  CHECK(resumed == whole);
  std::filesystem::remove(path);

  r = run_cli({"hunt", "problem1", "--kmin", "2", "--kmax", "2", "--nmax", "6"});
  CHECK(r.code == 0);
  CHECK_THAT(r.err, ContainsSubstring("regression gate"));
  r = run_cli({"hunt", "problem2", "--gen", "path:3"});
  CHECK(r.code == 0);
  CHECK_THAT(r.err, ContainsSubstring("problem 1"));
  r = run_cli({"hunt", "fig1", "--nmax", "6"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("lambda2(g1) = 0.5, lambda2(g2) = 0.666666666667"));
  CHECK(run_cli({"hunt", "problem1", "--budget", "0"}).code == 2);
  CHECK(run_cli({"hunt", "problem3"}).code == 2);
}

TEST_CASE("generate command") {
  CHECK(run_cli({"generate", "--gen", "path:2", "--format", "graph6"}).out == "Bg\n");
  CHECK(run_cli({"generate", "--gen", "path:2", "--format", "edgelist"}).out == "3 2\n0 2\n0 1\n1 2\n");
  const auto a = run_cli({"generate", "--gen", "random:9", "--seed", "4"}).out;
  CHECK(a == run_cli({"generate", "--gen", "random:9,4"}).out);
  CHECK(a != run_cli({"generate", "--gen", "random:9", "--seed", "5"}).out);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"spectrum", "--bogus"}).code == 2);
  CHECK(run_cli({"spectrum", "--gen", "path:1"}).code == 2);
  CHECK(run_cli({"spectrum"}, "3 2\n0 2\n0 1\n1 x\n").code == 3);
  CHECK(run_cli({"spectrum"}, "2 2\n0 1\n0 1\n").code == 2);
  CHECK(run_cli({"spectrum", "--gen", "path:3", "--input", "x.txt"}).code == 2);
}
