#pragma once

// Counterexample campaigns for higher Steklov eigenvalue monotonicity under
// pendant addition: trees (problem 1) and graphs with cycles (problem 2).
// Instances are ordered deterministically, processed by a worker pool and
// merged by index, so reports do not depend on the worker count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "steklov/canonical.hpp"
#include "steklov/enumerate.hpp"
#include "steklov/generators.hpp"
#include "steklov/graph.hpp"
#include "steklov/graph_io.hpp"
#include "steklov/spectral.hpp"
#include "steklov/tolerances.hpp"

namespace steklov {

enum class Problem { trees = 1, cycles = 2, fig1 = 3 };

inline std::string to_string(Problem p) {
  switch (p) {
    case Problem::trees: return "problem1";
    case Problem::cycles: return "problem2";
    case Problem::fig1: return "fig1";
  }
  return "?";
}

struct HuntConfig {
  Problem problem = Problem::trees;
  int n_max = 7;
  int k_min = 3;
  int k_max = 0;                 // 0: up to the smaller boundary size
  std::int64_t budget = 1'000'000;  // g1 instances processed in this run
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output;            // report path; empty for none
  int exhaustive_limit = 0;      // 0: 10 for trees, 7 for cycles
  int random_per_size = 200;     // random g1 instances per size above the exhaustive limit
  std::int64_t start = 0;        // instance cursor to resume from
  std::optional<BoundaryGraph> seed_graph;  // single g1 instead of the enumerated family
  double violation_tol = 1e-8;

  int exhaustive_cap() const {
    if (exhaustive_limit > 0) return exhaustive_limit;
    return problem == Problem::cycles ? 7 : 10;
  }

  void validate() const {
    if (budget <= 0) throw ValidationError(ValidationKind::bad_parameter, "budget must be > 0");
    if (k_min < 2) throw ValidationError(ValidationKind::bad_parameter, "k must be >= 2");
    if (k_max != 0 && k_max < k_min) throw ValidationError(ValidationKind::bad_parameter, "empty k range");
    if (workers < 1) throw ValidationError(ValidationKind::bad_parameter, "workers must be >= 1");
    if (start < 0) throw ValidationError(ValidationKind::bad_parameter, "cursor must be >= 0");
    if (!seed_graph) {
      if (problem == Problem::trees && (n_max < 3 || n_max > 40))
        throw ValidationError(ValidationKind::bad_parameter, "problem 1 needs 3 <= n_max <= 40");
      if (problem == Problem::cycles && (n_max < 4 || n_max > 40))
        throw ValidationError(ValidationKind::bad_parameter, "problem 2 needs 4 <= n_max <= 40");
    }
    if (exhaustive_cap() > (problem == Problem::cycles ? 7 : 12))
      throw ValidationError(ValidationKind::bad_parameter, "exhaustive limit too large");
  }

  /// Everything that determines the report content (workers and budget excluded).
  nlohmann::json to_json() const {
    nlohmann::json j{{"problem", to_string(problem)}, {"n_max", n_max},
                     {"k_min", k_min},               {"k_max", k_max},
                     {"seed", seed},                 {"exhaustive_limit", exhaustive_cap()},
                     {"random_per_size", random_per_size}, {"violation_tol", violation_tol}};
    if (seed_graph) j["seed_graph"] = to_edge_list(*seed_graph);
    return j;
  }
};

struct KMargin {
  int k = 0;
  double lambda_g1 = 0.0;
  double lambda_g2 = 0.0;
  double margin() const { return lambda_g1 - lambda_g2; }
};

struct CandidatePair {
  std::int64_t instance = -1;
  BoundaryGraph g1;
  BoundaryGraph g2;
  Vertex attached_to = -1;  // -1 when g1 is not a pendant deletion of g2
  Vertex pendant = -1;
  std::vector<double> spectrum_g1;
  std::vector<double> spectrum_g2;
  std::vector<KMargin> margins;
  std::string label;

  nlohmann::json to_json() const {
    nlohmann::json m = nlohmann::json::array();
    for (const auto& km : margins)
      m.push_back({{"k", km.k}, {"lambda_g1", km.lambda_g1}, {"lambda_g2", km.lambda_g2},
                   {"margin", km.margin()}});
    nlohmann::json j{{"instance", instance},     {"g1", to_edge_list(g1)},
                     {"g2", to_edge_list(g2)},   {"attached_to", attached_to},
                     {"pendant", pendant},       {"spectrum_g1", spectrum_g1},
                     {"spectrum_g2", spectrum_g2}, {"margins", m}};
    if (!label.empty()) j["label"] = label;
    return j;
  }

  static CandidatePair from_json(const nlohmann::json& j) {
    CandidatePair p;
    p.instance = j.at("instance").get<std::int64_t>();
    p.g1 = parse_edge_list(j.at("g1").get<std::string>(), Validation::relaxed);
    p.g2 = parse_edge_list(j.at("g2").get<std::string>(), Validation::relaxed);
    p.attached_to = j.at("attached_to").get<Vertex>();
    p.pendant = j.at("pendant").get<Vertex>();
    p.spectrum_g1 = j.at("spectrum_g1").get<std::vector<double>>();
    p.spectrum_g2 = j.at("spectrum_g2").get<std::vector<double>>();
    for (const auto& m : j.at("margins"))
      p.margins.push_back({m.at("k").get<int>(), m.at("lambda_g1").get<double>(),
                           m.at("lambda_g2").get<double>()});
    if (j.contains("label")) p.label = j.at("label").get<std::string>();
    return p;
  }
};

/// Recompute both spectra from the serialized graphs alone and confirm the
/// recorded values within `tol`; for a violation also confirm that some
/// margin is still below -violation_tol.
inline bool reverify(const CandidatePair& p, double tol = 1e-9, double violation_tol = 1e-8) {
  if (p.attached_to >= 0) {
    if (p.g2.size() != p.g1.size() + 1 || p.pendant != p.g1.size() || p.g2.degree(p.pendant) != 1 ||
        !p.g2.has_edge(p.attached_to, p.pendant))
      return false;
    for (const auto& e : p.g1.edges())
      if (!p.g2.has_edge(e.u, e.v)) return false;
  }
  const auto s1 = steklov_spectrum(p.g1).eigenvalues;
  const auto s2 = steklov_spectrum(p.g2).eigenvalues;
  if (s1.size() != p.spectrum_g1.size() || s2.size() != p.spectrum_g2.size()) return false;
  for (std::size_t i = 0; i < s1.size(); ++i)
    if (std::abs(s1[i] - p.spectrum_g1[i]) > tol) return false;
  for (std::size_t i = 0; i < s2.size(); ++i)
    if (std::abs(s2[i] - p.spectrum_g2[i]) > tol) return false;
  bool violated = false;
  for (const auto& m : p.margins) {
    const auto k = static_cast<std::size_t>(m.k);
    if (k > s1.size() || k > s2.size()) return false;
    violated = violated || s1[k - 1] - s2[k - 1] < -violation_tol;
  }
  return violated;
}

/// Histogram of each pair's smallest margin.
struct MarginHistogram {
  static constexpr double edges[] = {-1e-8, 1e-8, 1e-4, 1e-3, 1e-2, 1e-1};
  std::vector<std::int64_t> counts = std::vector<std::int64_t>(7, 0);

  void add(double m) {
    std::size_t bin = 0;
    while (bin < 6 && m >= edges[bin]) ++bin;
    ++counts[bin];
  }
  void merge(const MarginHistogram& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  }
  nlohmann::json to_json() const {
    return {{"edges", std::vector<double>(std::begin(edges), std::end(edges))}, {"counts", counts}};
  }
};

struct HuntReport {
  HuntConfig config;
  std::string status;  // complete | budget_exhausted
  std::int64_t total_instances = 0;
  std::int64_t cursor = 0;
  std::int64_t instances_examined = 0;
  std::int64_t pairs_examined = 0;
  std::int64_t comparisons = 0;
  std::vector<CandidatePair> violations;
  std::map<int, double> min_margin;  // per k
  MarginHistogram histogram;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  /// The reproducible part of the report.
  nlohmann::json content_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& p : violations) v.push_back(p.to_json());
    nlohmann::json mm = nlohmann::json::object();
    for (const auto& [k, m] : min_margin) mm[std::to_string(k)] = m;
    return {{"config", config.to_json()},
            {"status", status},
            {"total_instances", total_instances},
            {"cursor", cursor},
            {"instances_examined", instances_examined},
            {"pairs_examined", pairs_examined},
            {"comparisons", comparisons},
            {"violation_count", violations.size()},
            {"violations", v},
            {"min_margin", mm},
            {"histogram", histogram.to_json()},
            {"warnings", warnings},
            {"tolerances", Tolerances{}.to_json()}};
  }

  nlohmann::json to_json() const {
    auto j = content_json();
    j["timing"] = {{"wall_seconds", wall_seconds}, {"workers", config.workers}};
    return j;
  }

  static HuntReport from_json(const nlohmann::json& j) {
    HuntReport r;
    r.status = j.at("status").get<std::string>();
    r.total_instances = j.at("total_instances").get<std::int64_t>();
    r.cursor = j.at("cursor").get<std::int64_t>();
    r.instances_examined = j.at("instances_examined").get<std::int64_t>();
    r.pairs_examined = j.at("pairs_examined").get<std::int64_t>();
    r.comparisons = j.at("comparisons").get<std::int64_t>();
    for (const auto& v : j.at("violations")) r.violations.push_back(CandidatePair::from_json(v));
    for (const auto& [k, m] : j.at("min_margin").items()) r.min_margin[std::stoi(k)] = m.get<double>();
    r.histogram.counts = j.at("histogram").at("counts").get<std::vector<std::int64_t>>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    const auto& c = j.at("config");
    r.config.problem = c.at("problem") == "problem2" ? Problem::cycles : Problem::trees;
    r.config.n_max = c.at("n_max").get<int>();
    r.config.k_min = c.at("k_min").get<int>();
    r.config.k_max = c.at("k_max").get<int>();
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.config.exhaustive_limit = c.at("exhaustive_limit").get<int>();
    r.config.random_per_size = c.at("random_per_size").get<int>();
    r.config.violation_tol = c.at("violation_tol").get<double>();
    if (c.contains("seed_graph")) r.config.seed_graph = parse_edge_list(c.at("seed_graph").get<std::string>());
    return r;
  }
};

namespace detail {

// Deterministic, index-addressable instance list.
inline std::vector<BoundaryGraph> hunt_instances(const HuntConfig& cfg) {
  std::vector<BoundaryGraph> out;
  if (cfg.seed_graph) {
    out.push_back(*cfg.seed_graph);
    return out;
  }
  const int cap = cfg.exhaustive_cap();
  std::uint64_t idx = 0;
  if (cfg.problem == Problem::trees) {
    for (int n = 3; n <= cfg.n_max; ++n) {
      if (n <= cap) {
        for (auto& t : enumerate_trees(n)) out.push_back(std::move(t));
      } else {
        for (int i = 0; i < cfg.random_per_size; ++i)
          out.push_back(random_tree(n, mix_seed(cfg.seed, idx++)));
      }
    }
  } else {
    for (int n = 4; n <= cfg.n_max; ++n) {
      if (n <= cap) {
        for (auto& g : enumerate_boundary_graphs(n, true)) out.push_back(std::move(g));
      } else {
        for (int i = 0; i < cfg.random_per_size; ++i) {
          const std::uint64_t s = mix_seed(cfg.seed, idx++);
          out.push_back(random_graph_with_cycles(n, 1 + static_cast<int>(s % 2), s));
        }
      }
    }
  }
  return out;
}

struct InstanceResult {
  std::int64_t pairs = 0;
  std::int64_t comparisons = 0;
  std::vector<CandidatePair> violations;
  std::map<int, double> min_margin;
  MarginHistogram histogram;
  std::vector<std::string> warnings;
};

inline InstanceResult run_instance(const HuntConfig& cfg, std::int64_t index, const BoundaryGraph& g1) {
  InstanceResult res;
  const auto s1 = steklov_spectrum(g1).eigenvalues;
  for (Vertex x = 0; x < g1.size(); ++x) {
    BoundaryGraph g2;
    try {
      g2 = add_pendant(g1, x).graph;
    } catch (const ValidationError& e) {
      res.warnings.push_back("instance " + std::to_string(index) + ": pendant at " + std::to_string(x) +
                             " skipped (" + e.what() + ")");
      continue;
    }
    ++res.pairs;
    const auto s2 = steklov_spectrum(g2).eigenvalues;
    std::size_t top = std::min(s1.size(), s2.size());
    if (cfg.k_max > 0) top = std::min(top, static_cast<std::size_t>(cfg.k_max));
    CandidatePair pair;
    double pair_min = std::numeric_limits<double>::infinity();
    bool violated = false;
    for (std::size_t k = static_cast<std::size_t>(cfg.k_min); k <= top; ++k) {
      KMargin km{static_cast<int>(k), s1[k - 1], s2[k - 1]};
      ++res.comparisons;
      const double m = km.margin();
      pair_min = std::min(pair_min, m);
      auto [it, fresh] = res.min_margin.try_emplace(km.k, m);
      if (!fresh) it->second = std::min(it->second, m);
      if (m < -cfg.violation_tol) violated = true;
      pair.margins.push_back(km);
    }
    if (pair.margins.empty()) continue;
    res.histogram.add(pair_min);
    if (violated) {
      pair.instance = index;
      pair.g1 = g1;
      pair.g2 = std::move(g2);
      pair.attached_to = x;
      pair.pendant = g1.size();
      pair.spectrum_g1 = s1;
      pair.spectrum_g2 = s2;
      res.violations.push_back(std::move(pair));
    }
  }
  return res;
}

inline void write_report_files(const HuntReport& r, const std::string& path) {
  {
    std::ofstream out(path);
    if (!out) throw ValidationError(ValidationKind::bad_parameter, "cannot write report to " + path);
    out << r.to_json().dump(2) << '\n';
  }
  if (r.violations.empty()) return;
  const std::filesystem::path dir = path + ".violations";
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    const auto& p = r.violations[i];
    const std::string stem = "v" + std::to_string(p.instance) + "_x" + std::to_string(p.attached_to);
    std::ofstream(dir / (stem + "_g1.txt")) << to_edge_list(p.g1);
    std::ofstream(dir / (stem + "_g2.txt")) << to_edge_list(p.g2);
  }
}

inline void require_writable(const std::string& path) {
  if (path.empty()) return;
  const bool existed = std::filesystem::exists(path);
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw ValidationError(ValidationKind::bad_parameter, "output path not writable: " + path);
  probe.close();
  if (!existed) std::filesystem::remove(path);
}

}  // namespace detail

/// Run instances [cfg.start, cfg.start + cfg.budget) of the campaign.
inline HuntReport run_hunt(const HuntConfig& cfg) {
  cfg.validate();
  if (cfg.problem == Problem::fig1)
    throw ValidationError(ValidationKind::bad_parameter, "use find_fig1 for the figure reconstruction");
  detail::require_writable(cfg.output);
  const auto t0 = std::chrono::steady_clock::now();

  HuntConfig effective = cfg;
  HuntReport report;
  if (cfg.problem == Problem::cycles && cfg.seed_graph && cfg.seed_graph->is_tree()) {
    report.warnings.push_back("tree input has trivial fundamental group; using problem 1 semantics");
    effective.problem = Problem::trees;
  }
  if (effective.problem == Problem::trees && cfg.k_min == 2)
    report.warnings.push_back("k = 2 on trees is the proved case; run as a regression gate");
  report.config = effective;

  const auto instances = detail::hunt_instances(effective);
  const auto total = static_cast<std::int64_t>(instances.size());
  const std::int64_t begin = std::min(cfg.start, total);
  const std::int64_t end = std::min(total, begin + cfg.budget);
  std::vector<detail::InstanceResult> results(static_cast<std::size_t>(end - begin));
  std::vector<std::string> errors(results.size());

  std::atomic<std::int64_t> next{begin};
  auto work = [&] {
    for (std::int64_t i; (i = next.fetch_add(1)) < end;) {
      const auto slot = static_cast<std::size_t>(i - begin);
      try {
        results[slot] = detail::run_instance(effective, i, instances[static_cast<std::size_t>(i)]);
      } catch (const std::exception& e) {
        errors[slot] = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(cfg.workers, static_cast<int>(results.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  for (std::size_t s = 0; s < results.size(); ++s) {
    if (!errors[s].empty()) {
      report.warnings.push_back("instance " + std::to_string(begin + static_cast<std::int64_t>(s)) +
                                " failed: " + errors[s]);
      continue;
    }
    auto& r = results[s];
    report.pairs_examined += r.pairs;
    report.comparisons += r.comparisons;
    for (auto& v : r.violations) report.violations.push_back(std::move(v));
    for (auto [k, m] : r.min_margin) {
      auto [it, fresh] = report.min_margin.try_emplace(k, m);
      if (!fresh) it->second = std::min(it->second, m);
    }
    report.histogram.merge(r.histogram);
    for (auto& w : r.warnings) report.warnings.push_back(std::move(w));
  }
  report.total_instances = total;
  report.instances_examined = end - begin;
  report.cursor = end;
  report.status = end == total ? "complete" : "budget_exhausted";
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!cfg.output.empty()) detail::write_report_files(report, cfg.output);
  return report;
}

/// Continue a previous report from its cursor and fold the new results in.
inline HuntReport resume_hunt(const HuntReport& previous, HuntConfig cfg) {
  cfg.start = previous.cursor;
  const std::string output = cfg.output;
  cfg.output.clear();
  auto more = run_hunt(cfg);
  if (more.config.to_json() != previous.config.to_json())
    throw ValidationError(ValidationKind::bad_parameter, "resume with a different configuration");
  HuntReport r = previous;
  r.config.workers = cfg.workers;
  r.cursor = more.cursor;
  r.status = more.status;
  r.instances_examined += more.instances_examined;
  r.pairs_examined += more.pairs_examined;
  r.comparisons += more.comparisons;
  for (auto& v : more.violations) r.violations.push_back(std::move(v));
  for (auto [k, m] : more.min_margin) {
    auto [it, fresh] = r.min_margin.try_emplace(k, m);
    if (!fresh) it->second = std::min(it->second, m);
  }
  r.histogram.merge(more.histogram);
  for (auto& w : more.warnings)
    if (std::find(r.warnings.begin(), r.warnings.end(), w) == r.warnings.end()) r.warnings.push_back(w);
  r.wall_seconds += more.wall_seconds;
  if (!output.empty()) {
    detail::require_writable(output);
    detail::write_report_files(r, output);
  }
  return r;
}

/// Reference pair: lambda_2 rises from 1/2 to 2/3 when passing to a larger graph.
struct Fig1Result {
  bool found = false;
  CandidatePair pair;
  std::string relation;        // how g1 sits inside g2
  nlohmann::json pendant_search;  // pendant-only pairs with the same two values

  nlohmann::json to_json() const {
    return {{"found", found}, {"pair", pair.to_json()}, {"relation", relation},
            {"pendant_search", pendant_search}};
  }
};

namespace detail {

inline bool near(double a, double b, double tol) { return std::abs(a - b) < tol; }

inline CandidatePair fig1_pair(const BoundaryGraph& g1, const BoundaryGraph& g2, std::string label) {
  CandidatePair p;
  p.g1 = g1;
  p.g2 = g2;
  p.spectrum_g1 = steklov_spectrum(g1).eigenvalues;
  p.spectrum_g2 = steklov_spectrum(g2).eigenvalues;
  p.margins.push_back({2, p.spectrum_g1[1], p.spectrum_g2[1]});
  p.label = std::move(label);
  return p;
}

}  // namespace detail

inline Fig1Result find_fig1(int n_max, double tol = 1e-9) {
  if (n_max < 6) throw ValidationError(ValidationKind::bad_parameter, "fig1 search needs n_max >= 6");
  Fig1Result out;
  const int cap = std::min(n_max, 7);

  // Pendant-only growth with the same pair of values, over all small graphs.
  {
    std::int64_t examined = 0;
    nlohmann::json hits = nlohmann::json::array();
    for (int n = 3; n < cap; ++n) {
      for (const auto& g1 : enumerate_boundary_graphs(n, false)) {
        if (g1.boundary().size() < 2 || !detail::near(lambda2(g1), 0.5, tol)) {
          examined += g1.size();
          continue;
        }
        for (Vertex x = 0; x < g1.size(); ++x) {
          ++examined;
          const auto g2 = add_pendant(g1, x).graph;
          if (detail::near(lambda2(g2), 2.0 / 3.0, tol))
            hits.push_back(detail::fig1_pair(g1, g2, "pendant search").to_json());
        }
      }
    }
    out.pendant_search = {{"pairs_examined", examined}, {"hits", hits}, {"max_vertices", cap}};
  }

  const auto g2 = cycle_with_opposite_pendants(4);
  const auto g1 = path_tree(4);
  auto cand = detail::fig1_pair(g1, g2, "candidate reconstruction");
  if (detail::near(cand.spectrum_g1[1], 0.5, tol) && detail::near(cand.spectrum_g2[1], 2.0 / 3.0, tol) &&
      contains_subgraph(g2, g1)) {
    out.found = true;
    out.pair = std::move(cand);
    out.relation = "g1 is g2 with one cycle vertex deleted";
    return out;
  }

  // Fallback: any g1 inside g2 with the two values.
  std::vector<BoundaryGraph> lows, highs;
  for (int n = 3; n <= cap; ++n)
    for (auto& g : enumerate_boundary_graphs(n, false)) {
      if (g.boundary().size() < 2) continue;
      const double l = lambda2(g);
      if (detail::near(l, 0.5, tol)) lows.push_back(g);
      if (detail::near(l, 2.0 / 3.0, tol)) highs.push_back(std::move(g));
    }
  for (const auto& h : highs)
    for (const auto& l : lows)
      if (l.size() < h.size() && contains_subgraph(h, l)) {
        out.found = true;
        out.pair = detail::fig1_pair(l, h, "search");
        out.relation = "g1 is a subgraph of g2";
        return out;
      }
  return out;
}

}  // namespace steklov
