#pragma once

// steklov command line: spectrum, sigma, flow, verify, hunt, generate.
// Exit codes: 0 ok, 1 internal error, 2 validation/usage, 3 parse, 4 resonance, 5 violation.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "steklov/steklov.hpp"

namespace steklov::cli {

enum Exit : int { ok = 0, internal = 1, validation = 2, parse = 3, resonance = 4, violation = 5 };

/// %.12g (or fewer digits) with |x| < 1e-12 printed as 0.
inline std::string num(double x, int digits = 12) {
  if (std::abs(x) < 1e-12) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v[i]);
  return out;
}

struct Input {
  std::string gen;
  std::string path;
  bool relaxed = false;
  std::uint64_t seed = 1;  // completes a one-argument random:n spec

  BoundaryGraph load(std::istream& in) const {
    if (!gen.empty() && !path.empty())
      throw ValidationError(ValidationKind::bad_parameter, "give either --gen or --input, not both");
    const auto mode = relaxed ? Validation::relaxed : Validation::strict;
    if (!gen.empty()) {
      if (gen.rfind("random:", 0) == 0 && gen.find(',') == std::string::npos)
        return generate(gen + "," + std::to_string(seed));
      return generate(gen);
    }
    if (path.empty() || path == "-") return read_graph(in, mode);
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    return read_graph(f, mode);
  }
};

/// "leaf" (smallest boundary id), "center" (first tree center), "vN" or "N".
inline Vertex resolve_vertex(const BoundaryGraph& g, const std::string& spec) {
  if (spec == "leaf") return g.boundary().front();
  if (spec == "center") {
    require_tree(g);
    return centers(g).front();
  }
  std::string digits = (!spec.empty() && spec[0] == 'v') ? spec.substr(1) : spec;
  std::size_t used = 0;
  int v = -1;
  try {
    v = std::stoi(digits, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (digits.empty() || used != digits.size())
    throw ValidationError(ValidationKind::bad_parameter, "bad vertex '" + spec + "'");
  require_vertex(g, v);
  return v;
}

inline void add_input(CLI::App* sub, Input& in, bool with_seed = true) {
  sub->add_option("--gen", in.gen, "named generator, e.g. path:4, ball:2,2, random:10,7");
  if (with_seed) sub->add_option("--seed", in.seed, "seed for random:n");
  sub->add_option("--input", in.path, "edge-list or graph6 file ('-' for stdin)");
  sub->add_flag("--relaxed", in.relaxed, "allow two-vertex and other relaxed graphs");
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
  Tolerances tol = Tolerances::from_env();
};

// ---------------------------------------------------------------------------

inline int cmd_spectrum(Context& c, const Input& input, bool json, bool vectors, const std::string& format) {
  const auto g = input.load(c.in);
  if (format == "dot") {
    c.out << to_dot(g);
    return ok;
  }
  const auto s = steklov_spectrum(g, c.tol);
  if (json || format == "json") {
    auto j = spectrum_to_json(s, vectors);
    j["tolerances"] = c.tol.to_json();
    c.out << j.dump(2) << '\n';
    return ok;
  }
  c.out << join(s.eigenvalues) << '\n';
  if (vectors)
    for (std::size_t k = 1; k <= s.size(); ++k) c.out << join(s.boundary_vector(k)) << '\n';
  return ok;
}

inline int cmd_sigma(Context& c, const Input& input, const std::string& at, bool json) {
  const auto g = input.load(c.in);
  const Vertex x = resolve_vertex(g, at);
  const auto d = sigma(g, x, SigmaMethod::doubling, c.tol);
  const auto b = sigma(g, x, SigmaMethod::bisection, c.tol);
  const double delta = std::abs(d.sigma - b.sigma);
  if (json) {
    nlohmann::json j{{"x", x},
                     {"doubling", d.sigma},
                     {"bisection", b.sigma},
                     {"delta", delta},
                     {"sigma1", std::isfinite(b.sigma1) ? nlohmann::json(b.sigma1) : nlohmann::json("inf")},
                     {"witness", flow_to_json(g, b.witness)},
                     {"tolerances", c.tol.to_json()}};
    c.out << j.dump(2) << '\n';
  } else {
    // bisection stops at 1e-11, so ten digits
    c.out << num(d.sigma, 10) << " / " << num(b.sigma, 10) << " (doubling/bisection)\n";
    c.out << "delta " << num(delta) << '\n';
  }
  return delta < c.tol.agreement ? ok : violation;
}

inline int cmd_flow(Context& c, const Input& input, const std::string& to, double lambda,
                    const std::string& norm, bool dense, bool json) {
  const auto g = input.load(c.in);
  const Vertex x = resolve_vertex(g, to);
  std::optional<Vertex> w;
  if (!norm.empty()) w = resolve_vertex(g, norm);
  const auto f = (dense || !g.is_tree()) ? solve_flow_dense(g, x, lambda, w) : solve_flow(g, x, lambda, w, c.tol);
  if (json) {
    auto j = flow_to_json(g, f);
    j["tolerances"] = c.tol.to_json();
    c.out << j.dump(2) << '\n';
    return ok;
  }
  c.out << "values " << join(f.values) << '\n';
  c.out << "residual " << num(verify_flow(g, f)) << '\n';
  if (g.is_tree()) c.out << "edge_flow_residual " << num(edge_flow_residual(g, f)) << '\n';
  return ok;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::string check;
  Input input;
  std::string at;
  int random_trees = 0;
  int n_min = 4;
  int n_max = 14;
  std::uint64_t seed = 1;
  int D = 0;
  int L = 0;
  std::string out;
};

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"monotonicity", "doubling",        "partition",
                                              "diameter",     "degree_diameter", "dichotomy"};
  return names;
}

inline CheckReport run_check(const VerifyOptions& o, const BoundaryGraph& g, std::uint64_t seed,
                             const Tolerances& tol) {
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<Vertex>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };
  auto vertex_or = [&](const std::vector<Vertex>& from) {
    return o.at.empty() ? pick(from) : resolve_vertex(g, o.at);
  };
  std::vector<Vertex> all(static_cast<std::size_t>(g.size()));
  for (Vertex v = 0; v < g.size(); ++v) all[static_cast<std::size_t>(v)] = v;

  if (o.check == "monotonicity") return check_monotonicity_chain(g, seed, tol);
  if (o.check == "doubling") return check_doubling(g, vertex_or(all), tol);
  if (o.check == "partition") return check_partition(g, vertex_or(g.boundary()), tol);
  if (o.check == "diameter") return check_diameter(g, tol);
  if (o.check == "degree_diameter") {
    int maxdeg = 0;
    for (Vertex v = 0; v < g.size(); ++v) maxdeg = std::max(maxdeg, g.degree(v));
    const int D = o.D > 0 ? o.D : std::max(2, maxdeg - 1);
    const int L = o.L > 0 ? o.L : diameter(g);
    return check_degree_diameter(g, D, L, tol);
  }
  if (o.check == "dichotomy") {
    std::vector<Vertex> inner;
    for (Vertex v = 0; v < g.size(); ++v)
      if (g.degree(v) >= 2) inner.push_back(v);
    return check_branch_dichotomy(g, vertex_or(inner), tol);
  }
  throw ValidationError(ValidationKind::bad_parameter, "unknown check '" + o.check + "'");
}

inline int cmd_verify(Context& c, const VerifyOptions& o) {
  if (std::find(check_names().begin(), check_names().end(), o.check) == check_names().end())
    throw ValidationError(ValidationKind::bad_parameter, "unknown check '" + o.check + "'");
  if (o.n_min < 3 || o.n_max < o.n_min)
    throw ValidationError(ValidationKind::bad_parameter, "need 3 <= nmin <= nmax");
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw ValidationError(ValidationKind::bad_parameter, "cannot write " + o.out);
  }
  int passed = 0, failed = 0, discrepancies = 0;
  std::vector<std::string> failures;
  auto record = [&](const CheckReport& r, const std::string& where) {
    if (file) file << r.to_json().dump() << '\n';
    if (r.pass) ++passed;
    else {
      ++failed;
      failures.push_back(where + ": " + (r.anomalies.empty() ? "failed" : r.anomalies.front()));
    }
    discrepancies += static_cast<int>(r.discrepancies.size());
    for (const auto& d : r.discrepancies) c.out << "discrepancy (" << where << "): " << d << '\n';
  };
  if (o.random_trees > 0) {
    for (int i = 0; i < o.random_trees; ++i) {
      const std::uint64_t s = mix_seed(o.seed, static_cast<std::uint64_t>(i));
      const int n = o.n_min + static_cast<int>(s % static_cast<std::uint64_t>(o.n_max - o.n_min + 1));
      const auto g = random_tree(n, s);
      record(run_check(o, g, mix_seed(s, 1), c.tol), "instance " + std::to_string(i));
    }
  } else {
    const auto g = o.input.load(c.in);
    record(run_check(o, g, o.seed, c.tol), "instance 0");
  }
  c.out << "verify " << o.check << ": " << passed << " passed, " << failed << " failed, " << discrepancies
        << " discrepancies\n";
  if (failed > 0) {
    for (const auto& f : failures) c.err << f << '\n';
    c.err << "reproduce with --seed " << o.seed << '\n';
    return violation;
  }
  return ok;
}

// ---------------------------------------------------------------------------

struct HuntOptions {
  std::string problem;
  HuntConfig cfg;
  Input input;
  std::string resume;
  bool json = false;
};

inline int cmd_hunt(Context& c, HuntOptions o) {
  if (o.problem == "fig1") {
    const auto r = find_fig1(o.cfg.n_max);
    if (!o.cfg.output.empty()) {
      std::ofstream f(o.cfg.output);
      if (!f) throw ValidationError(ValidationKind::bad_parameter, "cannot write " + o.cfg.output);
      f << r.to_json().dump(2) << '\n';
    }
    if (o.json) {
      c.out << r.to_json().dump(2) << '\n';
    } else if (r.found) {
      c.out << "fig1 " << r.pair.label << ": lambda2(g1) = " << num(r.pair.spectrum_g1[1])
            << ", lambda2(g2) = " << num(r.pair.spectrum_g2[1]) << '\n';
      c.out << "relation: " << r.relation << '\n';
      c.out << "pendant-only pairs with the same values: " << r.pendant_search["hits"].size() << '\n';
    } else {
      c.out << "fig1: no pair found up to " << o.cfg.n_max << " vertices\n";
    }
    return ok;
  }
  if (o.problem == "problem1") o.cfg.problem = Problem::trees;
  else if (o.problem == "problem2") o.cfg.problem = Problem::cycles;
  else throw ValidationError(ValidationKind::bad_parameter, "unknown problem '" + o.problem + "'");
  if (!o.input.gen.empty() || !o.input.path.empty()) o.cfg.seed_graph = o.input.load(c.in);

  HuntReport r;
  if (!o.resume.empty()) {
    std::ifstream f(o.resume);
    if (!f) throw ParseError("cannot open " + o.resume);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad report: ") + e.what());
    }
    r = resume_hunt(HuntReport::from_json(j), o.cfg);
  } else {
    r = run_hunt(o.cfg);
  }
  if (o.json) c.out << r.to_json().dump(2) << '\n';
  for (const auto& w : r.warnings) c.err << "warning: " << w << '\n';
  c.out << "hunt " << o.problem << ": " << r.status << ", " << r.cursor << "/" << r.total_instances
        << " instances, " << r.pairs_examined << " pairs, " << r.violations.size() << " violations\n";
  // Violations at k = 2 on trees contradict a proved result.
  if (r.config.problem == Problem::trees) {
    for (const auto& v : r.violations)
      for (const auto& m : v.margins)
        if (m.k == 2 && m.margin() < -r.config.violation_tol) {
          c.err << "k = 2 violation on trees (instance " << v.instance << "), reproduce with --seed "
                << r.config.seed << '\n';
          return violation;
        }
  }
  return ok;
}

inline int cmd_generate(Context& c, const Input& input, const std::string& format) {
  const auto g = input.load(c.in);
  if (format == "graph6") c.out << to_graph6(g) << '\n';
  else if (format == "dot") c.out << to_dot(g);
  else if (format == "edgelist") c.out << to_edge_list(g);
  else throw ValidationError(ValidationKind::bad_parameter, "unknown format '" + format + "'");
  return ok;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Steklov spectra, lambda-flows and monotonicity checks on graphs", "steklov"};
  app.require_subcommand(1);
  Context ctx{out, err, in};

  Input sp_in;
  bool sp_json = false, sp_vectors = false;
  std::string sp_format = "table";
  auto* sp = app.add_subcommand("spectrum", "Steklov eigenvalues");
  add_input(sp, sp_in);
  sp->add_flag("--json", sp_json);
  sp->add_flag("--vectors", sp_vectors, "also print boundary eigenvectors");
  sp->add_option("--format", sp_format)->check(CLI::IsMember({"table", "json", "dot"}));

  Input sg_in;
  std::string sg_at = "leaf";
  bool sg_json = false;
  auto* sg = app.add_subcommand("sigma", "sigma(G,x) by doubling and by bisection");
  add_input(sg, sg_in);
  sg->add_option("--at", sg_at, "leaf | center | vN");
  sg->add_flag("--json", sg_json);

  Input fl_in;
  std::string fl_to = "leaf", fl_norm;
  double fl_lambda = 0.0;
  bool fl_dense = false, fl_json = false;
  auto* fl = app.add_subcommand("flow", "lambda-flow to a vertex");
  add_input(fl, fl_in);
  fl->add_option("--to", fl_to, "target vertex: leaf | center | vN");
  fl->add_option("--lambda", fl_lambda)->required();
  fl->add_option("--norm", fl_norm, "normalization vertex (default: smallest other boundary id)");
  fl->add_flag("--dense", fl_dense, "use the dense solver");
  fl->add_flag("--json", fl_json);

  VerifyOptions vo;
  auto* vf = app.add_subcommand("verify", "run a theorem checker");
  vf->add_option("check", vo.check, "monotonicity | doubling | partition | diameter | degree_diameter | dichotomy")
      ->required();
  add_input(vf, vo.input, false);
  vf->add_option("--at", vo.at, "vertex for doubling, partition or dichotomy");
  vf->add_option("--random-trees", vo.random_trees, "check this many seeded random trees");
  vf->add_option("--nmin", vo.n_min);
  vf->add_option("--nmax", vo.n_max);
  vf->add_option("--seed", vo.seed);
  vf->add_option("--D", vo.D);
  vf->add_option("--L", vo.L);
  vf->add_option("--out", vo.out, "JSON-lines report file");

  HuntOptions ho;
  std::int64_t budget = ho.cfg.budget;
  auto* hu = app.add_subcommand("hunt", "search campaigns: problem1 | problem2 | fig1");
  hu->add_option("problem", ho.problem)->required()->check(CLI::IsMember({"problem1", "problem2", "fig1"}));
  add_input(hu, ho.input, false);
  hu->add_option("--nmax", ho.cfg.n_max);
  hu->add_option("--kmin", ho.cfg.k_min);
  hu->add_option("--kmax", ho.cfg.k_max);
  hu->add_option("--budget", budget);
  hu->add_option("--seed", ho.cfg.seed);
  hu->add_option("--workers", ho.cfg.workers);
  hu->add_option("--out", ho.cfg.output, "report path");
  hu->add_option("--resume", ho.resume, "continue from a previous report");
  hu->add_option("--exhaustive-limit", ho.cfg.exhaustive_limit);
  hu->add_option("--random-per-size", ho.cfg.random_per_size);
  hu->add_flag("--json", ho.json);

  Input ge_in;
  std::string ge_format = "edgelist";
  auto* ge = app.add_subcommand("generate", "write a generated graph");
  add_input(ge, ge_in);
  ge->add_option("--format", ge_format)->check(CLI::IsMember({"edgelist", "graph6", "dot"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return validation;
  }

  try {
    if (*sp) return cmd_spectrum(ctx, sp_in, sp_json, sp_vectors, sp_format);
    if (*sg) return cmd_sigma(ctx, sg_in, sg_at, sg_json);
    if (*fl) return cmd_flow(ctx, fl_in, fl_to, fl_lambda, fl_norm, fl_dense, fl_json);
    if (*vf) {
      vo.input.seed = vo.seed;
      return cmd_verify(ctx, vo);
    }
    if (*hu) {
      ho.cfg.budget = budget;
      ho.input.seed = ho.cfg.seed;
      return cmd_hunt(ctx, ho);
    }
    if (*ge) return cmd_generate(ctx, ge_in, ge_format);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return validation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return parse;
  } catch (const ResonanceError& e) {
    err << "resonance at lambda = " << num(e.lambda()) << ": " << e.what() << '\n';
    return resonance;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
  return internal;
}

}  // namespace steklov::cli
