#pragma once

#include <cstdlib>
#include <string>

#include <nlohmann/json.hpp>

namespace steklov {

/// Central tolerance bundle. Every report echoes the bundle it was produced with.
struct Tolerances {
  double eigen_offdiag = 1e-13;   // Jacobi stop: off-diagonal Frobenius norm, relative to ||A||_F
  int eigen_max_sweeps = 100;
  double assertion = 1e-8;        // theorem inequalities
  double agreement = 1e-8;        // two independent routes to one number
  double equality = 1e-8;         // "equality branch" vs "strict branch"
  double multiplicity = 1e-8;     // eigenvalue grouping
  double vanishing = 1e-7;        // eigenvector value at a forced zero
  double resonance = 1e-12;       // |c_k| below this is a resonance
  double bisection = 1e-11;       // bracket width for sigma
  double witness = 1e-9;          // sigma witness: f(x)=0 and positivity

  /// Defaults, overridden by STEKLOV_TOL_{EIGEN,ASSERT,AGREEMENT} when set.
  static Tolerances from_env() {
    Tolerances t;
    auto read = [](const char* name, double& target) {
      if (const char* raw = std::getenv(name)) {
        char* end = nullptr;
        double v = std::strtod(raw, &end);
        if (end != raw && v > 0.0) target = v;
      }
    };
    read("STEKLOV_TOL_EIGEN", t.eigen_offdiag);
    read("STEKLOV_TOL_ASSERT", t.assertion);
    read("STEKLOV_TOL_AGREEMENT", t.agreement);
    return t;
  }

  nlohmann::json to_json() const {
    return {{"eigen_offdiag", eigen_offdiag}, {"eigen_max_sweeps", eigen_max_sweeps},
            {"assertion", assertion},         {"agreement", agreement},
            {"equality", equality},           {"multiplicity", multiplicity},
            {"vanishing", vanishing},         {"resonance", resonance},
            {"bisection", bisection},         {"witness", witness}};
  }
};

}  // namespace steklov
