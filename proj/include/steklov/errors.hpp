#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steklov {

enum class ValidationKind {
  out_of_range,
  self_loop,
  multi_edge,
  disconnected,
  boundary_boundary_edge,
  disconnected_interior,
  empty_boundary,
  not_a_tree,
  edge_absent,
  illegal_removal,
  bad_parameter,
};

inline std::string_view to_string(ValidationKind kind) {
  switch (kind) {
    case ValidationKind::out_of_range: return "vertex id out of range";
    case ValidationKind::self_loop: return "self-loop";
    case ValidationKind::multi_edge: return "multi-edge";
    case ValidationKind::disconnected: return "graph is disconnected";
    case ValidationKind::boundary_boundary_edge: return "edge joins two boundary vertices";
    case ValidationKind::disconnected_interior: return "interior is disconnected";
    case ValidationKind::empty_boundary: return "boundary is empty";
    case ValidationKind::not_a_tree: return "graph is not a tree";
    case ValidationKind::edge_absent: return "edge absent";
    case ValidationKind::illegal_removal: return "removal would break the standing assumptions";
    case ValidationKind::bad_parameter: return "parameter out of range";
  }
  return "validation error";
}

/// Input violates a graph invariant or an operation precondition (CLI exit 2).
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ValidationKind kind, const std::string& detail)
      : std::invalid_argument(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}
  explicit ValidationError(ValidationKind kind) : ValidationError(kind, "") {}

  ValidationKind kind() const noexcept { return kind_; }

 private:
  ValidationKind kind_;
};

/// Malformed serialized input (CLI exit 3).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The flow system degenerates at this lambda (CLI exit 4).
class ResonanceError : public std::runtime_error {
 public:
  enum class Kind { resonant_lambda, near_singular, normalization_failure };

  ResonanceError(Kind kind, double lambda, double measure, const std::string& what)
      : std::runtime_error(what), kind_(kind), lambda_(lambda), measure_(measure) {}

  Kind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  /// Offending transfer coefficient, smallest singular value estimate, or f(w).
  double measure() const noexcept { return measure_; }

 private:
  Kind kind_;
  double lambda_;
  double measure_;
};

/// Eigensolver hit its sweep cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A guaranteed mathematical property failed to materialize; indicates a bug.
class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace steklov
