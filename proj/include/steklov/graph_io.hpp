#pragma once

// Text formats: edge list (boundary-carrying), graph6 (structure only), DOT (export).
//
// Edge list:
//   n b
//   <b boundary ids>
//   u v          (one edge per line)
// Lines starting with '#' are ignored.

#include <cctype>
#include <istream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "steklov/graph.hpp"

namespace steklov {

inline std::string to_edge_list(const BoundaryGraph& g) {
  std::ostringstream os;
  os << g.size() << ' ' << g.boundary().size() << '\n';
  for (std::size_t i = 0; i < g.boundary().size(); ++i)
    os << (i ? " " : "") << g.boundary()[i];
  os << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

inline BoundaryGraph parse_edge_list(std::string_view text, Validation mode = Validation::strict) {
  std::string cleaned;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '#') continue;
    cleaned += line;
    cleaned += '\n';
  }
  std::istringstream in(cleaned);
  std::vector<long long> tok;
  for (std::string t; in >> t;) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      throw ParseError("edge list: non-integer token '" + t + "'");
    }
    if (used != t.size()) throw ParseError("edge list: non-integer token '" + t + "'");
    tok.push_back(v);
  }
  if (tok.size() < 2) throw ParseError("edge list: missing header 'n b'");
  const long long n = tok[0];
  const long long b = tok[1];
  if (n < 0 || b < 0 || n > 1'000'000) throw ParseError("edge list: bad header");
  if (static_cast<long long>(tok.size()) < 2 + b) throw ParseError("edge list: truncated boundary");
  std::vector<Vertex> boundary(tok.begin() + 2, tok.begin() + 2 + b);
  const std::size_t rest = tok.size() - 2 - static_cast<std::size_t>(b);
  if (rest % 2 != 0) throw ParseError("edge list: dangling edge endpoint");
  std::vector<Edge> edges;
  for (std::size_t i = 2 + static_cast<std::size_t>(b); i < tok.size(); i += 2)
    edges.push_back({static_cast<Vertex>(tok[i]), static_cast<Vertex>(tok[i + 1])});
  return BoundaryGraph::build(static_cast<int>(n), std::move(edges), std::move(boundary), mode);
}

inline std::string to_graph6(const BoundaryGraph& g) {
  const int n = g.size();
  std::string out;
  if (n <= 62) {
    out += static_cast<char>(n + 63);
  } else if (n <= 258047) {
    out += static_cast<char>(126);
    for (int shift : {12, 6, 0}) out += static_cast<char>(((n >> shift) & 63) + 63);
  } else {
    throw ValidationError(ValidationKind::bad_parameter, "graph6 writer limited to n <= 258047");
  }
  int acc = 0, bits = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++bits == 6) {
        out += static_cast<char>(acc + 63);
        acc = bits = 0;
      }
    }
  }
  if (bits > 0) out += static_cast<char>((acc << (6 - bits)) + 63);
  return out;
}

/// graph6 carries no boundary; the degree-1 default is applied.
inline BoundaryGraph parse_graph6(std::string_view text, Validation mode = Validation::strict) {
  std::string s(text);
  if (s.rfind(">>graph6<<", 0) == 0) s = s.substr(10);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) throw ParseError("graph6: empty input");
  for (char c : s)
    if (c < 63 || c > 126) throw ParseError("graph6: byte out of range");
  std::size_t pos = 0;
  int n = 0;
  if (s[0] != 126) {
    n = s[0] - 63;
    pos = 1;
  } else {
    if (s.size() < 4 || s[1] == 126) throw ParseError("graph6: unsupported size prefix");
    n = ((s[1] - 63) << 12) | ((s[2] - 63) << 6) | (s[3] - 63);
    pos = 4;
  }
  const std::size_t nbits = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1 > 0 ? n - 1 : 0) / 2;
  const std::size_t need = (nbits + 5) / 6;
  if (s.size() - pos != need)
    throw ParseError("graph6: expected " + std::to_string(need) + " data bytes, got " +
                     std::to_string(s.size() - pos));
  std::vector<Edge> edges;
  std::size_t k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const int byte = s[pos + k / 6] - 63;
      if ((byte >> (5 - static_cast<int>(k % 6))) & 1) edges.push_back({i, j});
    }
  }
  if (nbits % 6 != 0) {
    const int last = s.back() - 63;
    const int pad = 6 - static_cast<int>(nbits % 6);
    if (last & ((1 << pad) - 1)) throw ParseError("graph6: nonzero padding bits");
  }
  return BoundaryGraph::with_leaf_boundary(n, std::move(edges), mode);
}

/// Boundary vertices drawn as boxes.
inline std::string to_dot(const BoundaryGraph& g, std::string_view name = "G") {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (Vertex v = 0; v < g.size(); ++v)
    os << "  " << v << " [shape=" << (g.is_boundary(v) ? "box" : "circle") << "];\n";
  for (const auto& e : g.edges()) os << "  " << e.u << " -- " << e.v << ";\n";
  os << "}\n";
  return os.str();
}

/// Auto-detect edge list (leading digit or '#') versus graph6.
inline BoundaryGraph parse_graph(std::string_view text, Validation mode = Validation::strict) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty graph input");
  const char c = text[first];
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '#' || c == '-')
    return parse_edge_list(text, mode);
  return parse_graph6(text, mode);
}

inline BoundaryGraph read_graph(std::istream& in, Validation mode = Validation::strict) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_graph(text, mode);
}

}  // namespace steklov
