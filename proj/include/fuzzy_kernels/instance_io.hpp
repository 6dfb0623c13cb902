#pragma once

// Plain-text instance files: a digraph, optionally a fuzzy model and vertex names.
//
//   digraph <n>
//   edge <u> <v> <fwd|bwd|bi>
//   model <linear|circular>
//   pos <v> <p>/<q>
//   interval <p1>/<q1> <p2>/<q2>
//   name <v> <token>
//
// One directive per line; `#` starts a comment.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/fuzzy_model.hpp>
#include <fuzzy_kernels/numeric.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fuzzy_kernels {

struct Instance {
  Digraph graph;
  std::optional<FuzzyModel> model;
  std::vector<std::string> names;  // empty string = unnamed

  std::string label(Vertex v) const {
    const auto i = static_cast<std::size_t>(v);
    if (i < names.size() && !names[i].empty()) return names[i];
    return std::to_string(v);
  }

  /// Resolves a vertex written as an id or a name.
  std::optional<Vertex> lookup(const std::string& token) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == token) return static_cast<Vertex>(i);
    try {
      std::size_t used = 0;
      const long v = std::stol(token, &used);
      if (used == token.size() && v >= 0 && v < graph.order()) return static_cast<Vertex>(v);
    } catch (const std::logic_error&) {
    }
    return std::nullopt;
  }
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace detail

inline Instance parse_instance(std::istream& in) {
  Instance inst;
  std::optional<int> n;
  std::vector<std::pair<Vertex, Vertex>> arcs;
  std::map<std::pair<Vertex, Vertex>, int> edge_line;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + what);
  };
  auto vertex = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used == tok.size() && v >= 0 && v < *n) return static_cast<Vertex>(v);
    } catch (const std::logic_error&) {
    }
    fail("vertex '" + tok + "' out of range");
    return Vertex{-1};
  };
  auto rational = [&](const std::string& tok) {
    auto r = parse_rational(tok);
    if (!r) fail("bad rational '" + tok + "'");
    return *r;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(detail::strip_comment(line));
    std::vector<std::string> t;
    for (std::string w; ls >> w;) t.push_back(w);
    if (t.empty()) continue;
    const std::string& d = t[0];
    auto arity = [&](std::size_t k) {
      if (t.size() != k + 1) fail("'" + d + "' takes " + std::to_string(k) + " argument(s)");
    };
    if (d == "digraph") {
      arity(1);
      if (n) fail("second 'digraph' line");
      try {
        std::size_t used = 0;
        const long v = std::stol(t[1], &used);
        if (used != t[1].size() || v < 0) throw std::invalid_argument("count");
        n = static_cast<int>(v);
      } catch (const std::logic_error&) {
        fail("bad vertex count '" + t[1] + "'");
      }
      inst.names.assign(static_cast<std::size_t>(*n), "");
      continue;
    }
    if (!n) fail("expected 'digraph <n>' first");
    if (d == "edge") {
      arity(3);
      const Vertex u = vertex(t[1]), v = vertex(t[2]);
      if (u == v) fail("self-loop on " + t[1]);
      const auto key = std::minmax(u, v);
      if (auto it = edge_line.find(key); it != edge_line.end())
        fail("duplicate edge " + t[1] + " " + t[2] + " (first on line " + std::to_string(it->second) + ")");
      edge_line[key] = line_no;
      if (t[3] == "fwd") arcs.emplace_back(u, v);
      else if (t[3] == "bwd") arcs.emplace_back(v, u);
      else if (t[3] == "bi") {
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
      } else fail("orientation must be fwd, bwd or bi, got '" + t[3] + "'");
    } else if (d == "model") {
      arity(1);
      if (inst.model) fail("second 'model' line");
      FuzzyModel m;
      if (t[1] == "linear") m.flavor = Flavor::Linear;
      else if (t[1] == "circular") m.flavor = Flavor::Circular;
      else fail("model flavor must be linear or circular");
      m.positions.resize(static_cast<std::size_t>(*n));
      inst.model = std::move(m);
    } else if (d == "pos") {
      arity(2);
      if (!inst.model) fail("'pos' before 'model'");
      const Vertex v = vertex(t[1]);
      auto& slot = inst.model->positions[static_cast<std::size_t>(v)];
      if (slot) fail("second position for vertex " + t[1]);
      slot = rational(t[2]);
    } else if (d == "interval") {
      arity(2);
      if (!inst.model) fail("'interval' before 'model'");
      inst.model->intervals.push_back({rational(t[1]), rational(t[2])});
    } else if (d == "name") {
      arity(2);
      const Vertex v = vertex(t[1]);
      if (std::any_of(inst.names.begin(), inst.names.end(), [&](const std::string& s) { return s == t[2]; }))
        fail("name '" + t[2] + "' already used");
      inst.names[static_cast<std::size_t>(v)] = t[2];
    } else {
      fail("unknown directive '" + d + "'");
    }
  }
  if (!n) throw Error(ErrorKind::Parse, "missing 'digraph <n>' line");
  inst.graph = Digraph(*n, arcs);
  return inst;
}

inline Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

/// Canonical form: edges sorted with u < v, names, then model positions by vertex and intervals in order.
inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  const Digraph& d = inst.graph;
  out << "digraph " << d.order() << "\n";
  for (Vertex u = 0; u < d.order(); ++u)
    for (Vertex v : d.neighbours(u)) {
      if (v < u) continue;
      const bool f = d.has_arc(u, v), b = d.has_arc(v, u);
      out << "edge " << u << " " << v << " " << (f && b ? "bi" : f ? "fwd" : "bwd") << "\n";
    }
  for (std::size_t i = 0; i < inst.names.size(); ++i)
    if (!inst.names[i].empty()) out << "name " << i << " " << inst.names[i] << "\n";
  if (inst.model) {
    out << "model " << to_string(inst.model->flavor) << "\n";
    for (std::size_t i = 0; i < inst.model->positions.size(); ++i)
      if (inst.model->positions[i]) out << "pos " << i << " " << to_string(*inst.model->positions[i]) << "\n";
    for (const auto& arc : inst.model->intervals)
      out << "interval " << to_string(arc.start) << " " << to_string(arc.end) << "\n";
  }
  return out.str();
}

}  // namespace fuzzy_kernels
