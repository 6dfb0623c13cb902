#pragma once

// Shared fixtures and a subset-enumeration oracle that only looks at the raw arc list.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/fuzzy_model.hpp>
#include <fuzzy_kernels/numeric.hpp>
#include <fuzzy_kernels/query.hpp>
#include <fuzzy_kernels/random.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fk_test {

using namespace fuzzy_kernels;

struct ArcMatrix {
  int n;
  std::vector<std::uint32_t> out;  // out[u] bit v: arc u -> v
  std::vector<std::uint32_t> und;

  explicit ArcMatrix(const Digraph& d) : n(d.order()), out(static_cast<std::size_t>(n)), und(static_cast<std::size_t>(n)) {
    for (auto [u, v] : d.arcs()) {
      out[static_cast<std::size_t>(u)] |= 1u << v;
      und[static_cast<std::size_t>(u)] |= 1u << v;
      und[static_cast<std::size_t>(v)] |= 1u << u;
    }
  }
  bool independent(std::uint32_t s) const {
    for (int v = 0; v < n; ++v)
      if ((s >> v & 1) && (und[static_cast<std::size_t>(v)] & s)) return false;
    return true;
  }
  bool kernel(std::uint32_t s) const {
    if (!independent(s)) return false;
    for (int v = 0; v < n; ++v)
      if (!(s >> v & 1) && !(out[static_cast<std::size_t>(v)] & s)) return false;
    return true;
  }
  bool maximal_independent(std::uint32_t s) const {
    if (!independent(s)) return false;
    for (int v = 0; v < n; ++v)
      if (!(s >> v & 1) && !(und[static_cast<std::size_t>(v)] & s)) return false;
    return true;
  }
};

inline VertexSet from_mask(int n, std::uint32_t s) {
  VertexSet k(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    if (s >> v & 1) k.insert(v);
  return k;
}

/// Every kernel, by testing all 2^n subsets.
inline std::vector<VertexSet> subset_kernels(const Digraph& d) {
  const ArcMatrix a(d);
  std::vector<VertexSet> out;
  for (std::uint32_t s = 0; s < (1u << a.n); ++s)
    if (a.kernel(s)) out.push_back(from_mask(a.n, s));
  return out;
}

inline std::vector<VertexSet> subset_maximal_independent(const Digraph& d) {
  const ArcMatrix a(d);
  std::vector<VertexSet> out;
  for (std::uint32_t s = 0; s < (1u << a.n); ++s)
    if (a.maximal_independent(s)) out.push_back(from_mask(a.n, s));
  return out;
}

inline bool query_holds(const KernelQuery& q, const VertexSet& k) {
  if (q.lower && !q.lower->is_subset_of(k)) return false;
  if (q.upper && !k.is_subset_of(*q.upper)) return false;
  if (q.size && static_cast<int>(k.size()) != *q.size) return false;
  if (q.target) {
    Rational w = 0;
    for (Vertex v : k.members()) w += (*q.weights)[static_cast<std::size_t>(v)];
    if (w != *q.target) return false;
  }
  return true;
}

inline std::map<int, BigInt> size_histogram(const std::vector<VertexSet>& sets) {
  std::map<int, BigInt> h;
  for (const auto& k : sets) h[static_cast<int>(k.size())] += 1;
  return h;
}

/// Largest clique of the underlying graph, by subset enumeration.
inline int clique_number(const Digraph& d) {
  const ArcMatrix a(d);
  int best = 0;
  for (std::uint32_t s = 0; s < (1u << a.n); ++s) {
    bool clique = true;
    for (int v = 0; v < a.n && clique; ++v)
      if ((s >> v & 1) && ((a.und[static_cast<std::size_t>(v)] | (1u << v)) & s) != s) clique = false;
    if (clique) best = std::max(best, __builtin_popcount(s));
  }
  return best;
}

inline Rational r(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

// The six-vertex linear example: a, b at 1/5; c, d at 2/5; e at 3/5; f at 4/5.
inline Digraph six_vertex_graph() {
  const auto bi = Orientation::Bidirectional;
  DigraphBuilder b(6);
  b.add_edge(0, 1, bi).add_edge(1, 2, bi).add_edge(2, 3, bi).add_edge(3, 0, bi).add_edge(2, 4, bi).add_edge(3, 4, bi);
  b.add_edge(4, 5);
  return b.build();
}

inline FuzzyModel six_vertex_model() {
  FuzzyModel m;
  m.flavor = Flavor::Linear;
  m.positions = {r(1, 5), r(1, 5), r(2, 5), r(2, 5), r(3, 5), r(4, 5)};
  m.intervals = {{r(1, 5), r(2, 5)}, {r(3, 10), r(7, 10)}, {r(1, 2), r(9, 10)}};
  return m;
}

/// Path 0-1-...-(n-1) at positions (i+1)/(n+1), one slightly widened interval per edge.
inline FuzzyModel path_model(int n) {
  FuzzyModel m;
  m.flavor = Flavor::Linear;
  const Rational eps = r(1, 4 * (n + 1));
  for (int i = 0; i < n; ++i) m.positions.push_back(r(i + 1, n + 1));
  for (int i = 0; i + 1 < n; ++i) m.intervals.push_back({r(i + 1, n + 1) - eps, r(i + 2, n + 1) + eps});
  return m;
}

inline Digraph path_graph(int n, Orientation o = Orientation::Bidirectional) {
  DigraphBuilder b(n);
  for (int i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1, o);
  return b.build();
}

/// Cycle i -> i+1 (mod n) with the given orientation.
inline Digraph cycle_graph(int n, Orientation o) {
  DigraphBuilder b(n);
  for (int i = 0; i < n; ++i) b.add_edge(i, (i + 1) % n, o);
  return b.build();
}

/// Circular model of a cycle: vertex i at i/n, one slightly widened arc per edge.
inline FuzzyModel cycle_model(int n) {
  FuzzyModel m;
  m.flavor = Flavor::Circular;
  const Rational eps = r(1, 4 * n);
  for (int i = 0; i < n; ++i) m.positions.push_back(r(i, n));
  for (int i = 0; i < n; ++i) m.intervals.push_back({wrap_unit(r(i, n) - eps), wrap_unit(r(i + 1, n) + eps)});
  return m;
}

/// Random S, T, weights, target and size, all optional.
inline KernelQuery random_query(int n, std::uint64_t seed) {
  Rng rng(seed);
  KernelQuery q;
  if (rng.chance(0.5)) {
    VertexSet s(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
      if (rng.chance(0.15)) s.insert(v);
    q.lower = s;
  }
  if (rng.chance(0.5)) {
    VertexSet t = VertexSet::full(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
      if (rng.chance(0.15)) t.erase(v);
    q.upper = t;
  }
  if (rng.chance(0.6)) {
    std::vector<Rational> w;
    for (int v = 0; v < n; ++v) w.push_back(r(rng.uniform_int(-2, 3), rng.uniform_int(1, 2)));
    q.weights = w;
    if (rng.chance(0.6)) q.target = r(rng.uniform_int(-2, 4));
  }
  if (rng.chance(0.3)) q.size = rng.uniform_int(1, 4);
  return q;
}

}  // namespace fk_test
