#pragma once

#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

namespace fuzzy_kernels {

enum class Orientation { Forward, Backward, Bidirectional };

/// Simple loopless digraph on vertices 0..n-1. A bidirectional edge is stored as two arcs.
/// Immutable once built; out/in/undirected adjacency lists are sorted.
class Digraph {
 public:
  Digraph() = default;

  explicit Digraph(int n) : n_(n), out_(static_cast<std::size_t>(n)), in_(static_cast<std::size_t>(n)),
                            und_(static_cast<std::size_t>(n)) {
    if (n < 0) throw Error(ErrorKind::PreconditionViolation, "negative vertex count");
  }

  /// Builds from directed arcs (u, v). Duplicate arcs are rejected.
  Digraph(int n, const std::vector<std::pair<Vertex, Vertex>>& arcs) : Digraph(n) {
    for (auto [u, v] : arcs) {
      check_pair(u, v);
      out_[static_cast<std::size_t>(u)].push_back(v);
      in_[static_cast<std::size_t>(v)].push_back(u);
    }
    finish();
  }

  int order() const { return n_; }
  std::size_t arc_count() const { return arcs_; }
  std::size_t edge_count() const { return edges_; }
  /// |V| + |E|, counting each adjacent pair once.
  std::size_t size() const { return static_cast<std::size_t>(n_) + edges_; }

  const std::vector<Vertex>& out(Vertex v) const { return out_[static_cast<std::size_t>(v)]; }
  const std::vector<Vertex>& in(Vertex v) const { return in_[static_cast<std::size_t>(v)]; }
  const std::vector<Vertex>& neighbours(Vertex v) const { return und_[static_cast<std::size_t>(v)]; }

  bool has_arc(Vertex u, Vertex v) const {
    const auto& o = out(u);
    return std::binary_search(o.begin(), o.end(), v);
  }
  bool adjacent(Vertex u, Vertex v) const {
    const auto& o = neighbours(u);
    return std::binary_search(o.begin(), o.end(), v);
  }

  std::vector<std::pair<Vertex, Vertex>> arcs() const {
    std::vector<std::pair<Vertex, Vertex>> result;
    result.reserve(arcs_);
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : out(u)) result.emplace_back(u, v);
    return result;
  }

  bool all_bidirectional() const { return arcs_ == 2 * edges_; }

  VertexSet all() const { return VertexSet::full(static_cast<std::size_t>(n_)); }
  VertexSet empty_set() const { return VertexSet(static_cast<std::size_t>(n_)); }

 private:
  void check_pair(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw Error(ErrorKind::PreconditionViolation,
                  "arc (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) throw Error(ErrorKind::PreconditionViolation, "self-loop at " + std::to_string(u));
  }

  void finish() {
    arcs_ = 0;
    edges_ = 0;
    for (Vertex v = 0; v < n_; ++v) {
      auto& o = out_[static_cast<std::size_t>(v)];
      std::sort(o.begin(), o.end());
      if (std::adjacent_find(o.begin(), o.end()) != o.end())
        throw Error(ErrorKind::PreconditionViolation, "duplicate arc from " + std::to_string(v));
      std::sort(in_[static_cast<std::size_t>(v)].begin(), in_[static_cast<std::size_t>(v)].end());
      arcs_ += o.size();
    }
    for (Vertex v = 0; v < n_; ++v) {
      auto& u = und_[static_cast<std::size_t>(v)];
      const auto& o = out(v);
      const auto& i = in(v);
      u.clear();
      std::set_union(o.begin(), o.end(), i.begin(), i.end(), std::back_inserter(u));
      edges_ += u.size();
    }
    edges_ /= 2;
  }

  int n_ = 0;
  std::size_t arcs_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  std::vector<std::vector<Vertex>> und_;
};

/// Accumulates oriented edges and produces a Digraph.
class DigraphBuilder {
 public:
  explicit DigraphBuilder(int n) : n_(n) {}

  DigraphBuilder& add_edge(Vertex u, Vertex v, Orientation o = Orientation::Forward) {
    if (o != Orientation::Backward) arcs_.emplace_back(u, v);
    if (o != Orientation::Forward) arcs_.emplace_back(v, u);
    return *this;
  }
  DigraphBuilder& add_arc(Vertex u, Vertex v) {
    arcs_.emplace_back(u, v);
    return *this;
  }

  Digraph build() const { return Digraph(n_, arcs_); }

 private:
  int n_;
  std::vector<std::pair<Vertex, Vertex>> arcs_;
};

/// Bitset views of a digraph's adjacency, for algorithms on graphs of a few hundred vertices.
struct DenseAdjacency {
  std::vector<VertexSet> out;  // out[v]: heads of arcs leaving v
  std::vector<VertexSet> in;   // in[v]: tails of arcs entering v
  std::vector<VertexSet> und;  // und[v]: undirected neighbours

  explicit DenseAdjacency(const Digraph& d) {
    const auto n = static_cast<std::size_t>(d.order());
    out.assign(n, VertexSet(n));
    in.assign(n, VertexSet(n));
    und.assign(n, VertexSet(n));
    for (Vertex u = 0; u < d.order(); ++u)
      for (Vertex v : d.out(u)) {
        out[static_cast<std::size_t>(u)].insert(v);
        in[static_cast<std::size_t>(v)].insert(u);
        und[static_cast<std::size_t>(u)].insert(v);
        und[static_cast<std::size_t>(v)].insert(u);
      }
  }
};

/// Union of the out-neighbourhoods of the members of s.
inline VertexSet out_neighbours(const Digraph& d, const VertexSet& s) {
  VertexSet result(static_cast<std::size_t>(d.order()));
  s.for_each([&](Vertex v) {
    for (Vertex w : d.out(v)) result.insert(w);
  });
  return result;
}

/// Union of the in-neighbourhoods of the members of s: the vertices that s absorbs from outside.
inline VertexSet in_neighbours(const Digraph& d, const VertexSet& s) {
  VertexSet result(static_cast<std::size_t>(d.order()));
  s.for_each([&](Vertex v) {
    for (Vertex w : d.in(v)) result.insert(w);
  });
  return result;
}

/// True iff every b in `b` lies in `a` or has an arc into `a`.
inline bool absorbs(const Digraph& d, const VertexSet& a, const VertexSet& b) {
  bool ok = true;
  b.for_each([&](Vertex v) {
    if (!ok || a.contains(v)) return;
    const auto& o = d.out(v);
    ok = std::any_of(o.begin(), o.end(), [&](Vertex w) { return a.contains(w); });
  });
  return ok;
}

inline bool is_independent(const Digraph& d, const VertexSet& s) {
  bool ok = true;
  s.for_each([&](Vertex v) {
    if (!ok) return;
    for (Vertex w : d.out(v))
      if (s.contains(w)) {
        ok = false;
        return;
      }
  });
  return ok;
}

inline bool is_kernel(const Digraph& d, const VertexSet& k) {
  return is_independent(d, k) && absorbs(d, k, d.all());
}

struct InducedSubdigraph {
  Digraph graph;
  std::vector<Vertex> to_original;    // new id -> old id
  std::vector<Vertex> from_original;  // old id -> new id, or -1

  VertexSet lift(const VertexSet& s) const {
    VertexSet out(from_original.size());
    s.for_each([&](Vertex v) { out.insert(to_original[static_cast<std::size_t>(v)]); });
    return out;
  }
  VertexSet project(const VertexSet& s) const {
    VertexSet out(to_original.size());
    s.for_each([&](Vertex v) {
      if (from_original[static_cast<std::size_t>(v)] >= 0) out.insert(from_original[static_cast<std::size_t>(v)]);
    });
    return out;
  }
};

/// D[S], with new ids assigned in increasing order of old ids.
inline InducedSubdigraph induced_subdigraph(const Digraph& d, const VertexSet& s) {
  InducedSubdigraph result;
  result.from_original.assign(static_cast<std::size_t>(d.order()), -1);
  s.for_each([&](Vertex v) {
    result.from_original[static_cast<std::size_t>(v)] = static_cast<Vertex>(result.to_original.size());
    result.to_original.push_back(v);
  });
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (Vertex u : result.to_original)
    for (Vertex v : d.out(u))
      if (s.contains(v))
        arcs.emplace_back(result.from_original[static_cast<std::size_t>(u)],
                          result.from_original[static_cast<std::size_t>(v)]);
  result.graph = Digraph(static_cast<int>(result.to_original.size()), arcs);
  return result;
}

}  // namespace fuzzy_kernels
