#pragma once

// Kernel counting on fuzzy linear interval graphs through the labelled subproblem DAG.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/fuzzy_model.hpp>
#include <fuzzy_kernels/numeric.hpp>
#include <fuzzy_kernels/query.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace fuzzy_kernels {

// ---------------------------------------------------------------------------
// Direct evaluation of the candidate sets

inline VertexSet lambda(const Digraph& d, const FuzzyModel& m, const WeakOrder& order, Vertex x, Vertex y) {
  VertexSet result = d.empty_set();
  if (order.rank_of(x) >= order.rank_of(y)) return result;
  const VertexSet dy = delta(m, order, y);
  const VertexSet range = vertex_interval(order, x, y, false, false);
  range.for_each([&](Vertex c) {
    if (d.adjacent(c, x) || d.adjacent(c, y) || dy.contains(c)) return;
    VertexSet pair(static_cast<std::size_t>(d.order()), {c, y});
    if (absorbs(d, pair, vertex_interval(order, c, y, false, true))) result.insert(c);
  });
  return result;
}

inline VertexSet lambda_prime(const Digraph& d, const FuzzyModel& m, const WeakOrder& order, Vertex x, Vertex mid,
                              Vertex y) {
  if (!delta(m, order, y).contains(mid) || d.adjacent(mid, x) || d.adjacent(mid, y))
    throw Error(ErrorKind::PreconditionViolation, "middle vertex must lie in delta(y) outside N{x,y}");
  VertexSet result = d.empty_set();
  if (order.rank_of(x) >= order.rank_of(mid)) return result;
  vertex_interval(order, x, mid, false, false).for_each([&](Vertex w) {
    if (d.adjacent(w, x) || d.adjacent(w, mid)) return;
    VertexSet triple(static_cast<std::size_t>(d.order()), {w, mid, y});
    if (absorbs(d, triple, vertex_interval(order, w, y, false, true))) result.insert(w);
  });
  return result;
}

// ---------------------------------------------------------------------------
// Subproblem DAG

struct DagNode {
  Vertex x = -1;
  Vertex y = -1;  // -1 for the terminal F_x
  bool terminal() const { return y < 0; }
};

struct DagEdge {
  int target = -1;
  Vertex first = -1;
  Vertex second = -1;  // -1 for single-label edges
  int length() const { return second < 0 ? 1 : 2; }
};

/// Nodes are stored so that every edge points to a smaller index.
class SubproblemDag {
 public:
  int node_count() const { return static_cast<int>(nodes_.size()); }
  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& e : edges_) total += e.size();
    return total;
  }
  const DagNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<DagEdge>& edges(int i) const { return edges_[static_cast<std::size_t>(i)]; }

  std::optional<int> find(Vertex x, Vertex y) const {
    auto it = index_.find({x, y});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> terminal(Vertex x) const { return find(x, -1); }

  int add_node(DagNode node) {
    const int id = node_count();
    nodes_.push_back(node);
    edges_.emplace_back();
    index_.emplace(std::make_pair(node.x, node.y), id);
    return id;
  }
  void add_edge(int from, DagEdge edge) {
    if (edge.target >= from) throw Error(ErrorKind::PreconditionViolation, "dag edges must point to earlier nodes");
    edges_[static_cast<std::size_t>(from)].push_back(edge);
  }

 private:
  std::vector<DagNode> nodes_;
  std::vector<std::vector<DagEdge>> edges_;
  std::map<std::pair<Vertex, Vertex>, int> index_;
};

namespace detail {

// Vertices renumbered so that every weak-order class is a contiguous id range.
struct LinearInstance {
  int n = 0;
  std::vector<Vertex> to_graph;    // internal -> graph id
  std::vector<Vertex> from_graph;  // graph id -> internal
  std::vector<int> cls;
  std::vector<int> class_begin;
  std::vector<int> delta_class;  // -1 when delta is empty
  std::vector<VertexSet> out, und;

  LinearInstance(const Digraph& d, const WeakOrder& order, const std::vector<Interval>& intervals) : n(d.order()) {
    const auto un = static_cast<std::size_t>(n);
    from_graph.assign(un, -1);
    class_begin.push_back(0);
    for (std::size_t c = 0; c < order.classes.size(); ++c) {
      for (Vertex v : order.classes[c]) {
        from_graph[static_cast<std::size_t>(v)] = static_cast<Vertex>(to_graph.size());
        to_graph.push_back(v);
        cls.push_back(static_cast<int>(c));
      }
      class_begin.push_back(static_cast<int>(to_graph.size()));
    }
    std::map<Rational, int> start_class_of_end;
    for (const auto& arc : intervals) start_class_of_end.emplace(arc.end, order.class_at(arc.start));
    delta_class.assign(un, -1);
    for (Vertex i = 0; i < n; ++i) {
      auto it = start_class_of_end.find(order.class_position[static_cast<std::size_t>(cls[static_cast<std::size_t>(i)])]);
      if (it != start_class_of_end.end()) delta_class[static_cast<std::size_t>(i)] = it->second;
    }
    out.assign(un, VertexSet(un));
    und.assign(un, VertexSet(un));
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v : d.out(u)) {
        const Vertex iu = from_graph[static_cast<std::size_t>(u)], iv = from_graph[static_cast<std::size_t>(v)];
        out[static_cast<std::size_t>(iu)].insert(iv);
        und[static_cast<std::size_t>(iu)].insert(iv);
        und[static_cast<std::size_t>(iv)].insert(iu);
      }
  }

  int class_of(Vertex i) const { return cls[static_cast<std::size_t>(i)]; }
  int begin_of(int c) const { return class_begin[static_cast<std::size_t>(c)]; }
  int end_of(int c) const { return class_begin[static_cast<std::size_t>(c) + 1]; }
  bool arc(Vertex u, Vertex v) const { return out[static_cast<std::size_t>(u)].contains(v); }
  bool adjacent(Vertex u, Vertex v) const { return und[static_cast<std::size_t>(u)].contains(v); }

  /// Internal ids in classes lo..hi inclusive.
  VertexSet class_range(int lo, int hi) const {
    VertexSet s(static_cast<std::size_t>(n));
    if (lo > hi) return s;
    for (Vertex i = begin_of(lo); i < end_of(hi); ++i) s.insert(i);
    return s;
  }

  std::vector<Vertex> delta_members(Vertex y) const {
    std::vector<Vertex> result;
    const int c = delta_class[static_cast<std::size_t>(y)];
    if (c < 0) return result;
    for (Vertex i = begin_of(c); i < end_of(c); ++i) result.push_back(i);
    return result;
  }
};

// Right-to-left class sweeps from a fixed right end y.
struct Sweep {
  VertexSet base;     // I(y)
  VertexSet covered;  // x such that {x,y} absorbs every vertex strictly right of [x] in [x;y]
  std::vector<Vertex> mids;          // delta(y) minus N(y)
  std::vector<VertexSet> j;          // J(m,y) per mid
  std::vector<VertexSet> j_covered;  // same idea as `covered` for {x,m,y}
};

inline Sweep sweep(const LinearInstance& inst, Vertex y) {
  const auto un = static_cast<std::size_t>(inst.n);
  const int cy = inst.class_of(y);
  const int dy = inst.delta_class[static_cast<std::size_t>(y)];
  Sweep s;
  s.base = VertexSet(un);
  s.covered = VertexSet(un);
  {
    VertexSet cand = VertexSet::full(un);
    for (int r = cy; r >= 0; --r) {
      if (r < cy)
        for (Vertex v = inst.begin_of(r); v < inst.end_of(r); ++v)
          if (cand.contains(v)) {
            s.covered.insert(v);
            if (!inst.adjacent(v, y) && r != dy) s.base.insert(v);
          }
      for (Vertex z = inst.begin_of(r); z < inst.end_of(r); ++z)
        if (z != y && !inst.arc(z, y)) cand &= inst.out[static_cast<std::size_t>(z)];
      if (cand.empty()) break;
    }
  }
  for (Vertex mid : inst.delta_members(y)) {
    if (inst.adjacent(mid, y)) continue;
    const int cm = inst.class_of(mid);
    VertexSet j(un), covered(un);
    VertexSet cand = VertexSet::full(un);
    for (int r = cy; r >= 0; --r) {
      if (r < cm)
        for (Vertex w = inst.begin_of(r); w < inst.end_of(r); ++w)
          if (cand.contains(w)) {
            covered.insert(w);
            if (!inst.adjacent(w, mid)) j.insert(w);
          }
      for (Vertex z = inst.begin_of(r); z < inst.end_of(r); ++z)
        if (z != y && z != mid && !inst.arc(z, y) && !inst.arc(z, mid)) cand &= inst.out[static_cast<std::size_t>(z)];
      if (cand.empty()) break;
    }
    s.mids.push_back(mid);
    s.j.push_back(std::move(j));
    s.j_covered.push_back(std::move(covered));
  }
  return s;
}

// Lower/upper bounds translated to internal ids, with prefix counts of the lower set.
struct Bounds {
  VertexSet upper;
  std::vector<int> lower_prefix;  // lower_prefix[i] = |S ∩ [0, i)|
  VertexSet lower;

  Bounds(const LinearInstance& inst, const KernelQuery& q) {
    const auto un = static_cast<std::size_t>(inst.n);
    upper = VertexSet(un);
    lower = VertexSet(un);
    for (Vertex i = 0; i < inst.n; ++i) {
      const Vertex g = inst.to_graph[static_cast<std::size_t>(i)];
      if (q.in_upper(g)) upper.insert(i);
      if (q.in_lower(g)) lower.insert(i);
    }
    lower_prefix.assign(un + 1, 0);
    for (Vertex i = 0; i < inst.n; ++i)
      lower_prefix[static_cast<std::size_t>(i) + 1] = lower_prefix[static_cast<std::size_t>(i)] + (lower.contains(i) ? 1 : 0);
  }

  /// Whether S ∩ [lo;hi] is contained in `allowed`.
  bool clear(const LinearInstance& inst, Vertex lo, Vertex hi, std::initializer_list<Vertex> allowed) const {
    int count = lower_prefix[static_cast<std::size_t>(inst.end_of(inst.class_of(hi)))] -
                lower_prefix[static_cast<std::size_t>(inst.begin_of(inst.class_of(lo)))];
    for (Vertex v : allowed) count -= lower.contains(v) ? 1 : 0;
    return count == 0;
  }
};

inline bool fibre_absorbed(const LinearInstance& inst, Vertex x, std::initializer_list<Vertex> into) {
  const int c = inst.class_of(x);
  for (Vertex z = inst.begin_of(c); z < inst.end_of(c); ++z) {
    if (z == x) continue;
    bool hit = false;
    for (Vertex t : into) hit = hit || inst.arc(z, t);
    if (!hit) return false;
  }
  return true;
}

/// Appends the part with left coordinate x (internal id) to `dag`; labels use graph ids.
inline void build_part(const LinearInstance& inst, const Bounds& bounds, Vertex x, SubproblemDag& dag) {
  const auto g = [&](Vertex i) { return inst.to_graph[static_cast<std::size_t>(i)]; };
  const Vertex gx = g(x);
  const int cx = inst.class_of(x);
  const int term = dag.add_node({gx, -1});
  const int first = inst.end_of(cx);
  const auto node_of = [&](Vertex w) { return term + 1 + (w - first); };
  const VertexSet& nx = inst.und[static_cast<std::size_t>(x)];
  const bool x_allowed = bounds.upper.contains(x);

  for (Vertex y = first; y < inst.n; ++y) {
    const int self = dag.add_node({gx, g(y)});
    if (inst.adjacent(x, y)) continue;
    const Sweep s = sweep(inst, y);
    if (s.covered.contains(x) && fibre_absorbed(inst, x, {x, y})) {
      if (x_allowed && bounds.clear(inst, x, y, {x, y})) dag.add_edge(self, {term, gx});
      continue;
    }
    const int cy = inst.class_of(y);
    for (Vertex w = s.base.next(first); w >= 0 && inst.class_of(w) < cy; w = s.base.next(w + 1)) {
      if (nx.contains(w) || !bounds.upper.contains(w) || !bounds.clear(inst, w, y, {w, y})) continue;
      dag.add_edge(self, {node_of(w), g(w)});
    }
    for (std::size_t i = 0; i < s.mids.size(); ++i) {
      const Vertex mid = s.mids[i];
      const int cm = inst.class_of(mid);
      if (cm <= cx || nx.contains(mid) || !bounds.upper.contains(mid)) continue;
      if (s.j_covered[i].contains(x) && fibre_absorbed(inst, x, {x, mid, y})) {
        if (x_allowed && bounds.clear(inst, x, y, {x, mid, y})) dag.add_edge(self, {term, g(mid), gx});
        continue;
      }
      const VertexSet& j = s.j[i];
      for (Vertex w = j.next(first); w >= 0 && inst.class_of(w) < cm; w = j.next(w + 1)) {
        if (nx.contains(w) || !bounds.upper.contains(w) || !bounds.clear(inst, w, y, {w, mid, y})) continue;
        dag.add_edge(self, {node_of(w), g(mid), g(w)});
      }
    }
  }
}

}  // namespace detail

/// Λ(x, y0) for every x in X preceding y0.
inline std::map<Vertex, VertexSet> lambda_fast(const Digraph& d, const FuzzyModel& m, const WeakOrder& order, Vertex y0,
                                               const VertexSet& xs) {
  std::map<Vertex, VertexSet> result;
  if (xs.empty()) return result;
  const detail::LinearInstance inst(d, order, m.intervals);
  const Vertex iy = inst.from_graph[static_cast<std::size_t>(y0)];
  const auto s = detail::sweep(inst, iy);
  xs.for_each([&](Vertex x) {
    if (order.rank_of(x) >= order.rank_of(y0)) return;
    const Vertex ix = inst.from_graph[static_cast<std::size_t>(x)];
    VertexSet value = d.empty_set();
    const VertexSet window = inst.class_range(inst.class_of(ix) + 1, inst.class_of(iy) - 1);
    ((s.base & window) - inst.und[static_cast<std::size_t>(ix)])
        .for_each([&](Vertex i) { value.insert(inst.to_graph[static_cast<std::size_t>(i)]); });
    result.emplace(x, std::move(value));
  });
  return result;
}

/// Λ'(x, m, y0) keyed by (x, m), for x in X preceding y0 and m in δ(y0) \ N{x,y0}.
inline std::map<std::pair<Vertex, Vertex>, VertexSet> lambda_prime_fast(const Digraph& d, const FuzzyModel& m,
                                                                        const WeakOrder& order, Vertex y0,
                                                                        const VertexSet& xs) {
  std::map<std::pair<Vertex, Vertex>, VertexSet> result;
  if (xs.empty()) return result;
  const detail::LinearInstance inst(d, order, m.intervals);
  const Vertex iy = inst.from_graph[static_cast<std::size_t>(y0)];
  const auto s = detail::sweep(inst, iy);
  xs.for_each([&](Vertex x) {
    if (order.rank_of(x) >= order.rank_of(y0)) return;
    const Vertex ix = inst.from_graph[static_cast<std::size_t>(x)];
    for (std::size_t i = 0; i < s.mids.size(); ++i) {
      const Vertex mid = s.mids[i];
      if (inst.adjacent(ix, mid)) continue;
      VertexSet value = d.empty_set();
      const VertexSet window = inst.class_range(inst.class_of(ix) + 1, inst.class_of(mid) - 1);
      ((s.j[i] & window) - inst.und[static_cast<std::size_t>(ix)])
          .for_each([&](Vertex w) { value.insert(inst.to_graph[static_cast<std::size_t>(w)]); });
      result.emplace(std::make_pair(x, inst.to_graph[static_cast<std::size_t>(mid)]), std::move(value));
    }
  });
  return result;
}

/// Materialises the parts whose left coordinate is in `roots`. Edges violating the lower/upper
/// bounds of q are omitted; checking the root pair itself is left to the caller.
inline SubproblemDag build_dag(const Digraph& d, const FuzzyModel& m, const WeakOrder& order, const KernelQuery& q,
                               const VertexSet& roots) {
  const detail::LinearInstance inst(d, order, m.intervals);
  const detail::Bounds bounds(inst, q);
  SubproblemDag dag;
  roots.for_each([&](Vertex x) { detail::build_part(inst, bounds, inst.from_graph[static_cast<std::size_t>(x)], dag); });
  return dag;
}

struct DagInvariants {
  bool acyclic = true;
  bool degree_within_bound = true;
  bool parts_disjoint = true;
  std::size_t max_out_degree = 0;
  bool ok() const { return acyclic && degree_within_bound && parts_disjoint; }
};

/// Checks acyclicity (Kahn), out-degree <= n(1 + max|δ|), and that no edge crosses parts.
inline DagInvariants verify_dag_invariants(const SubproblemDag& g, int n, int max_delta) {
  DagInvariants result;
  const int count = g.node_count();
  std::vector<int> indegree(static_cast<std::size_t>(count), 0);
  for (int i = 0; i < count; ++i) {
    result.max_out_degree = std::max(result.max_out_degree, g.edges(i).size());
    for (const auto& e : g.edges(i)) {
      ++indegree[static_cast<std::size_t>(e.target)];
      if (g.node(e.target).x != g.node(i).x) result.parts_disjoint = false;
      if (g.node(i).terminal()) result.parts_disjoint = false;
    }
  }
  std::deque<int> ready;
  for (int i = 0; i < count; ++i)
    if (indegree[static_cast<std::size_t>(i)] == 0) ready.push_back(i);
  int seen = 0;
  while (!ready.empty()) {
    const int i = ready.front();
    ready.pop_front();
    ++seen;
    for (const auto& e : g.edges(i))
      if (--indegree[static_cast<std::size_t>(e.target)] == 0) ready.push_back(e.target);
  }
  result.acyclic = seen == count;
  result.degree_within_bound =
      result.max_out_degree <= static_cast<std::size_t>(n) * static_cast<std::size_t>(1 + max_delta);
  return result;
}

// ---------------------------------------------------------------------------
// Path tallies

using LengthTally = std::vector<BigInt>;                      // index: total label count
using JointTally = std::map<std::pair<int, Rational>, BigInt>;  // (label count, label weight)

namespace detail {

template <typename Tally, typename Combine>
std::vector<Tally> path_tallies(const SubproblemDag& g, int to, const Tally& unit, Combine combine) {
  std::vector<Tally> val(static_cast<std::size_t>(g.node_count()));
  val[static_cast<std::size_t>(to)] = unit;
  for (int i = to + 1; i < g.node_count(); ++i)
    for (const auto& e : g.edges(i))
      if (e.target >= to) combine(val[static_cast<std::size_t>(i)], val[static_cast<std::size_t>(e.target)], e);
  return val;
}

inline std::vector<BigInt> count_tallies(const SubproblemDag& g, int to) {
  return path_tallies<BigInt>(g, to, BigInt(1), [](BigInt& acc, const BigInt& v, const DagEdge&) { acc += v; });
}

inline std::vector<LengthTally> length_tallies(const SubproblemDag& g, int to) {
  return path_tallies<LengthTally>(g, to, LengthTally{BigInt(1)}, [](LengthTally& acc, const LengthTally& v, const DagEdge& e) {
    const auto shift = static_cast<std::size_t>(e.length());
    if (acc.size() < v.size() + shift) acc.resize(v.size() + shift);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) acc[i + shift] += v[i];
  });
}

inline Rational edge_weight(const DagEdge& e, const std::vector<Rational>& w) {
  Rational total = w[static_cast<std::size_t>(e.first)];
  if (e.second >= 0) total += w[static_cast<std::size_t>(e.second)];
  return total;
}

inline std::vector<JointTally> joint_tallies(const SubproblemDag& g, int to, const std::vector<Rational>& w) {
  JointTally unit;
  unit[{0, Rational(0)}] = 1;
  return path_tallies<JointTally>(g, to, unit, [&](JointTally& acc, const JointTally& v, const DagEdge& e) {
    const Rational dw = edge_weight(e, w);
    for (const auto& [key, count] : v) acc[{key.first + e.length(), key.second + dw}] += count;
  });
}

}  // namespace detail

/// Number of directed paths from `from` to `to`.
inline BigInt count_paths(const SubproblemDag& g, int from, int to) {
  if (from < to) return 0;
  return detail::count_tallies(g, to)[static_cast<std::size_t>(from)];
}

/// Path counts keyed by the total number of labels along the path.
inline std::map<int, BigInt> count_paths_by_length(const SubproblemDag& g, int from, int to) {
  std::map<int, BigInt> result;
  if (from < to) return result;
  const auto t = detail::length_tallies(g, to)[static_cast<std::size_t>(from)];
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] != 0) result[static_cast<int>(i)] = t[i];
  return result;
}

/// Path counts keyed by the summed weight of the labels along the path.
inline std::map<Rational, BigInt> path_weight_distribution(const SubproblemDag& g, int from, int to,
                                                           const std::vector<Rational>& weights) {
  std::map<Rational, BigInt> result;
  if (from < to) return result;
  const auto tallies = detail::joint_tallies(g, to, weights);
  for (const auto& [key, count] : tallies[static_cast<std::size_t>(from)]) result[key.second] += count;
  return result;
}

/// Union of the path labels plus y.
inline VertexSet extract_kernel(const std::vector<DagEdge>& path, Vertex y, std::size_t universe) {
  VertexSet k(universe);
  k.insert(y);
  for (const auto& e : path) {
    k.insert(e.first);
    if (e.second >= 0) k.insert(e.second);
  }
  return k;
}

struct QueryOptions {
  bool histogram = true;  // fill CountReport::by_size
  bool witness = true;
};

namespace detail {

// Tallies of one DAG part towards its terminal, in the cheapest form the query allows.
class PartTallies {
 public:
  PartTallies(const SubproblemDag& g, int terminal, const KernelQuery& q, bool histogram) : g_(g), terminal_(terminal) {
    if (q.weights) {
      weights_ = &*q.weights;
      data_ = joint_tallies(g, terminal, *q.weights);
    } else if (histogram || q.size) {
      data_ = length_tallies(g, terminal);
    } else {
      data_ = count_tallies(g, terminal);
    }
  }

  const SubproblemDag& dag() const { return g_; }
  int terminal() const { return terminal_; }

  /// Visits (label count, label weight, multiplicity) at node i; weight is 0 without weights.
  template <typename F>
  void for_each(int i, F&& f) const {
    const auto idx = static_cast<std::size_t>(i);
    if (auto* c = std::get_if<std::vector<BigInt>>(&data_)) {
      if ((*c)[idx] != 0) f(-1, Rational(0), (*c)[idx]);
    } else if (auto* l = std::get_if<std::vector<LengthTally>>(&data_)) {
      const auto& t = (*l)[idx];
      for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] != 0) f(static_cast<int>(k), Rational(0), t[k]);
    } else {
      for (const auto& [key, count] : std::get<std::vector<JointTally>>(data_)[idx]) f(key.first, key.second, count);
    }
  }

  bool tracks_length() const { return !std::holds_alternative<std::vector<BigInt>>(data_); }

  /// Whether node i has a path to the terminal with exactly `len` labels of weight `w`
  /// (len < 0: any length; w ignored without weights).
  bool has(int i, int len, const Rational& w) const {
    const auto idx = static_cast<std::size_t>(i);
    if (auto* c = std::get_if<std::vector<BigInt>>(&data_)) return (*c)[idx] != 0;
    if (auto* l = std::get_if<std::vector<LengthTally>>(&data_)) {
      const auto& t = (*l)[idx];
      if (len < 0) return std::any_of(t.begin(), t.end(), [](const BigInt& v) { return v != 0; });
      return static_cast<std::size_t>(len) < t.size() && t[static_cast<std::size_t>(len)] != 0;
    }
    const auto& t = std::get<std::vector<JointTally>>(data_)[idx];
    if (len < 0) return std::any_of(t.begin(), t.end(), [](const auto& kv) { return kv.second != 0; });
    auto it = t.find({len, w});
    return it != t.end() && it->second != 0;
  }

  Rational edge_weight(const DagEdge& e) const {
    return weights_ ? detail::edge_weight(e, *weights_) : Rational(0);
  }

 private:
  const SubproblemDag& g_;
  int terminal_;
  const std::vector<Rational>* weights_ = nullptr;
  std::variant<std::vector<BigInt>, std::vector<LengthTally>, std::vector<JointTally>> data_;
};

// One root node of a part together with how its kernels map back to the caller's vertices.
struct RootView {
  int node = -1;
  Vertex y = -1;                // graph id of the right end
  int size_offset = 1;          // kernel size = labels + size_offset
  Rational weight_offset = 0;   // kernel weight = label weight + weight_offset
  const std::vector<Vertex>* lift = nullptr;  // graph id -> caller id, -1 to drop
  std::size_t universe = 0;
};

inline bool accepts_totals(const KernelQuery& q, int size, const Rational& weight) {
  if (q.size && size != *q.size) return false;
  if (q.target && weight != *q.target) return false;
  return true;
}

inline VertexSet lift_kernel(const VertexSet& k, const RootView& root) {
  VertexSet out(root.universe);
  k.for_each([&](Vertex v) {
    const Vertex o = (*root.lift)[static_cast<std::size_t>(v)];
    if (o >= 0) out.insert(o);
  });
  return out;
}

inline CountReport report_root(const PartTallies& tallies, const RootView& root, const KernelQuery& q,
                               const QueryOptions& options) {
  CountReport report;
  if (q.weights) report.by_weight.emplace();
  std::optional<std::pair<int, Rational>> chosen;
  bool chosen_any = false;
  tallies.for_each(root.node, [&](int len, const Rational& w, const BigInt& count) {
    const Rational weight = w + root.weight_offset;
    const int size = len + root.size_offset;
    if (len >= 0 && !accepts_totals(q, size, weight)) return;
    report.total += count;
    if (options.histogram && len >= 0) report.by_size[size] += count;
    if (q.weights) (*report.by_weight)[weight] += count;
    if (!chosen_any) {
      chosen_any = true;
      chosen = std::make_pair(len, w);
    }
  });
  if (!options.witness || !chosen_any) return report;

  // Walk one path realising the chosen (length, weight).
  const auto& g = tallies.dag();
  int len = chosen->first;
  Rational w = chosen->second;
  int node = root.node;
  std::vector<DagEdge> path;
  while (node != tallies.terminal()) {
    bool moved = false;
    for (const auto& e : g.edges(node)) {
      if (e.target < tallies.terminal()) continue;
      const int rest = len < 0 ? -1 : len - e.length();
      const Rational rest_w = w - tallies.edge_weight(e);
      if (len >= 0 && rest < 0) continue;
      if (!tallies.has(e.target, rest, rest_w)) continue;
      path.push_back(e);
      node = e.target;
      len = rest;
      w = rest_w;
      moved = true;
      break;
    }
    if (!moved) throw Error(ErrorKind::PreconditionViolation, "inconsistent path tallies");
  }
  report.witness = lift_kernel(extract_kernel(path, root.y, static_cast<std::size_t>(root.lift->size())), root);
  return report;
}

/// Depth-first enumeration of accepted kernels below one root; stops once `out` holds `limit`.
inline void enumerate_root(const PartTallies& tallies, const RootView& root, const KernelQuery& q, std::size_t limit,
                           std::vector<VertexSet>& out) {
  const auto& g = tallies.dag();
  const bool filtered = q.size.has_value() || q.target.has_value();
  // Whether some completion from node i, with `len`/`w` already collected, passes the filters.
  auto completable = [&](int i, int len, const Rational& w) {
    if (!filtered) return tallies.has(i, -1, Rational(0));
    bool found = false;
    tallies.for_each(i, [&](int l, const Rational& lw, const BigInt&) {
      if (!found && accepts_totals(q, l + len + root.size_offset, lw + w + root.weight_offset)) found = true;
    });
    return found;
  };
  if (!completable(root.node, 0, Rational(0))) return;
  std::vector<DagEdge> path;
  std::function<void(int, int, Rational)> dfs = [&](int node, int len, Rational w) {
    if (out.size() >= limit) return;
    if (node == tallies.terminal()) {
      out.push_back(lift_kernel(extract_kernel(path, root.y, static_cast<std::size_t>(root.lift->size())), root));
      return;
    }
    for (const auto& e : g.edges(node)) {
      if (e.target < tallies.terminal()) continue;
      const int nl = len + e.length();
      const Rational nw = w + tallies.edge_weight(e);
      if (!completable(e.target, nl, nw)) continue;
      path.push_back(e);
      dfs(e.target, nl, nw);
      path.pop_back();
      if (out.size() >= limit) return;
    }
  };
  dfs(root.node, 0, Rational(0));
}

// The input instance extended by isolated dummies at both ends, so that one DAG part covers every kernel.
struct FligSetup {
  Digraph graph;
  FuzzyModel model;
  KernelQuery query;
  SubproblemDag dag;
  std::vector<Vertex> lift;
  int root = -1;
  int terminal = -1;
  Vertex right = -1;
};

inline void require_linear_model(const Digraph& d, const FuzzyModel& m) {
  if (m.flavor != Flavor::Linear) throw Error(ErrorKind::FlavorMismatch, "expected a linear model");
  const auto report = validate_model(d, m);
  if (!report.valid()) {
    for (const auto& c : report.checks)
      if (c) throw Error(ErrorKind::InvalidModel, c->message);
  }
  if (!report.fibres_are_cliques) throw Error(ErrorKind::NotFibreCliques, report.fibre_witness->message);
}

inline FligSetup flig_setup(const Digraph& d, const FuzzyModel& m, const KernelQuery& q) {
  require_linear_model(d, m);
  const int n = d.order();
  FligSetup s;
  s.graph = Digraph(n + 2, d.arcs());
  s.model = m;
  Rational lo = 0, hi = 1;
  for (Vertex v = 0; v < n; ++v) {
    lo = std::min(lo, m.position(v));
    hi = std::max(hi, m.position(v));
  }
  for (const auto& arc : m.intervals) {
    lo = std::min(lo, arc.start);
    hi = std::max(hi, arc.end);
  }
  s.model.positions.push_back(Rational(lo - 1));
  s.model.positions.push_back(Rational(hi + 1));
  const auto un = static_cast<std::size_t>(n + 2);
  if (q.lower) s.query.lower = VertexSet::from_range(un, q.lower->members());
  {
    VertexSet upper = q.upper ? VertexSet::from_range(un, q.upper->members()) : VertexSet::full(un);
    upper.insert(n);
    upper.insert(n + 1);
    s.query.upper = upper;
  }
  if (q.weights) {
    auto w = *q.weights;
    w.resize(un, Rational(0));
    s.query.weights = std::move(w);
  }
  s.query.target = q.target;
  s.query.size = q.size;
  const WeakOrder order = detail::build_weak_order(s.model, n + 2);
  s.dag = build_dag(s.graph, s.model, order, s.query, VertexSet(un, {n}));
  s.root = *s.dag.find(n, n + 1);
  s.terminal = *s.dag.terminal(n);
  s.right = n + 1;
  s.lift.resize(un);
  for (Vertex v = 0; v < n; ++v) s.lift[static_cast<std::size_t>(v)] = v;
  s.lift[static_cast<std::size_t>(n)] = -1;
  s.lift[static_cast<std::size_t>(n + 1)] = -1;
  return s;
}

}  // namespace detail

/// Counts kernels of a digraph with a linear model satisfying q.
inline CountReport flig_query(const Digraph& d, const FuzzyModel& m, const KernelQuery& q,
                              const QueryOptions& options = {}) {
  if (!q.consistent()) {
    detail::require_linear_model(d, m);
    CountReport empty;
    if (q.weights) empty.by_weight.emplace();
    return empty;
  }
  const auto s = detail::flig_setup(d, m, q);
  const detail::PartTallies tallies(s.dag, s.terminal, s.query, options.histogram);
  // Labels include the left dummy; the right dummy is y. Both are dropped from the size.
  const detail::RootView root{s.root, s.right, -1, Rational(0), &s.lift, static_cast<std::size_t>(d.order())};
  return detail::report_root(tallies, root, s.query, options);
}

/// Up to `limit` kernels satisfying q, sorted lexicographically.
inline std::vector<VertexSet> flig_enumerate(const Digraph& d, const FuzzyModel& m, const KernelQuery& q,
                                             std::size_t limit) {
  std::vector<VertexSet> out;
  if (!q.consistent()) return out;
  const auto s = detail::flig_setup(d, m, q);
  const detail::PartTallies tallies(s.dag, s.terminal, s.query, q.size.has_value());
  const detail::RootView root{s.root, s.right, -1, Rational(0), &s.lift, static_cast<std::size_t>(d.order())};
  detail::enumerate_root(tallies, root, s.query, limit, out);
  sort_lexicographically(out);
  return out;
}

}  // namespace fuzzy_kernels
