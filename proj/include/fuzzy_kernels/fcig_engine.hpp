#pragma once

// Circular models: kernels split into single vertices and sets K_{a,b}, each solved on a linear cut.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/flig_engine.hpp>
#include <fuzzy_kernels/fuzzy_model.hpp>
#include <fuzzy_kernels/numeric.hpp>
#include <fuzzy_kernels/query.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace fuzzy_kernels {

/// Every {v} that is a kernel: all other vertices point at v.
inline std::vector<VertexSet> single_vertex_kernels(const Digraph& d) {
  std::vector<VertexSet> result;
  for (Vertex v = 0; v < d.order(); ++v)
    if (static_cast<int>(d.in(v).size()) == d.order() - 1) result.push_back(VertexSet(static_cast<std::size_t>(d.order()), {v}));
  return result;
}

namespace detail {

inline bool in_open_arc(const FuzzyModel& m, const Rational& from, const Rational& to, const Rational& p) {
  const Rational u = m.offset(from, p);
  return u > 0 && u < m.offset(from, to);
}

// Vertices removed before cutting at (a;b): the open arc, plus fibre-mates of a or b pointing into {a,b}.
inline VertexSet pair_deletions(const Digraph& d, const FuzzyModel& m, Vertex a, Vertex b) {
  VertexSet gone = d.empty_set();
  const Rational& fa = m.position(a);
  const Rational& fb = m.position(b);
  for (Vertex v = 0; v < d.order(); ++v) {
    if (v == a || v == b) continue;
    const Rational& p = m.position(v);
    const bool into = d.has_arc(v, a) || d.has_arc(v, b);
    if (in_open_arc(m, fa, fb, p)) {
      if (!into)
        throw Error(ErrorKind::PreconditionViolation,
                    "vertex " + std::to_string(v) + " inside the arc is not absorbed by the pair");
      gone.insert(v);
    } else if ((p == fa || p == fb) && into) {
      gone.insert(v);
    }
  }
  return gone;
}

}  // namespace detail

/// Deletes the vertices of the open arc (a;b) and the fibre-mates of a and b lying in ∂{a,b}.
/// Kernels containing both a and b are unchanged.
inline InducedSubdigraph delete_absorbed(const Digraph& d, const FuzzyModel& m, Vertex a, Vertex b) {
  if (a == b || d.adjacent(a, b)) throw Error(ErrorKind::PreconditionViolation, "pair must be distinct and non-adjacent");
  return induced_subdigraph(d, d.all() - detail::pair_deletions(d, m, a, b));
}

struct CutInstance {
  Digraph graph;
  FuzzyModel model;  // linear, b leftmost and a rightmost
  std::vector<Vertex> to_original;
  Vertex a = -1;
  Vertex b = -1;
};

namespace detail {

// Cut point inside the open arc (a;b): the midpoint, moved halfway to the nearest other
// endpoint when it lands on an interval endpoint.
inline Rational cut_point(const FuzzyModel& m, const Rational& fa, const Rational& fb) {
  const Rational len = m.offset(fa, fb);
  const Rational mid = len / 2;
  std::vector<Rational> events{Rational(0), len};
  bool collides = false;
  for (const auto& arc : m.intervals)
    for (const Rational* e : {&arc.start, &arc.end}) {
      const Rational u = m.offset(fa, *e);
      if (u >= len) continue;
      if (u == mid) collides = true;
      else events.push_back(u);
    }
  Rational cut = mid;
  if (collides) {
    Rational best = events.front();
    for (const auto& u : events) {
      const Rational du = u > mid ? Rational(u - mid) : Rational(mid - u);
      const Rational db = best > mid ? Rational(best - mid) : Rational(mid - best);
      if (du < db || (du == db && u < best)) best = u;
    }
    cut = (mid + best) / 2;
  }
  return wrap_unit(fa + cut);
}

// Re-expresses intervals in cut coordinates t = wrap(p - c). Arcs through c keep each occupied side,
// with fresh outer endpoints ordered so that no inclusion appears.
inline std::vector<Interval> unroll_intervals(const FuzzyModel& m, const std::vector<Interval>& intervals,
                                              const Rational& c, const std::vector<Rational>& positions,
                                              bool keep_right_parts) {
  auto t = [&](const Rational& p) { return wrap_unit(p - c); };
  std::vector<Interval> plain;
  std::vector<Rational> left_ends, right_starts;
  Rational lo = 1, hi = 0;
  for (const auto& p : positions) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  for (const auto& arc : intervals) {
    if (m.contains(arc, c)) {
      const Rational te = t(arc.end), ts = t(arc.start);
      const bool left = std::any_of(positions.begin(), positions.end(), [&](const Rational& p) { return p <= te; });
      const bool right = keep_right_parts &&
                         std::any_of(positions.begin(), positions.end(), [&](const Rational& p) { return p >= ts; });
      if (left) left_ends.push_back(te);
      if (right) right_starts.push_back(ts);
      continue;
    }
    Interval mapped{t(arc.start), t(arc.end)};
    const bool occupied = std::any_of(positions.begin(), positions.end(),
                                      [&](const Rational& p) { return mapped.start <= p && p <= mapped.end; });
    if (!occupied) continue;
    lo = std::min(lo, mapped.start);
    hi = std::max(hi, mapped.end);
    plain.push_back(mapped);
  }
  std::sort(left_ends.begin(), left_ends.end());
  std::sort(right_starts.begin(), right_starts.end());
  for (std::size_t i = 0; i < left_ends.size(); ++i)
    plain.push_back({lo * Rational(static_cast<long>(i + 1), static_cast<long>(left_ends.size() + 1)), left_ends[i]});
  for (std::size_t i = 0; i < right_starts.size(); ++i)
    plain.push_back(
        {right_starts[i], hi + (1 - hi) * Rational(static_cast<long>(i + 1), static_cast<long>(right_starts.size() + 1))});
  return plain;
}

}  // namespace detail

/// Linear instance for K_{a,b}: delete the absorbed arc, unroll the circle at a cut inside (f(a);f(b))
/// and nicify. An arc [f(a);f(b)] splits into one piece per fibre. Arcs between the fibres of a and b are
/// dropped: both ends lie outside every kernel containing a and b, so they cannot affect kernel-hood.
inline CutInstance cut_to_flig(const Digraph& d, const FuzzyModel& m, Vertex a, Vertex b) {
  if (m.flavor != Flavor::Circular) throw Error(ErrorKind::FlavorMismatch, "cut_to_flig expects a circular model");
  const auto sub = delete_absorbed(d, m, a, b);
  const Rational& fa = m.position(a);
  const Rational& fb = m.position(b);
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (auto [u, v] : sub.graph.arcs()) {
    const Rational& pu = m.position(sub.to_original[static_cast<std::size_t>(u)]);
    const Rational& pv = m.position(sub.to_original[static_cast<std::size_t>(v)]);
    if ((pu == fa && pv == fb) || (pu == fb && pv == fa)) continue;
    arcs.emplace_back(u, v);
  }
  CutInstance cut;
  const int k = sub.graph.order();
  cut.graph = Digraph(k, arcs);
  cut.to_original = sub.to_original;
  cut.a = sub.from_original[static_cast<std::size_t>(a)];
  cut.b = sub.from_original[static_cast<std::size_t>(b)];

  const Rational c = detail::cut_point(m, fa, fb);
  std::vector<Rational> t;
  for (Vertex v : sub.to_original) t.push_back(wrap_unit(m.position(v) - c));
  cut.model.flavor = Flavor::Linear;
  cut.model.positions.assign(t.begin(), t.end());
  cut.model.intervals = detail::unroll_intervals(m, m.intervals, c, t, true);
  cut.model = nicify(cut.graph, cut.model).model;
  return cut;
}

struct FcigOptions {
  bool reuse_parts = true;  // build one DAG part per left vertex b instead of one per pair
  bool histogram = true;
  bool witness = true;
};

namespace detail {

// A query re-expressed on an instance whose vertex i is original vertex lift[i].
inline KernelQuery localise(const KernelQuery& q, const std::vector<Vertex>& lift) {
  KernelQuery local;
  const auto k = lift.size();
  if (q.lower) {
    VertexSet s(k);
    for (std::size_t i = 0; i < k; ++i)
      if (q.lower->contains(lift[i])) s.insert(static_cast<Vertex>(i));
    local.lower = s;
  }
  if (q.upper) {
    VertexSet s(k);
    for (std::size_t i = 0; i < k; ++i)
      if (q.upper->contains(lift[i])) s.insert(static_cast<Vertex>(i));
    local.upper = s;
  }
  if (q.weights) {
    std::vector<Rational> w;
    for (Vertex v : lift) w.push_back((*q.weights)[static_cast<std::size_t>(v)]);
    local.weights = std::move(w);
  }
  local.size = q.size;
  local.target = q.target;
  return local;
}

using PieceVisitor =
    std::function<void(Vertex a, Vertex b, const PartTallies&, const RootView&, const KernelQuery& local)>;

struct FcigContext {
  const Digraph& d;
  FuzzyModel m;
  const KernelQuery& q;
  bool histogram;
  Vertex alpha = 0;

  bool alpha_between(Vertex a, Vertex b) const {
    return m.offset(m.position(a), m.position(alpha)) < m.offset(m.position(a), m.position(b));
  }
};

inline void visit_pair(const FcigContext& ctx, Vertex a, Vertex b, const PieceVisitor& visit) {
  const auto& d = ctx.d;
  const auto& q = ctx.q;
  if (a == b || d.adjacent(a, b) || !q.in_upper(a) || !q.in_upper(b) || !ctx.alpha_between(a, b)) return;
  const Rational& fa = ctx.m.position(a);
  const Rational& fb = ctx.m.position(b);
  for (Vertex v = 0; v < d.order(); ++v) {
    if (v == a || v == b) continue;
    const bool into = d.has_arc(v, a) || d.has_arc(v, b);
    if (in_open_arc(ctx.m, fa, fb, ctx.m.position(v))) {
      if (!into || q.in_lower(v)) return;
    } else if (into && q.in_lower(v)) {
      return;  // any vertex pointing into {a,b} stays outside every kernel containing both
    }
  }
  const CutInstance cut = cut_to_flig(d, ctx.m, a, b);
  const KernelQuery local = localise(q, cut.to_original);
  const WeakOrder order = weak_order(cut.graph, cut.model);
  const SubproblemDag dag =
      build_dag(cut.graph, cut.model, order, local, VertexSet(static_cast<std::size_t>(cut.graph.order()), {cut.b}));
  const PartTallies tallies(dag, *dag.terminal(cut.b), local, ctx.histogram || q.size.has_value());
  const RootView root{*dag.find(cut.b, cut.a), cut.a, 1, q.weight(a), &cut.to_original,
                      static_cast<std::size_t>(d.order())};
  visit(a, b, tallies, root, local);
}

// All pairs (a, b) sharing the left vertex b, served by one DAG part on D - ∂b cut just before f(b).
inline void visit_left(const FcigContext& ctx, Vertex b, const PieceVisitor& visit) {
  const auto& d = ctx.d;
  const auto& m = ctx.m;
  const auto& q = ctx.q;
  if (!q.in_upper(b)) return;
  for (Vertex u : d.in(b))
    if (q.in_lower(u)) return;
  const Rational& fb = m.position(b);

  // Cut halfway between f(b) and the closest event clockwise from it.
  Rational gap = 1;
  auto consider = [&](const Rational& p) {
    const Rational off = m.offset(p, fb);
    if (off > 0 && off < gap) gap = off;
  };
  for (Vertex v = 0; v < d.order(); ++v) consider(m.position(v));
  for (const auto& arc : m.intervals) {
    consider(arc.start);
    consider(arc.end);
  }
  const Rational c = wrap_unit(fb - gap / 2);

  const InducedSubdigraph sub = induced_subdigraph(d, d.all() - in_neighbours(d, VertexSet(static_cast<std::size_t>(d.order()), {b})));
  std::vector<Rational> t;
  for (Vertex v : sub.to_original) t.push_back(wrap_unit(m.position(v) - c));
  FuzzyModel linear;
  linear.flavor = Flavor::Linear;
  linear.positions.assign(t.begin(), t.end());
  linear.intervals = unroll_intervals(m, m.intervals, c, t, false);

  const int k = sub.graph.order();
  const Vertex lb = sub.from_original[static_cast<std::size_t>(b)];
  const KernelQuery local = localise(q, sub.to_original);
  const WeakOrder order = detail::build_weak_order(linear, k);
  const SubproblemDag dag = build_dag(sub.graph, linear, order, local, VertexSet(static_cast<std::size_t>(k), {lb}));
  const PartTallies tallies(dag, *dag.terminal(lb), local, ctx.histogram || q.size.has_value());

  std::optional<Rational> joined_start;  // start of the interval ending at f(b)
  for (const auto& arc : m.intervals)
    if (arc.end == fb) joined_start = arc.start;

  // Internal vertices sorted by t, to test "everything beyond a points at a".
  std::vector<Vertex> by_t(static_cast<std::size_t>(k));
  for (Vertex i = 0; i < k; ++i) by_t[static_cast<std::size_t>(i)] = i;
  std::sort(by_t.begin(), by_t.end(), [&](Vertex x, Vertex y) { return t[static_cast<std::size_t>(x)] < t[static_cast<std::size_t>(y)]; });

  for (Vertex la = 0; la < k; ++la) {
    const Vertex a = sub.to_original[static_cast<std::size_t>(la)];
    if (a == b || !q.in_upper(a) || d.adjacent(a, b) || !ctx.alpha_between(a, b)) continue;
    if (joined_start && m.position(a) == *joined_start) {
      visit_pair(ctx, a, b, visit);
      continue;
    }
    const Rational& ta = t[static_cast<std::size_t>(la)];
    bool ok = true;
    for (auto it = by_t.rbegin(); it != by_t.rend() && ok; ++it) {
      const Vertex v = *it;
      if (t[static_cast<std::size_t>(v)] <= ta) break;
      const Vertex ov = sub.to_original[static_cast<std::size_t>(v)];
      if (!d.has_arc(ov, a) || q.in_lower(ov)) ok = false;
    }
    if (!ok) continue;
    const RootView root{*dag.find(lb, la), la, 1, q.weight(a), &sub.to_original, static_cast<std::size_t>(d.order())};
    visit(a, b, tallies, root, local);
  }
}

inline FuzzyModel prepare_circular(const Digraph& d, const FuzzyModel& m) {
  if (m.flavor != Flavor::Circular) throw Error(ErrorKind::FlavorMismatch, "expected a circular model");
  const auto report = validate_model(d, m);
  for (const auto& c : report.checks)
    if (c) throw Error(ErrorKind::InvalidModel, c->message);
  return nicify(d, m).model;
}

inline void visit_pieces(const FcigContext& ctx, bool reuse, const PieceVisitor& visit) {
  const int n = ctx.d.order();
  if (reuse) {
    for (Vertex b = 0; b < n; ++b) visit_left(ctx, b, visit);
  } else {
    for (Vertex b = 0; b < n; ++b)
      for (Vertex a = 0; a < n; ++a) visit_pair(ctx, a, b, visit);
  }
}

}  // namespace detail

/// Counts kernels of a digraph with a circular model satisfying q.
inline CountReport fcig_query(const Digraph& d, const FuzzyModel& m, const KernelQuery& q,
                              const FcigOptions& options = {}) {
  const detail::FcigContext ctx{d, detail::prepare_circular(d, m), q, options.histogram};
  CountReport report;
  if (q.weights) report.by_weight.emplace();
  if (!q.consistent()) return report;
  auto add_set = [&](const VertexSet& k) {
    if (!q.accepts(k)) return;
    report.total += 1;
    if (options.histogram) report.by_size[static_cast<int>(k.size())] += 1;
    if (q.weights) (*report.by_weight)[q.weight_of(k)] += 1;
    if (options.witness && !report.witness) report.witness = k;
  };
  if (d.order() == 0) {
    add_set(d.empty_set());
    return report;
  }
  for (const auto& k : single_vertex_kernels(d)) add_set(k);
  const QueryOptions inner{options.histogram, options.witness};
  detail::visit_pieces(ctx, options.reuse_parts,
                       [&](Vertex, Vertex, const detail::PartTallies& t, const detail::RootView& root,
                           const KernelQuery& local) { report.add(detail::report_root(t, root, local, inner)); });
  return report;
}

/// Per-pair contributions |K_{a,b}| (restricted to q) and the single-vertex kernels.
struct FcigDecomposition {
  std::vector<VertexSet> singles;
  std::map<std::pair<Vertex, Vertex>, BigInt> pairs;
};

inline FcigDecomposition fcig_decomposition(const Digraph& d, const FuzzyModel& m, const KernelQuery& q = {},
                                            bool reuse_parts = true) {
  const detail::FcigContext ctx{d, detail::prepare_circular(d, m), q, false};
  FcigDecomposition result;
  if (!q.consistent() || d.order() == 0) return result;
  for (auto& k : single_vertex_kernels(d))
    if (q.accepts(k)) result.singles.push_back(std::move(k));
  const QueryOptions inner{false, false};
  detail::visit_pieces(ctx, reuse_parts,
                       [&](Vertex a, Vertex b, const detail::PartTallies& t, const detail::RootView& root,
                           const KernelQuery& local) {
                         const BigInt c = detail::report_root(t, root, local, inner).total;
                         if (c != 0) result.pairs[{a, b}] += c;
                       });
  return result;
}

/// Up to `limit` kernels satisfying q, sorted lexicographically.
inline std::vector<VertexSet> fcig_enumerate(const Digraph& d, const FuzzyModel& m, const KernelQuery& q,
                                             std::size_t limit, bool reuse_parts = true) {
  const detail::FcigContext ctx{d, detail::prepare_circular(d, m), q, false};
  std::vector<VertexSet> out;
  if (!q.consistent() || limit == 0) return out;
  if (d.order() == 0) {
    if (q.accepts(d.empty_set())) out.push_back(d.empty_set());
    return out;
  }
  for (auto& k : single_vertex_kernels(d))
    if (q.accepts(k) && out.size() < limit) out.push_back(std::move(k));
  detail::visit_pieces(ctx, reuse_parts,
                       [&](Vertex, Vertex, const detail::PartTallies& t, const detail::RootView& root,
                           const KernelQuery& local) {
                         if (out.size() < limit) detail::enumerate_root(t, root, local, limit, out);
                       });
  sort_lexicographically(out);
  return out;
}

// ---------------------------------------------------------------------------
// Flavor dispatch

inline CountReport count_kernels(const Digraph& d, const FuzzyModel& m, const KernelQuery& q = {},
                                 const FcigOptions& options = {}) {
  if (m.flavor == Flavor::Linear) return flig_query(d, m, q, {options.histogram, options.witness});
  return fcig_query(d, m, q, options);
}

inline std::vector<VertexSet> enumerate_kernels(const Digraph& d, const FuzzyModel& m, const KernelQuery& q,
                                                std::size_t limit) {
  if (m.flavor == Flavor::Linear) return flig_enumerate(d, m, q, limit);
  return fcig_enumerate(d, m, q, limit);
}

/// Maximal independent sets of an all-bidirectional digraph, by size.
inline CountReport mis_counts(const Digraph& d, const FuzzyModel& m) {
  if (!d.all_bidirectional()) throw Error(ErrorKind::NotBidirectional, "every edge must be bidirectional");
  return count_kernels(d, m, {}, FcigOptions{true, true, false});
}

}  // namespace fuzzy_kernels
