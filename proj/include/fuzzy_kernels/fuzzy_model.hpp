#pragma once

// Fuzzy circular / linear interval models: validation, nicification, the weak vertex order.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/numeric.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fuzzy_kernels {

enum class Flavor { Linear, Circular };

inline const char* to_string(Flavor f) { return f == Flavor::Linear ? "linear" : "circular"; }

/// Closed arc from `start` anticlockwise to `end`. On a linear model, start < end.
struct Interval {
  Rational start;
  Rational end;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct FuzzyModel {
  Flavor flavor = Flavor::Linear;
  std::vector<std::optional<Rational>> positions;  // one per vertex
  std::vector<Interval> intervals;

  const Rational& position(Vertex v) const {
    const auto& p = positions.at(static_cast<std::size_t>(v));
    if (!p) throw Error(ErrorKind::MissingPosition, "vertex " + std::to_string(v) + " has no position");
    return *p;
  }

  bool contains(const Interval& arc, const Rational& p) const {
    if (flavor == Flavor::Linear || arc.start < arc.end) return arc.start <= p && p <= arc.end;
    return p >= arc.start || p <= arc.end;
  }

  /// Anticlockwise distance from `from` to `to` (plain difference on a line).
  Rational offset(const Rational& from, const Rational& to) const {
    return flavor == Flavor::Linear ? Rational(to - from) : wrap_unit(to - from);
  }

  /// Whether `inner` is a subset of `outer`.
  bool includes(const Interval& outer, const Interval& inner) const {
    if (flavor == Flavor::Linear) return outer.start <= inner.start && inner.end <= outer.end;
    const Rational length = offset(outer.start, outer.end);
    const Rational s = offset(outer.start, inner.start);
    const Rational e = offset(outer.start, inner.end);
    return s <= e && e <= length;
  }

  friend bool operator==(const FuzzyModel&, const FuzzyModel&) = default;
};

// ---------------------------------------------------------------------------
// Validation

struct ModelViolation {
  std::vector<Vertex> vertices;
  std::vector<int> intervals;
  std::string message;
};

/// Index 0 covers well-formedness (degenerate intervals, positions out of range);
/// indices 1..4 are the four model axioms.
struct ValidationReport {
  std::array<std::optional<ModelViolation>, 5> checks;
  bool fibres_are_cliques = true;
  std::optional<ModelViolation> fibre_witness;
  bool few_intervals = true;  // |I| <= |V|
  bool covers_circle = false;

  bool axiom_ok(int i) const { return !checks[static_cast<std::size_t>(i)].has_value(); }
  bool valid() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return !c.has_value(); });
  }
  bool nice() const { return valid() && fibres_are_cliques && few_intervals; }
};

namespace detail {

// Per-interval vertex membership and endpoint fibres.
struct IntervalIndex {
  std::vector<VertexSet> members;
  std::vector<VertexSet> at_start;
  std::vector<VertexSet> at_end;
  std::vector<VertexSet> intervals_of;  // per vertex, over interval indices

  IntervalIndex(const FuzzyModel& m, int n) {
    const auto un = static_cast<std::size_t>(n);
    const auto ni = m.intervals.size();
    members.assign(ni, VertexSet(un));
    at_start.assign(ni, VertexSet(un));
    at_end.assign(ni, VertexSet(un));
    intervals_of.assign(un, VertexSet(ni));
    for (std::size_t i = 0; i < ni; ++i) {
      const auto& arc = m.intervals[i];
      for (Vertex v = 0; v < n; ++v) {
        const Rational& p = m.position(v);
        if (!m.contains(arc, p)) continue;
        members[i].insert(v);
        intervals_of[static_cast<std::size_t>(v)].insert(static_cast<Vertex>(i));
        if (p == arc.start) at_start[i].insert(v);
        if (p == arc.end) at_end[i].insert(v);
      }
    }
  }
};

inline std::map<Rational, std::vector<Vertex>> fibres(const FuzzyModel& m, int n) {
  std::map<Rational, std::vector<Vertex>> result;
  for (Vertex v = 0; v < n; ++v) result[m.position(v)].push_back(v);
  return result;
}

inline bool covers_circle(const FuzzyModel& m) {
  if (m.flavor == Flavor::Linear || m.intervals.empty()) return false;
  // Sweep arcs by start offset from 0, tracking the furthest anticlockwise reach.
  std::vector<std::pair<Rational, Rational>> spans;  // [start, end] on [0, 2)
  for (const auto& arc : m.intervals) {
    Rational s = arc.start;
    Rational e = arc.start + m.offset(arc.start, arc.end);
    spans.emplace_back(s, e);
    spans.emplace_back(s + 1, e + 1);
  }
  std::sort(spans.begin(), spans.end());
  // The circle is covered iff [t, t+1] is covered for t = smallest start.
  const Rational begin = spans.front().first;
  Rational reach = begin;
  for (const auto& [s, e] : spans) {
    if (s > reach) break;
    reach = std::max(reach, e);
    if (reach >= begin + 1) return true;
  }
  return false;
}

}  // namespace detail

inline ValidationReport validate_model(const Digraph& d, const FuzzyModel& m) {
  const int n = d.order();
  if (static_cast<int>(m.positions.size()) != n)
    throw Error(ErrorKind::MissingPosition, "model has " + std::to_string(m.positions.size()) +
                                                " positions for " + std::to_string(n) + " vertices");
  for (Vertex v = 0; v < n; ++v) (void)m.position(v);

  ValidationReport report;
  auto record = [&](int axiom, ModelViolation violation) {
    auto& slot = report.checks[static_cast<std::size_t>(axiom)];
    if (!slot) slot = std::move(violation);
  };

  for (Vertex v = 0; v < n; ++v) {
    const Rational& p = m.position(v);
    const bool in_range = m.flavor == Flavor::Linear ? (p >= 0 && p <= 1) : (p >= 0 && p < 1);
    if (!in_range) record(0, {{v}, {}, "position of " + std::to_string(v) + " out of range"});
  }
  for (std::size_t i = 0; i < m.intervals.size(); ++i) {
    const auto& arc = m.intervals[i];
    const int ii = static_cast<int>(i);
    if (arc.start == arc.end) record(0, {{}, {ii}, "interval has equal endpoints"});
    if (m.flavor == Flavor::Linear && arc.start > arc.end) record(0, {{}, {ii}, "linear interval is reversed"});
    if (m.flavor == Flavor::Circular && (arc.start < 0 || arc.start >= 1 || arc.end < 0 || arc.end >= 1))
      record(0, {{}, {ii}, "arc endpoint outside [0,1)"});
  }

  // Axioms 1 and 2: pairwise over intervals.
  for (std::size_t i = 0; i < m.intervals.size(); ++i)
    for (std::size_t j = i + 1; j < m.intervals.size(); ++j) {
      const auto& a = m.intervals[i];
      const auto& b = m.intervals[j];
      const int ii = static_cast<int>(i), jj = static_cast<int>(j);
      if (a.start == b.start || a.start == b.end || a.end == b.start || a.end == b.end)
        record(1, {{}, {ii, jj}, "intervals share an endpoint"});
      if (a.start != a.end && b.start != b.end && !(a == b)) {
        if (m.includes(a, b)) record(2, {{}, {ii, jj}, "interval " + std::to_string(jj) + " inside " + std::to_string(ii)});
        else if (m.includes(b, a)) record(2, {{}, {jj, ii}, "interval " + std::to_string(ii) + " inside " + std::to_string(jj)});
      }
    }

  const detail::IntervalIndex index(m, n);

  // Axiom 3: every adjacent pair shares an interval.
  for (Vertex u = 0; u < n && !report.checks[3]; ++u)
    for (Vertex v : d.neighbours(u)) {
      if (v < u) continue;
      if (!index.intervals_of[static_cast<std::size_t>(u)].intersects(index.intervals_of[static_cast<std::size_t>(v)])) {
        record(3, {{u, v}, {}, "adjacent pair covered by no interval"});
        break;
      }
    }

  // Axiom 4: a non-adjacent pair inside an interval sits on its two endpoints.
  const DenseAdjacency adj(d);
  for (std::size_t i = 0; i < m.intervals.size() && !report.checks[4]; ++i) {
    const auto& members = index.members[i];
    members.for_each([&](Vertex v) {
      if (report.checks[4]) return;
      VertexSet must = members;
      must.erase(v);
      if (index.at_start[i].contains(v)) must -= index.at_end[i];
      else if (index.at_end[i].contains(v)) must -= index.at_start[i];
      VertexSet missing = must - adj.und[static_cast<std::size_t>(v)];
      if (!missing.empty())
        record(4, {{v, missing.first()}, {static_cast<int>(i)}, "non-adjacent pair inside interval off its endpoints"});
    });
  }

  for (const auto& [pos, fibre] : detail::fibres(m, n)) {
    for (std::size_t i = 0; i < fibre.size() && report.fibres_are_cliques; ++i)
      for (std::size_t j = i + 1; j < fibre.size(); ++j)
        if (!d.adjacent(fibre[i], fibre[j])) {
          report.fibres_are_cliques = false;
          report.fibre_witness = ModelViolation{{fibre[i], fibre[j]}, {}, "same position, not adjacent"};
          break;
        }
  }
  report.few_intervals = m.intervals.size() <= static_cast<std::size_t>(n);
  report.covers_circle = detail::covers_circle(m);
  return report;
}

struct NicifyResult {
  FuzzyModel model;
  bool too_many_intervals = false;  // |I| > |V| even after greedy deletion
};

/// Drops intervals greedily in input order while every adjacency stays covered.
inline NicifyResult nicify(const Digraph& d, const FuzzyModel& m) {
  const auto report = validate_model(d, m);
  if (!report.fibres_are_cliques)
    throw Error(ErrorKind::NotFibreCliques, "vertices " + std::to_string(report.fibre_witness->vertices[0]) + " and " +
                                                std::to_string(report.fibre_witness->vertices[1]) +
                                                " share a position but are not adjacent");
  if (!report.valid()) throw Error(ErrorKind::InvalidModel, "nicify needs a model satisfying the axioms");

  const int n = d.order();
  const detail::IntervalIndex index(m, n);
  // Coverage count for every adjacent pair (u < v).
  std::map<std::pair<Vertex, Vertex>, int> cover;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : d.neighbours(u))
      if (u < v)
        cover[{u, v}] = static_cast<int>(
            (index.intervals_of[static_cast<std::size_t>(u)] & index.intervals_of[static_cast<std::size_t>(v)]).size());

  std::vector<bool> keep(m.intervals.size(), true);
  for (std::size_t i = 0; i < m.intervals.size(); ++i) {
    const auto& members = index.members[i];
    std::vector<std::pair<Vertex, Vertex>> covered;
    bool needed = false;
    members.for_each([&](Vertex u) {
      for (Vertex v : d.neighbours(u))
        if (u < v && members.contains(v)) {
          covered.emplace_back(u, v);
          if (cover[{u, v}] <= 1) needed = true;
        }
    });
    if (needed) continue;
    keep[i] = false;
    for (const auto& e : covered) --cover[e];
  }

  NicifyResult result;
  result.model.flavor = m.flavor;
  result.model.positions = m.positions;
  for (std::size_t i = 0; i < m.intervals.size(); ++i)
    if (keep[i]) result.model.intervals.push_back(m.intervals[i]);
  result.too_many_intervals = result.model.intervals.size() > static_cast<std::size_t>(n);
  return result;
}

// ---------------------------------------------------------------------------
// Weak order

/// Vertices grouped by position, classes in strictly increasing position.
struct WeakOrder {
  std::vector<std::vector<Vertex>> classes;
  std::vector<int> rank;                 // per vertex
  std::vector<Rational> class_position;  // per class
  std::vector<VertexSet> below;          // below[r]: vertices of rank < r; size classes+1

  int class_count() const { return static_cast<int>(classes.size()); }
  int rank_of(Vertex v) const { return rank[static_cast<std::size_t>(v)]; }
  bool precedes(Vertex x, Vertex y) const { return rank_of(x) < rank_of(y); }

  /// Vertices with rank in [lo, hi]; empty when lo > hi.
  VertexSet ranks(int lo, int hi) const {
    lo = std::max(lo, 0);
    hi = std::min(hi, class_count() - 1);
    if (lo > hi) return VertexSet(rank.size());
    return below[static_cast<std::size_t>(hi + 1)] - below[static_cast<std::size_t>(lo)];
  }
  VertexSet fibre(Vertex v) const { return ranks(rank_of(v), rank_of(v)); }

  /// Class whose position equals p, or -1.
  int class_at(const Rational& p) const {
    auto it = std::lower_bound(class_position.begin(), class_position.end(), p);
    if (it == class_position.end() || *it != p) return -1;
    return static_cast<int>(it - class_position.begin());
  }
};

namespace detail {

inline WeakOrder build_weak_order(const FuzzyModel& m, int n) {
  WeakOrder order;
  std::vector<Vertex> by_pos(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) by_pos[static_cast<std::size_t>(v)] = v;
  std::stable_sort(by_pos.begin(), by_pos.end(),
                   [&](Vertex a, Vertex b) { return m.position(a) < m.position(b); });
  order.rank.assign(static_cast<std::size_t>(n), -1);
  for (Vertex v : by_pos) {
    if (order.classes.empty() || order.class_position.back() != m.position(v)) {
      order.classes.emplace_back();
      order.class_position.push_back(m.position(v));
    }
    order.classes.back().push_back(v);
    order.rank[static_cast<std::size_t>(v)] = static_cast<int>(order.classes.size()) - 1;
  }
  const auto un = static_cast<std::size_t>(n);
  order.below.assign(order.classes.size() + 1, VertexSet(un));
  for (std::size_t r = 0; r < order.classes.size(); ++r) {
    order.below[r + 1] = order.below[r];
    for (Vertex v : order.classes[r]) order.below[r + 1].insert(v);
  }
  return order;
}

}  // namespace detail

inline WeakOrder weak_order(const Digraph& d, const FuzzyModel& m) {
  if (m.flavor != Flavor::Linear)
    throw Error(ErrorKind::FlavorMismatch, "the weak order is defined on linear models; cut circular models first");
  if (static_cast<int>(m.positions.size()) != d.order())
    throw Error(ErrorKind::MissingPosition, "model and digraph disagree on the vertex count");
  return detail::build_weak_order(m, d.order());
}

/// The fibre at the left endpoint of the unique interval ending at f(x), or the empty set.
inline VertexSet delta(const FuzzyModel& m, const WeakOrder& order, Vertex x) {
  const Rational& p = m.position(x);
  for (const auto& arc : m.intervals)
    if (arc.end == p) {
      const int c = order.class_at(arc.start);
      if (c < 0) break;
      return order.ranks(c, c);
    }
  return VertexSet(order.rank.size());
}

/// delta for every vertex at once.
inline std::vector<VertexSet> delta_all(const FuzzyModel& m, const WeakOrder& order) {
  const auto n = order.rank.size();
  std::vector<VertexSet> result(n, VertexSet(n));
  std::map<Rational, Rational> start_of_end;
  for (const auto& arc : m.intervals) start_of_end.emplace(arc.end, arc.start);
  for (std::size_t c = 0; c < order.classes.size(); ++c) {
    auto it = start_of_end.find(order.class_position[c]);
    if (it == start_of_end.end()) continue;
    const int sc = order.class_at(it->second);
    if (sc < 0) continue;
    const VertexSet fibre = order.ranks(sc, sc);
    for (Vertex v : order.classes[c]) result[static_cast<std::size_t>(v)] = fibre;
  }
  return result;
}

/// [x;y], [x;y), (x;y] or (x;y) depending on the closedness flags.
inline VertexSet vertex_interval(const WeakOrder& order, Vertex x, Vertex y, bool left_closed, bool right_closed) {
  const int rx = order.rank_of(x), ry = order.rank_of(y);
  if (rx > ry) throw Error(ErrorKind::InvertedRange, "vertex " + std::to_string(x) + " is after " + std::to_string(y));
  return order.ranks(left_closed ? rx : rx + 1, right_closed ? ry : ry - 1);
}

/// Model of D[S]: positions restricted (ids renumbered as induced_subdigraph does), same intervals.
inline FuzzyModel restrict_model(const FuzzyModel& m, const VertexSet& s) {
  FuzzyModel result;
  result.flavor = m.flavor;
  result.intervals = m.intervals;
  s.for_each([&](Vertex v) { result.positions.push_back(m.positions.at(static_cast<std::size_t>(v))); });
  return result;
}

}  // namespace fuzzy_kernels
