#pragma once

// Kernels of arbitrarily oriented threshold graphs in linear time.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/numeric.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fuzzy_kernels {

enum class StepKind { Initial, Union, Join };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Initial: return "initial";
    case StepKind::Union: return "union";
    case StepKind::Join: return "join";
  }
  return "?";
}

struct ThresholdStep {
  Vertex vertex;
  StepKind kind;
  friend bool operator==(const ThresholdStep&, const ThresholdStep&) = default;
};

/// Construction order: a union step adds an isolated vertex, a join step a dominating one.
struct ThresholdSequence {
  std::vector<ThresholdStep> steps;
  friend bool operator==(const ThresholdSequence&, const ThresholdSequence&) = default;
};

/// Recognition by peeling isolated and dominating vertices. Throws NotThreshold.
inline ThresholdSequence threshold_sequence(const Digraph& d) {
  const int n = d.order();
  ThresholdSequence seq;
  if (n == 0) return seq;
  // Counting sort by degree; removals keep the relative order of effective degrees.
  std::vector<std::vector<Vertex>> buckets(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) buckets[d.neighbours(v).size()].push_back(v);
  std::vector<Vertex> sorted;
  sorted.reserve(static_cast<std::size_t>(n));
  for (const auto& b : buckets) sorted.insert(sorted.end(), b.begin(), b.end());

  std::vector<ThresholdStep> peeled;
  std::size_t lo = 0, hi = sorted.size();  // remaining: sorted[lo, hi)
  std::size_t dominating = 0;
  while (hi - lo > 1) {
    const std::size_t remaining = hi - lo;
    const Vertex a = sorted[lo];
    const Vertex b = sorted[hi - 1];
    if (d.neighbours(a).size() - dominating == 0) {
      peeled.push_back({a, StepKind::Union});
      ++lo;
    } else if (d.neighbours(b).size() - dominating == remaining - 1) {
      peeled.push_back({b, StepKind::Join});
      ++dominating;
      --hi;
    } else {
      throw Error(ErrorKind::NotThreshold, "no isolated or dominating vertex among " + std::to_string(remaining) +
                                               " remaining (min-degree " + std::to_string(a) + ", max-degree " +
                                               std::to_string(b) + ")");
    }
  }
  seq.steps.push_back({sorted[lo], StepKind::Initial});
  seq.steps.insert(seq.steps.end(), peeled.rbegin(), peeled.rend());
  return seq;
}

/// Throws InvalidSequence unless replaying `seq` reproduces the underlying graph of d.
inline void check_sequence(const Digraph& d, const ThresholdSequence& seq) {
  const int n = d.order();
  if (static_cast<int>(seq.steps.size()) != n)
    throw Error(ErrorKind::InvalidSequence, "sequence length differs from vertex count");
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const auto& s = seq.steps[i];
    if (s.vertex < 0 || s.vertex >= n || position[static_cast<std::size_t>(s.vertex)] >= 0)
      throw Error(ErrorKind::InvalidSequence, "step " + std::to_string(i) + " repeats or misnames a vertex");
    if ((i == 0) != (s.kind == StepKind::Initial))
      throw Error(ErrorKind::InvalidSequence, "exactly the first step must be initial");
    position[static_cast<std::size_t>(s.vertex)] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const auto& s = seq.steps[i];
    std::size_t earlier = 0;
    for (Vertex u : d.neighbours(s.vertex))
      if (position[static_cast<std::size_t>(u)] < static_cast<int>(i)) ++earlier;
    const std::size_t expected = s.kind == StepKind::Join ? i : 0;
    if (earlier != expected)
      throw Error(ErrorKind::InvalidSequence, "vertex " + std::to_string(s.vertex) + " does not match its " +
                                                  to_string(s.kind) + " step");
  }
}

namespace detail {

// Every kernel is {e} plus the union vertices after e, for e the initial vertex or a join.
// Returns the sequence positions e for which that set is a kernel avoiding `forbidden`.
inline std::vector<std::size_t> threshold_kernel_starts(const Digraph& d, const ThresholdSequence& seq,
                                                        const VertexSet* forbidden) {
  check_sequence(d, seq);
  const std::size_t n = seq.steps.size();
  std::vector<std::size_t> result;
  if (n == 0) return result;
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[static_cast<std::size_t>(seq.steps[i].vertex)] = i;
  auto is_join = [&](std::size_t i) { return seq.steps[i].kind == StepKind::Join; };

  // g[j]: latest union out-neighbour of join j placed before j, or -1.
  std::vector<long> g(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_join(j)) continue;
    for (Vertex w : d.out(seq.steps[j].vertex)) {
      const std::size_t p = pos[static_cast<std::size_t>(w)];
      if (p < j && !is_join(p)) g[j] = std::max(g[j], static_cast<long>(p));
    }
  }
  // joins_after[e] = joins at positions > e; escaped_after[e] = joins with g > e.
  std::vector<std::size_t> joins_after(n + 1, 0), escaped_after(n + 1, 0), g_hist(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (is_join(j) && g[j] >= 0) ++g_hist[static_cast<std::size_t>(g[j])];
  for (std::size_t i = n; i-- > 0;) {
    joins_after[i] = joins_after[i + 1] + ((i + 1 < n && is_join(i + 1)) ? 1 : 0);
    escaped_after[i] = escaped_after[i + 1] + (i + 1 < n ? g_hist[i + 1] : 0);
  }
  // Latest forbidden union vertex.
  long last_forbidden_union = -1;
  if (forbidden)
    for (std::size_t i = 0; i < n; ++i)
      if (!is_join(i) && i > 0 && forbidden->contains(seq.steps[i].vertex)) last_forbidden_union = static_cast<long>(i);

  for (std::size_t e = 0; e < n; ++e) {
    if (e > 0 && !is_join(e)) continue;
    const Vertex v = seq.steps[e].vertex;
    if (forbidden && forbidden->contains(v)) continue;
    if (last_forbidden_union > static_cast<long>(e)) continue;
    // Every earlier vertex must point at v.
    std::size_t from_earlier = 0;
    for (Vertex u : d.in(v))
      if (pos[static_cast<std::size_t>(u)] < e) ++from_earlier;
    if (from_earlier != e) continue;
    // Every later join must point at v or at a union vertex in (e, j).
    std::size_t uncovered = joins_after[e] - escaped_after[e];
    for (Vertex u : d.in(v)) {
      const std::size_t j = pos[static_cast<std::size_t>(u)];
      if (j > e && is_join(j) && g[j] <= static_cast<long>(e)) --uncovered;
    }
    if (uncovered == 0) result.push_back(e);
  }
  return result;
}

inline VertexSet threshold_kernel_at(const Digraph& d, const ThresholdSequence& seq, std::size_t e) {
  VertexSet k = d.empty_set();
  k.insert(seq.steps[e].vertex);
  for (std::size_t i = e + 1; i < seq.steps.size(); ++i)
    if (seq.steps[i].kind != StepKind::Join) k.insert(seq.steps[i].vertex);
  return k;
}

}  // namespace detail

/// Number of kernels disjoint from `forbidden`.
inline BigInt threshold_kernel_count(const Digraph& d, const ThresholdSequence& seq, const VertexSet& forbidden) {
  if (d.order() == 0) {
    check_sequence(d, seq);
    return 1;
  }
  return BigInt(detail::threshold_kernel_starts(d, seq, &forbidden).size());
}

inline BigInt threshold_kernel_count(const Digraph& d, const ThresholdSequence& seq) {
  return threshold_kernel_count(d, seq, d.empty_set());
}

inline std::optional<VertexSet> threshold_kernel_find(const Digraph& d, const ThresholdSequence& seq) {
  if (d.order() == 0) {
    check_sequence(d, seq);
    return d.empty_set();
  }
  const auto starts = detail::threshold_kernel_starts(d, seq, nullptr);
  if (starts.empty()) return std::nullopt;
  return detail::threshold_kernel_at(d, seq, starts.front());
}

/// All kernels, sorted lexicographically.
inline std::vector<VertexSet> threshold_kernel_enumerate(const Digraph& d, const ThresholdSequence& seq) {
  std::vector<VertexSet> result;
  if (d.order() == 0) {
    check_sequence(d, seq);
    result.push_back(d.empty_set());
    return result;
  }
  for (std::size_t e : detail::threshold_kernel_starts(d, seq, nullptr))
    result.push_back(detail::threshold_kernel_at(d, seq, e));
  sort_lexicographically(result);
  return result;
}

}  // namespace fuzzy_kernels
