#pragma once

// Exponential-time ground truth for small digraphs.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/query.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace fuzzy_kernels::oracle {

struct Limits {
  int max_mis_vertices = 40;
  int max_kernel_vertices = 20;
};

namespace detail {

using Mask = std::uint64_t;

inline void require_order(const Digraph& d, int cap, const char* what) {
  if (d.order() > cap)
    throw Error(ErrorKind::InstanceTooLarge, std::string(what) + ": " + std::to_string(d.order()) +
                                                 " vertices exceeds cap " + std::to_string(cap));
  if (d.order() > 64) throw Error(ErrorKind::InstanceTooLarge, "oracle masks hold at most 64 vertices");
}

// Bron-Kerbosch with pivoting over the complement graph: maximal cliques there are
// maximal independent sets here.
template <typename Emit>
void bron_kerbosch(const std::vector<Mask>& non_adj, Mask r, Mask p, Mask x, Emit& emit) {
  if (p == 0) {
    if (x == 0) emit(r);
    return;
  }
  Mask px = p | x;
  int pivot = -1;
  int best = -1;
  for (Mask m = px; m != 0; m &= m - 1) {
    int u = std::countr_zero(m);
    int c = std::popcount(p & non_adj[static_cast<std::size_t>(u)]);
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  for (Mask m = p & ~non_adj[static_cast<std::size_t>(pivot)]; m != 0; m &= m - 1) {
    int v = std::countr_zero(m);
    Mask bit = Mask{1} << v;
    const Mask nv = non_adj[static_cast<std::size_t>(v)];
    bron_kerbosch(non_adj, r | bit, p & nv, x & nv, emit);
    p &= ~bit;
    x |= bit;
  }
}

inline VertexSet to_set(int n, Mask m) {
  VertexSet s(static_cast<std::size_t>(n));
  for (; m != 0; m &= m - 1) s.insert(std::countr_zero(m));
  return s;
}

}  // namespace detail

/// Every maximal independent set of the underlying undirected graph, sorted lexicographically.
inline std::vector<VertexSet> enumerate_maximal_independent_sets(const Digraph& d, const Limits& limits = {}) {
  detail::require_order(d, limits.max_mis_vertices, "maximal independent set enumeration");
  const int n = d.order();
  std::vector<detail::Mask> non_adj(static_cast<std::size_t>(n));
  const detail::Mask all = n == 64 ? ~detail::Mask{0} : (detail::Mask{1} << n) - 1;
  for (Vertex v = 0; v < n; ++v) {
    detail::Mask adj = detail::Mask{1} << v;
    for (Vertex w : d.neighbours(v)) adj |= detail::Mask{1} << w;
    non_adj[static_cast<std::size_t>(v)] = all & ~adj;
  }
  std::vector<VertexSet> result;
  auto emit = [&](detail::Mask m) { result.push_back(detail::to_set(n, m)); };
  detail::bron_kerbosch(non_adj, 0, all, 0, emit);
  sort_lexicographically(result);
  return result;
}

/// All kernels, obtained by filtering maximal independent sets through the absorption test.
inline std::vector<VertexSet> brute_force_kernels(const Digraph& d, const Limits& limits = {}) {
  detail::require_order(d, limits.max_kernel_vertices, "kernel enumeration");
  Limits inner = limits;
  inner.max_mis_vertices = std::max(limits.max_mis_vertices, limits.max_kernel_vertices);
  std::vector<VertexSet> result;
  for (auto& s : enumerate_maximal_independent_sets(d, inner))
    if (absorbs(d, s, d.all())) result.push_back(std::move(s));
  return result;
}

inline std::vector<VertexSet> brute_force_query_kernels(const Digraph& d, const KernelQuery& q,
                                                        const Limits& limits = {}) {
  detail::require_order(d, limits.max_kernel_vertices, "kernel enumeration");
  if (!q.consistent()) return {};
  std::vector<VertexSet> result;
  for (auto& k : brute_force_kernels(d, limits))
    if (q.accepts(k)) result.push_back(std::move(k));
  return result;
}

inline BigInt brute_force_query_count(const Digraph& d, const KernelQuery& q, const Limits& limits = {}) {
  return BigInt(brute_force_query_kernels(d, q, limits).size());
}

/// Same shape of report as the polynomial engines produce, for side-by-side comparison.
inline CountReport brute_force_report(const Digraph& d, const KernelQuery& q, const Limits& limits = {}) {
  CountReport report;
  if (q.weights) report.by_weight.emplace();
  for (const auto& k : brute_force_query_kernels(d, q, limits)) {
    report.total += 1;
    report.by_size[static_cast<int>(k.size())] += 1;
    if (q.weights) (*report.by_weight)[q.weight_of(k)] += 1;
    if (!report.witness) report.witness = k;
  }
  return report;
}

}  // namespace fuzzy_kernels::oracle
