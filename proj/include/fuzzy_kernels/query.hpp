#pragma once

#include <fuzzy_kernels/numeric.hpp>
#include <fuzzy_kernels/vertex_set.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace fuzzy_kernels {

/// Constraint bundle on kernels: lower <= k <= upper, optional exact total weight and cardinality.
struct KernelQuery {
  std::optional<VertexSet> lower;
  std::optional<VertexSet> upper;
  std::optional<std::vector<Rational>> weights;  // one entry per vertex
  std::optional<Rational> target;
  std::optional<int> size;

  bool empty_bounds() const { return !lower && !upper; }

  /// False when lower is not contained in upper: the query then matches nothing.
  bool consistent() const {
    if (lower && upper) return lower->is_subset_of(*upper);
    return true;
  }

  bool in_upper(Vertex v) const { return !upper || upper->contains(v); }
  bool in_lower(Vertex v) const { return lower && lower->contains(v); }

  Rational weight(Vertex v) const {
    if (!weights) return Rational(0);
    return (*weights)[static_cast<std::size_t>(v)];
  }
  Rational weight_of(const VertexSet& k) const {
    Rational total = 0;
    if (weights) k.for_each([&](Vertex v) { total += (*weights)[static_cast<std::size_t>(v)]; });
    return total;
  }

  /// Whether a set meets every constraint (kernel-hood is not checked here).
  bool accepts(const VertexSet& k) const {
    if (lower && !lower->is_subset_of(k)) return false;
    if (upper && !k.is_subset_of(*upper)) return false;
    if (size && static_cast<int>(k.size()) != *size) return false;
    if (target && weight_of(k) != *target) return false;
    return true;
  }
};

struct CountReport {
  BigInt total = 0;
  std::map<int, BigInt> by_size;                     // empty when histograms were not requested
  std::optional<std::map<Rational, BigInt>> by_weight;  // present iff the query carried weights
  std::optional<VertexSet> witness;

  void add(const CountReport& other) {
    total += other.total;
    for (const auto& [k, v] : other.by_size) by_size[k] += v;
    if (other.by_weight) {
      if (!by_weight) by_weight.emplace();
      for (const auto& [k, v] : *other.by_weight) (*by_weight)[k] += v;
    }
    if (!witness && other.witness) witness = other.witness;
  }
};

}  // namespace fuzzy_kernels
