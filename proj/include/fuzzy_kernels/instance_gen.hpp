#pragma once

// Seeded random instances: fuzzy interval digraphs with their models, threshold digraphs, CNFs.

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/fuzzy_model.hpp>
#include <fuzzy_kernels/random.hpp>
#include <fuzzy_kernels/sat_cograph.hpp>
#include <fuzzy_kernels/threshold.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace fuzzy_kernels {

struct OrientationMix {
  double forward = 1.0 / 3;
  double backward = 1.0 / 3;
  double bidirectional = 1.0 / 3;

  void check() const {
    if (forward < 0 || backward < 0 || bidirectional < 0 || std::abs(forward + backward + bidirectional - 1) > 1e-9)
      throw Error(ErrorKind::PreconditionViolation, "orientation probabilities must be non-negative and sum to 1");
  }
  Orientation sample(Rng& rng) const {
    const double u = rng.uniform();
    if (u < forward) return Orientation::Forward;
    if (u < forward + backward) return Orientation::Backward;
    return Orientation::Bidirectional;
  }
};

struct FuzzyInstance {
  Digraph graph;
  FuzzyModel model;
};

struct FuzzyGenOptions {
  int intervals = 0;              // interval attempts target; 0 picks one in [1, n]
  double max_length = 0;          // longest arc as a fraction of the circle; 0 picks one in (0, 1/3]
  double fuzzy_edge_chance = 0.5;  // adjacency chance for pairs sitting on both endpoints of an interval
};

namespace detail {

// Arc arithmetic on integer ticks of a circle (or segment) of `ticks` units.
struct TickArcs {
  long ticks;
  bool circular;

  long offset(long from, long to) const { return circular ? ((to - from) % ticks + ticks) % ticks : to - from; }
  bool contains(std::pair<long, long> arc, long p) const {
    if (!circular || arc.first < arc.second) return arc.first <= p && p <= arc.second;
    return p >= arc.first || p <= arc.second;
  }
  bool includes(std::pair<long, long> outer, std::pair<long, long> inner) const {
    const long len = offset(outer.first, outer.second);
    const long s = offset(outer.first, inner.first);
    const long e = offset(outer.first, inner.second);
    return 0 <= s && s <= e && e <= len;
  }
};

}  // namespace detail

/// Builds the model first (arcs without shared endpoints or inclusions, then vertex sites),
/// then derives adjacency: forced inside an arc, a coin flip on its two endpoints.
inline FuzzyInstance gen_fuzzy(int n, Flavor flavor, bool injective_positions, const OrientationMix& mix,
                               std::uint64_t seed, const FuzzyGenOptions& options = {}) {
  mix.check();
  if (n < 0) throw Error(ErrorKind::PreconditionViolation, "negative vertex count");
  Rng rng(seed);
  const bool circular = flavor == Flavor::Circular;
  const long ticks = 8L * (n + 2);
  const detail::TickArcs arcs{ticks, circular};

  const int target = options.intervals > 0 ? options.intervals : rng.uniform_int(1, std::max(1, n));
  const long max_len = options.max_length > 0
                           ? std::max(2L, static_cast<long>(options.max_length * static_cast<double>(ticks)))
                           : rng.uniform_int(2, static_cast<int>(std::max(3L, ticks / 3)));
  std::vector<std::pair<long, long>> intervals;
  std::set<long> endpoints;
  for (int attempt = 0; attempt < 6 * target && static_cast<int>(intervals.size()) < target; ++attempt) {
    const long len = rng.uniform_int(2, static_cast<int>(std::min(max_len, ticks - 1)));
    std::pair<long, long> arc;
    if (circular) {
      const long s = static_cast<long>(rng.below(static_cast<std::uint64_t>(ticks)));
      arc = {s, (s + len) % ticks};
    } else {
      const long s = static_cast<long>(rng.below(static_cast<std::uint64_t>(ticks - len + 1)));
      arc = {s, s + len};
    }
    if (endpoints.count(arc.first) || endpoints.count(arc.second)) continue;
    const bool clash = std::any_of(intervals.begin(), intervals.end(), [&](const auto& other) {
      return arcs.includes(other, arc) || arcs.includes(arc, other);
    });
    if (clash) continue;
    intervals.push_back(arc);
    endpoints.insert(arc.first);
    endpoints.insert(arc.second);
  }
  const std::vector<long> endpoint_list(endpoints.begin(), endpoints.end());
  auto covered = [&](long p) {
    return std::any_of(intervals.begin(), intervals.end(), [&](const auto& arc) { return arcs.contains(arc, p); });
  };
  auto random_site = [&]() -> long {
    if (!endpoint_list.empty() && rng.chance(0.4)) return endpoint_list[rng.below(endpoint_list.size())];
    return static_cast<long>(rng.below(static_cast<std::uint64_t>(circular ? ticks : ticks + 1)));
  };

  // Vertex sites; repeated sites only where an arc covers them, at most three per site.
  const int distinct = injective_positions ? n : (n == 0 ? 0 : rng.uniform_int(std::max(1, (n + 2) / 3), n));
  std::vector<long> sites;
  std::set<long> used;
  while (static_cast<int>(sites.size()) < distinct) {
    const long p = random_site();
    if (used.insert(p).second) sites.push_back(p);
  }
  std::vector<long> position(sites);
  std::vector<int> load(sites.size(), 1);
  while (static_cast<int>(position.size()) < n) {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < sites.size(); ++i)
      if (load[i] < 3 && covered(sites[i])) open.push_back(i);
    if (open.empty()) {
      long p;
      do p = random_site();
      while (used.count(p));
      used.insert(p);
      sites.push_back(p);
      load.push_back(1);
      position.push_back(p);
      continue;
    }
    const std::size_t pick = open[rng.below(open.size())];
    ++load[pick];
    position.push_back(sites[pick]);
  }

  std::vector<Vertex> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
  rng.shuffle(id);

  DigraphBuilder builder(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const long p = position[static_cast<std::size_t>(i)], q = position[static_cast<std::size_t>(j)];
      bool forced = false, fuzzy = false;
      for (const auto& arc : intervals) {
        if (!arcs.contains(arc, p) || !arcs.contains(arc, q)) continue;
        if (p != q && ((p == arc.first && q == arc.second) || (q == arc.first && p == arc.second))) fuzzy = true;
        else forced = true;
      }
      if (forced || (fuzzy && rng.chance(options.fuzzy_edge_chance)))
        builder.add_edge(id[static_cast<std::size_t>(i)], id[static_cast<std::size_t>(j)], mix.sample(rng));
    }

  FuzzyInstance result;
  result.graph = builder.build();
  result.model.flavor = flavor;
  result.model.positions.resize(static_cast<std::size_t>(n));
  const auto tick = [&](long t) { return Rational(BigInt(t), BigInt(ticks)); };
  for (int i = 0; i < n; ++i)
    result.model.positions[static_cast<std::size_t>(id[static_cast<std::size_t>(i)])] = tick(position[static_cast<std::size_t>(i)]);
  for (const auto& arc : intervals) result.model.intervals.push_back({tick(arc.first), tick(arc.second)});
  return result;
}

struct ThresholdInstance {
  Digraph graph;
  ThresholdSequence sequence;
};

/// Random union/join sequence over randomly permuted ids.
inline ThresholdInstance gen_threshold(int n, const OrientationMix& mix, std::uint64_t seed, double join_chance = 0.5) {
  mix.check();
  Rng rng(seed);
  std::vector<Vertex> id(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
  rng.shuffle(id);
  ThresholdInstance result;
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (int i = 0; i < n; ++i) {
    const Vertex v = id[static_cast<std::size_t>(i)];
    StepKind kind = i == 0 ? StepKind::Initial : (rng.chance(join_chance) ? StepKind::Join : StepKind::Union);
    result.sequence.steps.push_back({v, kind});
    if (kind != StepKind::Join) continue;
    for (int j = 0; j < i; ++j) {
      const Vertex u = id[static_cast<std::size_t>(j)];
      const Orientation o = mix.sample(rng);
      if (o != Orientation::Backward) arcs.emplace_back(v, u);
      if (o != Orientation::Forward) arcs.emplace_back(u, v);
    }
  }
  result.graph = Digraph(n, arcs);
  return result;
}

/// Clauses of 1..max_clause_len distinct variables with random signs.
inline CnfFormula gen_cnf(int variables, int clauses, int max_clause_len, std::uint64_t seed) {
  if (variables < 0 || clauses < 0 || (clauses > 0 && (variables == 0 || max_clause_len < 1)))
    throw Error(ErrorKind::PreconditionViolation, "cannot build clauses with these parameters");
  Rng rng(seed);
  CnfFormula phi;
  phi.variables = variables;
  std::vector<int> vars(static_cast<std::size_t>(variables));
  for (int v = 0; v < variables; ++v) vars[static_cast<std::size_t>(v)] = v;
  for (int c = 0; c < clauses; ++c) {
    const int len = rng.uniform_int(1, std::min(max_clause_len, variables));
    rng.shuffle(vars);
    std::vector<Literal> clause;
    for (int i = 0; i < len; ++i) clause.push_back({vars[static_cast<std::size_t>(i)], rng.chance(0.5)});
    std::sort(clause.begin(), clause.end());
    phi.clauses.push_back(std::move(clause));
  }
  return phi;
}

}  // namespace fuzzy_kernels
