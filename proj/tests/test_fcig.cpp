#include "support.hpp"

#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/fcig_engine.hpp>
#include <fuzzy_kernels/instance_gen.hpp>
#include <fuzzy_kernels/oracle.hpp>

#include <gtest/gtest.h>

using namespace fk_test;

namespace {

VertexSet set(int n, std::initializer_list<Vertex> vs) { return VertexSet(static_cast<std::size_t>(n), vs); }

FuzzyInstance random_circular(std::uint64_t seed, int max_n = 12) {
  const int n = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(max_n));
  return gen_fuzzy(n, Flavor::Circular, seed % 3 == 0, {}, seed);
}

// The pair (a, b) a kernel of size >= 2 is charged to: consecutive members around the circle with
// vertex 0 in [f(a); f(b)).
std::pair<Vertex, Vertex> owner(const FuzzyModel& m, const VertexSet& k) {
  auto members = k.members();
  std::sort(members.begin(), members.end(), [&](Vertex x, Vertex y) { return m.position(x) < m.position(y); });
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Vertex a = members[i], b = members[(i + 1) % members.size()];
    if (m.offset(m.position(a), m.position(0)) < m.offset(m.position(a), m.position(b))) return {a, b};
  }
  return {-1, -1};
}

}  // namespace

TEST(SingleVertexKernels, Basics) {
  // Star with leaves pointing at the centre 0.
  const Digraph star(4, {{1, 0}, {2, 0}, {3, 0}});
  EXPECT_EQ(single_vertex_kernels(star), (std::vector<VertexSet>{set(4, {0})}));
  EXPECT_TRUE(single_vertex_kernels(cycle_graph(3, Orientation::Forward)).empty());
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = random_circular(seed);
    std::vector<VertexSet> want;
    for (const auto& k : subset_kernels(inst.graph))
      if (k.size() == 1) want.push_back(k);
    EXPECT_EQ(single_vertex_kernels(inst.graph), want);
  }
}

TEST(DeleteAbsorbed, PreservesKernelsThroughThePair) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = random_circular(seed, 10);
    const auto& d = inst.graph;
    const auto m = nicify(d, inst.model).model;
    for (Vertex a = 0; a < d.order(); ++a)
      for (Vertex b = 0; b < d.order(); ++b) {
        if (a == b || d.adjacent(a, b)) continue;
        InducedSubdigraph sub;
        try {
          sub = delete_absorbed(d, m, a, b);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolation);
          continue;
        }
        ++checked;
        std::vector<VertexSet> before, after;
        for (const auto& k : subset_kernels(d))
          if (k.contains(a) && k.contains(b)) before.push_back(k);
        const Vertex sa = sub.from_original[static_cast<std::size_t>(a)];
        const Vertex sb = sub.from_original[static_cast<std::size_t>(b)];
        for (const auto& k : subset_kernels(sub.graph))
          if (k.contains(sa) && k.contains(sb)) after.push_back(sub.lift(k));
        sort_lexicographically(before);
        sort_lexicographically(after);
        EXPECT_EQ(before, after) << "seed " << seed;
        // Deleted vertices all point into {a, b}.
        const VertexSet gone = d.all() - sub.lift(sub.graph.all());
        gone.for_each([&](Vertex v) { EXPECT_TRUE(d.has_arc(v, a) || d.has_arc(v, b)); });
      }
  }
  EXPECT_GT(checked, 200);
}

TEST(CutToFlig, EvenSixCycle) {
  const Digraph c6 = cycle_graph(6, Orientation::Forward);
  const auto m = cycle_model(6);
  // {0, 2, 4} and {1, 3, 5} are the kernels; vertex 0 lies in [f(4); f(0)).
  const auto cut = cut_to_flig(c6, m, 4, 0);
  EXPECT_EQ(cut.model.flavor, Flavor::Linear);
  EXPECT_TRUE(validate_model(cut.graph, cut.model).valid());
  const auto& pos = cut.model.positions;
  for (Vertex v = 0; v < cut.graph.order(); ++v) {
    EXPECT_LE(*pos[static_cast<std::size_t>(cut.b)], *pos[static_cast<std::size_t>(v)]);
    EXPECT_GE(*pos[static_cast<std::size_t>(cut.a)], *pos[static_cast<std::size_t>(v)]);
  }
  int with_pair = 0;
  for (const auto& k : subset_kernels(cut.graph))
    if (k.contains(cut.a) && k.contains(cut.b)) ++with_pair;
  EXPECT_EQ(with_pair, 1);
  const auto dec = fcig_decomposition(c6, m);
  BigInt total = BigInt(dec.singles.size());
  for (const auto& [pair, c] : dec.pairs) total += c;
  EXPECT_EQ(total, 2);
  EXPECT_EQ(fcig_query(c6, m, {}).total, BigInt(subset_kernels(c6).size()));
}

TEST(CutToFlig, OutputsAreValidAndPreserveKernels) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = random_circular(seed, 10);
    const auto& d = inst.graph;
    const auto m = nicify(d, inst.model).model;
    for (Vertex a = 0; a < d.order(); ++a)
      for (Vertex b = 0; b < d.order(); ++b) {
        if (a == b || d.adjacent(a, b)) continue;
        CutInstance cut;
        try {
          cut = cut_to_flig(d, m, a, b);
        } catch (const Error&) {
          continue;
        }
        ++checked;
        const auto report = validate_model(cut.graph, cut.model);
        EXPECT_TRUE(report.valid()) << "seed " << seed;
        EXPECT_TRUE(report.fibres_are_cliques);
        std::vector<VertexSet> before, after;
        for (const auto& k : subset_kernels(d))
          if (k.contains(a) && k.contains(b)) before.push_back(k);
        for (const auto& k : subset_kernels(cut.graph)) {
          if (!k.contains(cut.a) || !k.contains(cut.b)) continue;
          VertexSet lifted = d.empty_set();
          k.for_each([&](Vertex v) { lifted.insert(cut.to_original[static_cast<std::size_t>(v)]); });
          after.push_back(lifted);
        }
        sort_lexicographically(before);
        sort_lexicographically(after);
        EXPECT_EQ(before, after) << "seed " << seed << " pair " << a << "," << b;
      }
  }
  EXPECT_GT(checked, 200);
}

TEST(FcigQuery, Cycles) {
  EXPECT_EQ(fcig_query(cycle_graph(5, Orientation::Forward), cycle_model(5), {}).total, 0);
  const auto c8 = fcig_query(cycle_graph(8, Orientation::Forward), cycle_model(8), {});
  EXPECT_EQ(c8.total, BigInt(subset_kernels(cycle_graph(8, Orientation::Forward)).size()));
  EXPECT_EQ(c8.total, 2);
  const auto bi5 = fcig_query(cycle_graph(5, Orientation::Bidirectional), cycle_model(5), {});
  EXPECT_EQ(bi5.total, BigInt(oracle::enumerate_maximal_independent_sets(cycle_graph(5, Orientation::Bidirectional)).size()));
  EXPECT_EQ(bi5.total, 5);
}

TEST(FcigQuery, Errors) {
  auto m = cycle_model(5);
  m.intervals.push_back({r(9, 10), r(1, 2)});  // covers 0, 1, 2 but 0 and 2 are not adjacent
  try {
    fcig_query(cycle_graph(5, Orientation::Forward), m, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidModel);
  }
  EXPECT_THROW(fcig_query(six_vertex_graph(), six_vertex_model(), {}), Error);
}

TEST(FcigQuery, MatchesOracleWithPartition) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = random_circular(seed);
    const auto kernels = subset_kernels(inst.graph);
    for (bool reuse : {false, true}) {
      const auto report = fcig_query(inst.graph, inst.model, {}, {reuse, true, true});
      EXPECT_EQ(report.total, BigInt(kernels.size())) << "seed " << seed;
      EXPECT_EQ(report.by_size, size_histogram(kernels)) << "seed " << seed;
      if (report.witness) EXPECT_TRUE(is_kernel(inst.graph, *report.witness));
      const auto dec = fcig_decomposition(inst.graph, inst.model, {}, reuse);
      std::map<std::pair<Vertex, Vertex>, BigInt> charged;
      std::size_t singles = 0;
      for (const auto& k : kernels) {
        if (k.size() == 1) ++singles;
        else charged[owner(inst.model, k)] += 1;
      }
      EXPECT_EQ(dec.pairs, charged) << "seed " << seed;
      EXPECT_EQ(dec.singles.size(), singles);
    }
  }
}

TEST(FcigQuery, ConstrainedMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = random_circular(seed + 500, 10);
    const KernelQuery q = random_query(inst.graph.order(), seed + 77);
    std::vector<VertexSet> want;
    for (const auto& k : subset_kernels(inst.graph))
      if (query_holds(q, k)) want.push_back(k);
    const auto report = fcig_query(inst.graph, inst.model, q);
    EXPECT_EQ(report.total, BigInt(want.size())) << "seed " << seed;
    if (report.witness) EXPECT_TRUE(is_kernel(inst.graph, *report.witness) && query_holds(q, *report.witness));
    EXPECT_EQ(report.witness.has_value(), !want.empty());
    sort_lexicographically(want);
    EXPECT_EQ(fcig_enumerate(inst.graph, inst.model, q, 1u << 20), want) << "seed " << seed;
  }
}

TEST(MisCounts, Examples) {
  const auto c5 = mis_counts(cycle_graph(5, Orientation::Bidirectional), cycle_model(5));
  EXPECT_EQ(c5.total, 5);
  EXPECT_EQ(c5.by_size, (std::map<int, BigInt>{{2, 5}}));

  // K4 on one fibre.
  DigraphBuilder kb(4);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) kb.add_edge(u, v, Orientation::Bidirectional);
  FuzzyModel one;
  one.flavor = Flavor::Circular;
  one.positions.assign(4, r(1, 2));
  one.intervals = {{r(1, 4), r(3, 4)}};
  EXPECT_EQ(mis_counts(kb.build(), one).by_size, (std::map<int, BigInt>{{1, 4}}));

  FuzzyModel spread;
  spread.flavor = Flavor::Linear;
  for (int i = 0; i < 4; ++i) spread.positions.push_back(r(i, 4));
  EXPECT_EQ(mis_counts(Digraph(4), spread).by_size, (std::map<int, BigInt>{{4, 1}}));

  try {
    mis_counts(cycle_graph(5, Orientation::Forward), cycle_model(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotBidirectional);
  }
}

TEST(MisCounts, RandomBidirectional) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 12);
    const auto inst = gen_fuzzy(n, Flavor::Circular, seed % 2 == 0, {0, 0, 1}, seed);
    const auto mis = oracle::enumerate_maximal_independent_sets(inst.graph);
    EXPECT_EQ(mis_counts(inst.graph, inst.model).by_size, size_histogram(mis)) << "seed " << seed;
  }
}
