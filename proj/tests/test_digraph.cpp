#include "support.hpp"

#include <fuzzy_kernels/digraph.hpp>
#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/instance_gen.hpp>

#include <gtest/gtest.h>

using namespace fk_test;

namespace {

VertexSet set(int n, std::initializer_list<Vertex> vs) { return VertexSet(static_cast<std::size_t>(n), vs); }

}  // namespace

TEST(Digraph, RejectsLoopsAndDuplicates) {
  EXPECT_THROW(Digraph(2, {{0, 0}}), Error);
  EXPECT_THROW(Digraph(2, {{0, 1}, {0, 1}}), Error);
  EXPECT_THROW(Digraph(2, {{0, 2}}), Error);
}

TEST(Digraph, CountsEdgesOncePerPair) {
  const Digraph d(3, {{0, 1}, {1, 0}, {1, 2}});
  EXPECT_EQ(d.arc_count(), 3u);
  EXPECT_EQ(d.edge_count(), 2u);
  EXPECT_TRUE(d.adjacent(2, 1));
  EXPECT_FALSE(d.has_arc(2, 1));
  EXPECT_FALSE(d.all_bidirectional());
}

TEST(Digraph, OutNeighbours) {
  const Digraph single(2, {{0, 1}});
  EXPECT_EQ(out_neighbours(single, set(2, {0})), set(2, {1}));
  EXPECT_TRUE(out_neighbours(single, set(2, {})).empty());
  const Digraph bi(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(out_neighbours(bi, set(2, {0})), set(2, {1}));
  EXPECT_EQ(in_neighbours(single, set(2, {1})), set(2, {0}));
}

TEST(Digraph, Absorbs) {
  const Digraph d(2, {{0, 1}});
  EXPECT_TRUE(absorbs(d, set(2, {1}), set(2, {0, 1})));
  EXPECT_FALSE(absorbs(d, set(2, {0}), set(2, {0, 1})));
  EXPECT_TRUE(absorbs(d, set(2, {0}), set(2, {})));
}

TEST(Digraph, Independence) {
  EXPECT_FALSE(is_independent(Digraph(2, {{0, 1}}), set(2, {0, 1})));
  EXPECT_TRUE(is_independent(Digraph(2, {{0, 1}}), set(2, {})));
  EXPECT_TRUE(is_independent(path_graph(3), set(3, {0, 2})));
}

TEST(Digraph, KernelPredicate) {
  const Digraph c3 = cycle_graph(3, Orientation::Forward);
  for (std::uint32_t s = 0; s < 8; ++s) EXPECT_FALSE(is_kernel(c3, from_mask(3, s)));
  const Digraph p = path_graph(3, Orientation::Forward);
  EXPECT_TRUE(is_kernel(p, set(3, {0, 2})));
  EXPECT_EQ(subset_kernels(p).size(), 1u);
  EXPECT_TRUE(is_kernel(Digraph(1), set(1, {0})));
}

TEST(Digraph, InducedSubdigraph) {
  const Digraph c3 = cycle_graph(3, Orientation::Forward);
  const auto sub = induced_subdigraph(c3, set(3, {0, 1}));
  EXPECT_EQ(sub.graph.order(), 2);
  EXPECT_EQ(sub.graph.arcs(), (std::vector<std::pair<Vertex, Vertex>>{{0, 1}}));
  const auto all = induced_subdigraph(c3, c3.all());
  EXPECT_EQ(all.graph.arcs(), c3.arcs());
  EXPECT_EQ(induced_subdigraph(c3, c3.empty_set()).graph.order(), 0);
  const auto mid = induced_subdigraph(c3, set(3, {1, 2}));
  EXPECT_EQ(mid.to_original, (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(mid.lift(set(2, {1})), set(3, {2}));
}

TEST(Digraph, KernelsAreMaximalIndependent) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = gen_fuzzy(1 + static_cast<int>(seed % 10), Flavor::Circular, false, {}, seed);
    const auto mis = subset_maximal_independent(inst.graph);
    for (const auto& k : subset_kernels(inst.graph)) {
      EXPECT_TRUE(is_kernel(inst.graph, k));
      EXPECT_NE(std::find(mis.begin(), mis.end(), k), mis.end());
    }
  }
}

TEST(Digraph, AcyclicDigraphsHaveOneKernel) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 15;
    std::vector<std::pair<Vertex, Vertex>> arcs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.chance(0.3)) arcs.emplace_back(u, v);
    EXPECT_EQ(subset_kernels(Digraph(n, arcs)).size(), 1u) << "trial " << trial;
  }
}

TEST(Digraph, AbsorptionIsMonotone) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 6;
    std::vector<std::pair<Vertex, Vertex>> arcs;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng.chance(0.3)) arcs.emplace_back(u, v);
    const Digraph d(n, arcs);
    const auto a = from_mask(n, static_cast<std::uint32_t>(rng.below(64)));
    const auto extra = from_mask(n, static_cast<std::uint32_t>(rng.below(64)));
    const auto b = from_mask(n, static_cast<std::uint32_t>(rng.below(64)));
    if (absorbs(d, a, b)) EXPECT_TRUE(absorbs(d, a | extra, b));
  }
}
