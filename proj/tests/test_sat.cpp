#include "support.hpp"

#include <fuzzy_kernels/error.hpp>
#include <fuzzy_kernels/instance_gen.hpp>
#include <fuzzy_kernels/oracle.hpp>
#include <fuzzy_kernels/sat_cograph.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace fk_test;

namespace {

CnfFormula parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

BigInt count_models(const CnfFormula& phi) {
  BigInt count = 0;
  for (std::uint32_t a = 0; a < (1u << phi.variables); ++a) {
    std::vector<bool> assignment;
    for (int v = 0; v < phi.variables; ++v) assignment.push_back(a >> v & 1);
    if (phi.satisfied_by(assignment)) count += 1;
  }
  return count;
}

}  // namespace

TEST(Dimacs, ParsesAndRoundTrips) {
  const auto phi = parse("c comment\np cnf 3 2\n1 -2 0\n2 3\n0\n");
  EXPECT_EQ(phi.variables, 3);
  ASSERT_EQ(phi.clauses.size(), 2u);
  EXPECT_EQ(phi.clauses[0], (std::vector<Literal>{{0, true}, {1, false}}));
  EXPECT_EQ(parse(to_dimacs(phi)).clauses, phi.clauses);
  EXPECT_EQ(parse("p cnf 2 1\n1 1 2 0\n").clauses[0].size(), 2u);
}

TEST(Dimacs, Errors) {
  for (const char* bad : {"1 2 0\n", "p cnf 2 1\n1 3 0\n", "p cnf 2 1\n1 -1 0\n", "p cnf 2 1\n0\n",
                          "p cnf 2 2\n1 0\n", "p cnf 2 1\n1 x 0\n", "p cnf 2 1\n1 2\n"}) {
    try {
      parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidCnf) << bad;
    }
  }
}

TEST(Reduction, SingleClause) {
  const auto phi = parse("p cnf 1 1\n1 0\n");
  const auto red = sat_to_cograph(phi);
  EXPECT_EQ(red.graph.order(), 5);
  const auto kernels = subset_kernels(red.graph);
  ASSERT_EQ(kernels.size(), 1u);
  EXPECT_EQ(kernel_to_assignment(red.roles, kernels[0]), std::vector<bool>{true});
}

TEST(Reduction, TwoClauses) {
  const auto phi = parse("p cnf 2 2\n1 2 0\n-1 2 0\n");
  EXPECT_EQ(count_models(phi), 2);
  EXPECT_EQ(BigInt(subset_kernels(sat_to_cograph(phi).graph).size()), 2);
}

TEST(Reduction, NoClauses) {
  CnfFormula phi;
  phi.variables = 3;
  EXPECT_EQ(subset_kernels(sat_to_cograph(phi).graph).size(), 8u);
}

TEST(Reduction, Structure) {
  const auto phi = gen_cnf(3, 4, 3, 9);
  const auto red = sat_to_cograph(phi);
  const auto& roles = red.roles;
  EXPECT_EQ(red.graph.order(), static_cast<int>(phi.clauses.size()) + 2 * phi.variables + 2);
  // Join of a clique on the clauses with a perfect matching on literals plus {alpha, omega}.
  for (Vertex u = 0; u < red.graph.order(); ++u)
    for (Vertex v = u + 1; v < red.graph.order(); ++v) {
      const bool cu = roles.kind(u) == RoleKind::Clause, cv = roles.kind(v) == RoleKind::Clause;
      bool expected;
      if (cu || cv) expected = true;
      else if (roles.kind(u) == RoleKind::Literal && roles.kind(v) == RoleKind::Literal) expected = (u - roles.clauses) / 2 == (v - roles.clauses) / 2;
      else expected = u == roles.alpha() && v == roles.omega();
      EXPECT_EQ(red.graph.adjacent(u, v), expected) << u << " " << v;
    }
  EXPECT_EQ(roles.describe(roles.omega()), "omega");
  EXPECT_EQ(roles.describe(roles.literal_vertex(1, false)), "~x2");
}

TEST(Reduction, KernelToAssignmentErrors) {
  const auto red = sat_to_cograph(parse("p cnf 2 1\n1 2 0\n"));
  const auto& roles = red.roles;
  VertexSet k(static_cast<std::size_t>(roles.vertex_count()), {roles.literal_vertex(0, true), roles.literal_vertex(1, true)});
  try {
    kernel_to_assignment(roles, k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAKernel);
  }
  k.insert(roles.omega());
  k.insert(roles.literal_vertex(1, false));
  EXPECT_THROW(kernel_to_assignment(roles, k), Error);
}

TEST(Reduction, Parsimony) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int v = rng.uniform_int(1, 4), c = rng.uniform_int(0, 5);
    const auto phi = gen_cnf(v, c, 3, seed);
    const auto red = sat_to_cograph(phi);
    const auto kernels = oracle::brute_force_kernels(red.graph);
    EXPECT_EQ(BigInt(kernels.size()), count_models(phi)) << "seed " << seed;
    for (const auto& k : kernels) {
      EXPECT_TRUE(k.contains(red.roles.omega()));
      const auto a = kernel_to_assignment(red.roles, k);
      EXPECT_TRUE(phi.satisfied_by(a));
      EXPECT_EQ(assignment_to_kernel(red.roles, a), k);
    }
  }
}
