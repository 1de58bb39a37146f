#include <gtest/gtest.h>

#include "exdecomp/errors.hpp"
#include "exdecomp/graph.hpp"
#include "exdecomp/rational.hpp"
#include "support/oracles.hpp"

using namespace exdecomp;

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(Rational::from_double(0.01), Rational(1, 100));
  EXPECT_EQ(Rational::parse("3/100"), Rational(3, 100));
  EXPECT_EQ(Rational::parse("0.1"), Rational(1, 10));
  EXPECT_EQ(Rational(6, -4), Rational(-3, 2));
}

TEST(Rational, FloorCeilAndIsqrt) {
  EXPECT_EQ(Rational(-3, 2).floor(), -2);
  EXPECT_EQ(Rational(-3, 2).ceil(), -1);
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(isqrt(99), 9);
  EXPECT_EQ(isqrt(100), 10);
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
}

TEST(Graph, RejectsLoopsDuplicatesAndRange) {
  EXPECT_THROW(Graph(3, {{1, 1}}), InputError);
  EXPECT_THROW(Graph(3, {{0, 1}, {0, 1}}), InputError);
  EXPECT_THROW(Graph(3, {{0, 3}}), InputError);
}

TEST(Graph, DegreeIntoStar) {
  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(degree_into(star, 0, {1, 2}), 2);
  EXPECT_EQ(star.max_degree(), 3);
  EXPECT_EQ(star.min_degree(), 1);
}

TEST(Graph, SumAndMinusRoundTrip) {
  Graph g(5, {{0, 1}, {1, 2}, {3, 4}});
  Graph h(5, {{0, 4}});
  Graph s = graph_sum(g, h);
  EXPECT_EQ(s.num_edges(), 4);
  EXPECT_EQ(graph_minus(s, h).edges(), g.edges());
  EXPECT_THROW(graph_sum(g, g), ContractError);
}

TEST(Graph, PathSystemDetectsCycleAndDegree) {
  EXPECT_TRUE(is_path_system(Graph(4, {{0, 1}, {1, 2}})).ok);
  PathCheck cyc = is_path_system(Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_FALSE(cyc.ok);
  EXPECT_EQ(cyc.witness.size(), 3u);
  PathCheck claw = is_path_system(Graph(4, {{0, 1}, {0, 2}, {0, 3}}));
  EXPECT_FALSE(claw.ok);
  EXPECT_EQ(claw.witness, std::vector<Vertex>{0});
}

TEST(Graph, CountsAbPaths) {
  // 0-1-2 runs from A to B; 3-4 stays inside A; 5 is trivial.
  PathSystem ps(Graph(6, {{0, 1}, {1, 2}, {3, 4}}), {5});
  EXPECT_EQ(count_ab_paths(ps, {0, 1, 3, 4, 5}, {2}), 1);
  EXPECT_THROW(count_ab_paths(ps, {0, 1}, {2}), InputError);
}

TEST(Partition, ReportsSizeProblems) {
  Partition p = oracle::block_partition(2, 10, 1, Rational(1, 10));
  EXPECT_TRUE(p.problems().empty());
  EXPECT_EQ(p.n(), 42);
  EXPECT_EQ(p.cluster(p.A(2).front()), 2);
  EXPECT_TRUE(p.exceptional(p.B0().front()));
  EXPECT_TRUE(p.edge_in_cell(make_edge(p.A0()[0], p.B(1)[0]), 1, 1));
  EXPECT_FALSE(p.edge_in_cell(make_edge(p.A(2)[0], p.B(1)[0]), 1, 1));
  Partition tight = oracle::block_partition(1, 10, 2, Rational(1, 100));
  EXPECT_FALSE(tight.problems().empty());
  EXPECT_THROW(Partition(4, 1, 1, Rational(1, 2), {0}, {1}, {{2}}, {{2}}),
               InputError);
}

TEST(Graph, HashIsStableAndEdgeSensitive) {
  Graph a(4, {{0, 1}, {2, 3}});
  Graph b(4, {{2, 3}, {0, 1}});
  Graph c(4, {{0, 1}, {1, 3}});
  EXPECT_EQ(graph_hash(a), graph_hash(b));
  EXPECT_NE(graph_hash(a), graph_hash(c));
}
