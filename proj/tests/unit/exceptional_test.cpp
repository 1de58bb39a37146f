#include <gtest/gtest.h>

#include "exdecomp/errors.hpp"
#include "exdecomp/exceptional.hpp"
#include "support/oracles.hpp"

using namespace exdecomp;
using namespace exdecomp::oracle;

namespace {

// K = 1, m = 20, one exceptional vertex per side: A0 = {0}, A = 1..20,
// B0 = {21}, B = 22..41, eps0 = 1/21.
Partition small_partition() {
  return block_partition(1, 20, 1, Rational(1, 21));
}

Graph star_host(const Partition& p, int per_side) {
  std::vector<Edge> e;
  for (int k = 0; k < per_side; ++k) {
    e.push_back(make_edge(p.A0()[0], p.A(1)[k]));
    e.push_back(make_edge(p.B0()[0], p.B(1)[k]));
  }
  return Graph(p.n(), e);
}

}  // namespace

TEST(Candidate, TwoMatchingIsHamiltonCandidate) {
  Partition p = small_partition();
  auto f = make_candidate(p, {make_edge(1, 22), make_edge(2, 23)});
  EXPECT_EQ(f.kind, CandidateKind::kHESC);
  EXPECT_TRUE(verify_candidate(f, p).ok()) << verify_candidate(f, p).summary();
}

TEST(Candidate, SingleCrossingEdgeHasOddPathCount) {
  Partition p = small_partition();
  auto f = make_candidate(p, {make_edge(1, 22)});
  Report r = verify_candidate(f, p);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.find("ESC4.HESC")->passed);
}

TEST(Candidate, ClusterVertexOfDegreeTwoFails) {
  Partition p = small_partition();
  auto f = make_candidate(p, {make_edge(1, 22), make_edge(1, 23)});
  Report r = verify_candidate(f, p);
  EXPECT_FALSE(r.find("ESC2")->passed);
  EXPECT_EQ(r.find("ESC2")->witness_vertices, std::vector<Vertex>{1});
}

TEST(Candidate, InternalEdgeFails) {
  Partition p = small_partition();
  auto f = make_candidate(p, {make_edge(1, 2)});
  EXPECT_FALSE(verify_candidate(f, p).find("ESC1.no_internal_edges")->passed);
}

TEST(Candidate, LocaleWitnessLiesOutsideTheCell) {
  Partition p = block_partition(2, 10, 1, Rational(1, 21));
  auto f = make_candidate(p, {make_edge(p.A(2)[0], p.B(1)[0]),
                              make_edge(p.A(1)[0], p.B(1)[1])},
                          Locale{1, 1});
  Report r = verify_candidate(f, p);
  const ClauseResult* c = r.find("ESC.localized");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->passed);
  EXPECT_EQ(c->witness_vertices, std::vector<Vertex>{p.A(2)[0]});
}

TEST(FaithfulExtend, DegreeTwoCandidateIsUnchanged) {
  Partition p = small_partition();
  // 1-0-22 and 2-21-23 already give both exceptional vertices degree 2;
  // the A-B paths are 1..22 and 2..23.
  auto f = make_candidate(p, {make_edge(0, 1), make_edge(0, 22),
                              make_edge(21, 2), make_edge(21, 23)});
  ASSERT_TRUE(verify_candidate(f, p).ok()) << verify_candidate(f, p).summary();
  ExceptionalSystem j = faithful_extend(f, star_host(p, 10), p);
  EXPECT_EQ(j.ps.graph.edges(), f.ps.graph.edges());
  EXPECT_EQ(j.kind, SystemKind::kHES);
}

TEST(FaithfulExtend, AddsTwoPendantEdgesAndKeepsPathCount) {
  Partition p = small_partition();
  auto f = make_candidate(p, {make_edge(5, 25), make_edge(6, 26)});
  const int64_t b = count_ab_paths(f.ps, p);
  ASSERT_EQ(b, 2);
  Graph host = star_host(p, 10);
  ExceptionalSystem j = faithful_extend(f, host, p);
  EXPECT_TRUE(verify_system(j, p).ok()) << verify_system(j, p).summary();
  EXPECT_EQ(count_ab_paths(j.ps, p), b);
  EXPECT_EQ(j.ps.graph.degree(0), 2);
  EXPECT_EQ(j.ps.graph.degree(21), 2);
  // Lowest free ids first: 1 and 2 on A, 22 and 23 on B.
  EXPECT_TRUE(j.ps.graph.has_edge(0, 1));
  EXPECT_TRUE(j.ps.graph.has_edge(0, 2));
  EXPECT_TRUE(j.ps.graph.has_edge(21, 22));
}

TEST(FaithfulExtend, StarvationNamesTheVertex) {
  Partition p = small_partition();
  // The only A-neighbours of 0 in the host are already used by F.
  auto f = make_candidate(p, {make_edge(1, 25), make_edge(2, 26)});
  Graph host(p.n(), {make_edge(0, 1), make_edge(0, 2), make_edge(21, 30),
                     make_edge(21, 31)});
  try {
    faithful_extend(f, host, p);
    FAIL() << "vertex 0 has no fresh neighbours";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.witness_vertices(), std::vector<Vertex>{0});
  }
}

TEST(FaithfulExtend, RandomRoundTrip) {
  Rng rng(7);
  int done = 0;
  while (done < 200) {
    auto c = random_extension_case(rng);
    if (!c) continue;
    ++done;
    ExceptionalSystem j = faithful_extend(c->F, c->host, c->P);
    ASSERT_TRUE(verify_system(j, c->P).ok()) << verify_system(j, c->P).summary();
    EXPECT_EQ(count_ab_paths(j.ps, c->P), count_ab_paths(c->F.ps, c->P));
    for (const auto& e : j.ps.graph.edges()) {
      if (c->F.ps.graph.has_edge(e)) continue;
      EXPECT_FALSE(c->P.crossing(e));
      EXPECT_NE(c->P.exceptional(e.u), c->P.exceptional(e.v));
    }
  }
}

TEST(System, MatchingSystemHasNoCrossingEdge) {
  Partition p = small_partition();
  ExceptionalSystem j;
  j.ps = PathSystem(Graph(p.n(), {make_edge(0, 1), make_edge(0, 2),
                                  make_edge(21, 22), make_edge(21, 23)}));
  j.kind = SystemKind::kMES;
  EXPECT_TRUE(verify_system(j, p).ok()) << verify_system(j, p).summary();
  j.kind = SystemKind::kHES;
  EXPECT_FALSE(verify_system(j, p).find("ES2.HES")->passed);
}

TEST(System, UncoveredExceptionalVertexFails) {
  Partition p = small_partition();
  ExceptionalSystem j;
  j.ps = PathSystem(Graph(p.n(), {make_edge(0, 1), make_edge(0, 2)}));
  j.kind = SystemKind::kMES;
  EXPECT_FALSE(verify_system(j, p).ok());
}

TEST(Extension, PreconditionsNameTheWeakVertex) {
  Partition p = small_partition();
  Report r = extend_preconditions(star_host(p, 3), p);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(extend_preconditions(star_host(p, 20), p).ok());
}
