#include <gtest/gtest.h>

#include "exdecomp/assembly.hpp"
#include "exdecomp/errors.hpp"
#include "exdecomp/generator.hpp"
#include "exdecomp/slicing.hpp"
#include "support/oracles.hpp"

using namespace exdecomp;
using namespace exdecomp::oracle;

namespace {

std::vector<Edge> grid_edges(const CellGrid& g) {
  std::vector<Edge> out;
  for (const auto& c : g.cells) {
    out.insert(out.end(), c.edges().begin(), c.edges().end());
  }
  return out;
}

// Scheme graph on a block partition: every exceptional vertex is joined to
// `own` vertices of each own-side cluster, the first vertex of A0 gets
// `wdeg` crossing edges, and random crossing edges bring the rest to `cross`.
Graph toy_scheme(const Partition& p, Rng& rng, int own, int wdeg, int cross) {
  std::set<Edge> e;
  const Vertex w = p.A0()[0];
  for (int k = 0; k < wdeg; ++k) e.insert(make_edge(w, p.B_all()[2 * k]));
  for (Vertex v : p.V0()) {
    for (const auto& cl : p.in_A_prime(v) ? p.A_clusters() : p.B_clusters()) {
      for (int k = 0; k < own; ++k) e.insert(make_edge(v, cl[k]));
    }
  }
  const auto& A = p.A_prime();
  const auto& B = p.B_prime();
  const int target = static_cast<int>(e.size()) + cross - wdeg;
  while (static_cast<int>(e.size()) < target) {
    Vertex a = A[uniform(rng, 0, static_cast<int>(A.size()) - 1)];
    Vertex b = B[uniform(rng, 0, static_cast<int>(B.size()) - 1)];
    e.insert(make_edge(a, b));
  }
  return Graph(p.n(), {e.begin(), e.end()});
}

}  // namespace

TEST(RandomSlice, ForcedLocality) {
  Partition p = block_partition(2, 10, 1, Rational(1, 21));
  std::vector<Edge> e;
  for (int k = 0; k < 10; ++k) e.push_back(make_edge(p.A(1)[k], p.B(1)[k]));
  Graph g(p.n(), e);
  RawSlices s = random_slice(g, p, 5);
  EXPECT_EQ(s.Hp.at(1, 1).num_edges(), 10);
  EXPECT_EQ(s.Hp.at(1, 2).num_edges() + s.Hp.at(2, 1).num_edges() +
                s.Hp.at(2, 2).num_edges(),
            0);
  for (const auto& c : s.H.cells) EXPECT_EQ(c.num_edges(), 0);
}

TEST(RandomSlice, RejectsInternalEdges) {
  Partition p = block_partition(1, 10, 1, Rational(1, 11));
  Graph g(p.n(), {make_edge(p.A(1)[0], p.A(1)[1])});
  EXPECT_THROW(random_slice(g, p, 1), InputError);
}

TEST(RandomSlice, PartitionsSchemeGraphForEverySeed) {
  Instance inst = generate({"noncritical", 2000, 2, 3});
  Graph gs = scheme_graph(inst);
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    RawSlices s = random_slice(gs, inst.P, seed);
    std::vector<Edge> all = grid_edges(s.H);
    auto more = grid_edges(s.Hp);
    all.insert(all.end(), more.begin(), more.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, gs.edges());
    Report r = slice_report(s, gs, inst.P, Rational(1, 10));
    EXPECT_TRUE(r.find("a1")->passed);
    EXPECT_TRUE(r.find("a2")->passed);
  }
}

TEST(MoveForParity, EveryCellEvenAndCoverPreserved) {
  Instance inst = generate({"noncritical", 2000, 2, 4});
  Graph gs = scheme_graph(inst);
  RawSlices raw = random_slice(gs, inst.P, 11);
  SliceDecomposition d = move_for_parity(raw, gs, inst.P, inst.params);
  EXPECT_EQ(all_edges(d), gs.edges());
  int64_t total = 0, in = 0, out = 0;
  for (const auto& c : d.Hpp.cells) {
    EXPECT_EQ(c.num_edges() % 2, 0);
    total += c.num_edges();
  }
  for (auto x : d.moved_in) in += x;
  for (auto x : d.moved_out) out += x;
  EXPECT_EQ(in, out);
  EXPECT_EQ(total, crossing_edges(gs, inst.P));
  EXPECT_TRUE(d.report.find("b1")->passed);
  EXPECT_TRUE(d.report.find("b3")->passed);
}

TEST(MoveForParity, EvenGridIsAFixedPoint) {
  Instance inst = generate({"noncritical", 2000, 2, 5});
  Graph gs = scheme_graph(inst);
  RawSlices raw = random_slice(gs, inst.P, 2);
  SliceDecomposition once = move_for_parity(raw, gs, inst.P, inst.params);
  RawSlices again{once.H, once.Hpp};
  SliceDecomposition twice = move_for_parity(again, gs, inst.P, inst.params);
  for (auto x : twice.moved_in) EXPECT_EQ(x, 0);
  for (int c = 0; c < 4; ++c) {
    EXPECT_EQ(twice.Hpp.cells[c].edges(), once.Hpp.cells[c].edges());
  }
}

TEST(CriticalTargets, WorkedExample) {
  CriticalTargets t = plan_critical_targets(18, {8}, 2);
  std::vector<int64_t> sorted = t.edges;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int64_t>{4, 4, 4, 6}));
  EXPECT_EQ(t.w_degree[0], (std::vector<int64_t>{2, 2, 2, 2}));
  EXPECT_TRUE(check_critical_targets(t, 18, {8}).ok());
}

TEST(CriticalTargets, DivisibleCasesAreUniform) {
  CriticalTargets t = plan_critical_targets(2 * 9 * 5, {9 * 3}, 3);
  for (auto x : t.edges) EXPECT_EQ(x, 10);
  for (auto x : t.w_degree[0]) EXPECT_EQ(x, 3);
}

TEST(CriticalTargets, TightCaseUsesLargeCells) {
  // a = b and p = q: the heavier W0 cells must be the 2b + 2 cells.
  const int K = 2;
  CriticalTargets t = plan_critical_targets(2 * (4 * 3 + 2), {4 * 3 + 2}, K);
  EXPECT_TRUE(targets_satisfy_claim(t, 28, {14}));
}

TEST(CriticalTargets, RandomTuplesSatisfyClaim) {
  Rng rng(8);
  for (int k = 0; k < 2000; ++k) {
    TargetTuple tup = random_target_tuple(rng);
    CriticalTargets t = plan_critical_targets(tup.e, tup.dw, tup.K);
    ASSERT_TRUE(targets_satisfy_claim(t, tup.e, tup.dw));
  }
}

TEST(CriticalTargets, RejectsOutOfRangeDegrees) {
  EXPECT_THROW(plan_critical_targets(18, {10}, 2), InputError);
  EXPECT_THROW(plan_critical_targets(18, {3}, 2), InputError);
  EXPECT_THROW(plan_critical_targets(17, {5}, 2), InputError);
}

TEST(MoveCritical, MultiCellTargetsAreMet) {
  Rng rng(9);
  Partition p = block_partition(2, 30, 1, Rational(1, 31));
  int ran = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = toy_scheme(p, rng, 10, uniform(rng, 4, 30), 60);
    // Make the crossing count even by dropping one crossing edge if needed.
    std::vector<Edge> e = g.edges();
    if (crossing_edges(g, p) % 2 == 1) {
      for (size_t k = 0; k < e.size(); ++k) {
        if (p.crossing(e[k])) {
          e.erase(e.begin() + k);
          break;
        }
      }
      g = Graph(p.n(), e);
    }
    const Vertex w = p.A0()[0];
    Graph cross = crossing_part(g, p);
    if (cross.degree(w) < 4 || 2 * cross.degree(w) > cross.num_edges()) continue;
    ++ran;
    RawSlices raw = random_slice(g, p, trial + 1);
    SliceDecomposition d = move_critical(raw, g, p, {w}, Rational(1, 10));
    EXPECT_EQ(all_edges(d), g.edges());
    for (const char* c : {"b1", "b3", "b6", "b7"}) {
      ASSERT_NE(d.report.find(c), nullptr) << c;
      EXPECT_TRUE(d.report.find(c)->passed) << c << " " << d.report.summary();
    }
  }
  EXPECT_GE(ran, 8);
}
