#include <gtest/gtest.h>

#include "exdecomp/assembly.hpp"
#include "exdecomp/errors.hpp"
#include "exdecomp/generator.hpp"
#include "exdecomp/io.hpp"
#include "support/oracles.hpp"

using namespace exdecomp;
using namespace exdecomp::oracle;

namespace {

// Pipelines are deterministic, so each instance is run once and shared.
const Instance& instance(const std::string& regime, int n = 0, int K = 0,
                         uint64_t seed = 1) {
  static std::map<std::string, Instance> cache;
  const std::string key = regime + "/" + std::to_string(n) + "/" +
                          std::to_string(K) + "/" + std::to_string(seed);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, generate({regime, n, K, seed})).first;
  }
  return it->second;
}

const Certificate& certificate(const std::string& regime, int n = 0, int K = 0,
                               uint64_t seed = 1) {
  static std::map<std::string, Certificate> cache;
  const std::string key = regime + "/" + std::to_string(n) + "/" +
                          std::to_string(K) + "/" + std::to_string(seed);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, run_pipeline(instance(regime, n, K, seed))).first;
  }
  return it->second;
}

Graph complete_bipartite_on(int half) {
  std::vector<Edge> e;
  for (int a = 0; a < half; ++a) {
    for (int b = half; b < 2 * half; ++b) e.push_back(make_edge(a, b));
  }
  return Graph(2 * half, e);
}

VertexSet range(int lo, int hi) {
  VertexSet s;
  for (int v = lo; v < hi; ++v) s.push_back(v);
  return s;
}

}  // namespace

TEST(Criticality, TemplateIsCriticalWithSingleHeavyVertex) {
  for (int k = 2; k <= 6; ++k) {
    Instance t = critical_template(k, k);
    CriticalityReport r =
        classify_criticality(t.G, t.P.A_prime(), t.P.B_prime(), t.params.D);
    EXPECT_TRUE(r.is_critical) << "k = " << k;
    EXPECT_EQ(r.W, t.P.A0());
    EXPECT_EQ(r.delta_cross, k);
  }
}

TEST(Criticality, CompleteBipartiteIsNotCritical) {
  CriticalityReport r =
      classify_criticality(complete_bipartite_on(20), range(0, 20), range(20, 40), 20);
  EXPECT_FALSE(r.is_critical);
  EXPECT_EQ(r.cap, 5);
  EXPECT_EQ(r.capped_max_edges, 100);
}

TEST(Criticality, NoCrossingEdgesIsNotCritical) {
  Graph g(6, {{0, 1}, {3, 4}});
  CriticalityReport r = classify_criticality(g, {0, 1, 2}, {3, 4, 5}, 2);
  EXPECT_FALSE(r.is_critical);
  EXPECT_EQ(r.delta_cross, 0);
}

TEST(Criticality, AgreesWithSubsetEnumeration) {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    Graph g = random_bipartite(rng, 5, 5, uniform(rng, 0, 12), 5);
    auto capped = brute_capped_sizes(g, 4);
    for (int64_t D = 1; D <= 18; ++D) {
      CriticalityReport r = classify_criticality(g, range(0, 5), range(5, 10), D);
      BruteCriticality b = brute_criticality(g, D, capped);
      std::sort(r.W.begin(), r.W.end());
      ASSERT_EQ(r.is_critical, b.is_critical);
      ASSERT_EQ(r.capped_max_edges, b.capped);
      ASSERT_EQ(r.W, b.W);
    }
  }
}

TEST(Generator, FewEdgesSelfCheck) {
  const Instance& inst = instance("few_edges", 40);
  EXPECT_EQ(inst.params.D, 19);
  EXPECT_EQ(inst.P.A_prime().size(), 20u);
  EXPECT_EQ(inst.P.B_prime().size(), 20u);
  const int64_t e = crossing_edges(inst.G, inst.P);
  EXPECT_EQ(e % 2, 0);
  EXPECT_LT(e, inst.params.D);
  EXPECT_EQ(select_regime(inst), "few_edges");
  EXPECT_TRUE(check_preconditions(inst, "few_edges").ok());
}

TEST(Generator, SmallTemplateIsClassifiedCritical) {
  Instance t = critical_template(5, 1);
  EXPECT_EQ(t.G.n(), 21);
  EXPECT_EQ(t.params.D, 10);
  EXPECT_TRUE(classify_criticality(t.G, t.P.A_prime(), t.P.B_prime(), 10).is_critical);
}

TEST(Generator, EveryRegimeIsRegularAndMeetsItsPreconditions) {
  for (auto [regime, K] : std::vector<std::pair<std::string, int>>{
           {"noncritical", 2}, {"noncritical", 3}, {"critical", 0}, {"few_edges", 0}}) {
    const Instance& inst = instance(regime, 0, K);
    EXPECT_EQ(inst.G.min_degree(), inst.params.D) << regime;
    EXPECT_EQ(inst.G.max_degree(), inst.params.D) << regime;
    EXPECT_EQ(select_regime(inst), regime);
    Report r = check_preconditions(inst, regime);
    EXPECT_TRUE(r.ok()) << regime << ": " << r.summary();
  }
}

TEST(Generator, BadSizesAreRejected) {
  EXPECT_THROW(generate({"few_edges", 42, 0, 1}), InputError);
  EXPECT_THROW(generate({"critical", 800, 0, 1}), InputError);
  EXPECT_THROW(generate({"nonsense", 0, 0, 1}), InputError);
}

TEST(Pipeline, EveryRegimeSucceedsAndVerifies) {
  for (const char* regime : {"noncritical", "critical", "few_edges"}) {
    const Certificate& c = certificate(regime);
    ASSERT_EQ(c.status, "ok") << regime << " "
                              << (c.failure ? c.failure->message : "");
    EXPECT_EQ(c.regime, regime);
    Report r = verify_certificate(instance(regime), c);
    EXPECT_TRUE(r.ok()) << r.summary();
  }
}

TEST(Pipeline, FewEdgesMovesBranchAtTwoHundred) {
  const Certificate& c = certificate("few_edges", 200);
  ASSERT_EQ(c.status, "ok") << (c.failure ? c.failure->message : "");
  EXPECT_EQ(c.branch, "w0_moves");
  EXPECT_EQ(certificate("few_edges", 40).branch, "single_cell");
}

TEST(Pipeline, NoncriticalThreeClusters) {
  const Certificate& c = certificate("noncritical", 2000, 3);
  ASSERT_EQ(c.status, "ok") << (c.failure ? c.failure->message : "");
  EXPECT_TRUE(verify_certificate(instance("noncritical", 2000, 3), c).ok());
}

TEST(Pipeline, CriticalSystemsPairMatchingAndHeavyEdges) {
  const Instance& inst = instance("critical");
  const Certificate& c = certificate("critical");
  ASSERT_EQ(c.status, "ok");
  const Vertex a = inst.P.A0()[0];
  int hes = 0;
  for (const auto& rec : c.systems) {
    if (rec.system.kind != SystemKind::kHES) continue;
    ++hes;
    int at_a = 0, other = 0;
    for (const auto& e : rec.system.ps.graph.edges()) {
      if (!inst.P.crossing(e)) continue;
      (e.touches(a) ? at_a : other)++;
    }
    EXPECT_EQ(at_a, 1);
    EXPECT_EQ(other, 1);
  }
  EXPECT_GT(hes, 0);
}

TEST(Pipeline, CountIdentitiesHold) {
  for (const char* regime : {"noncritical", "critical", "few_edges"}) {
    const Instance& inst = instance(regime);
    const Certificate& c = certificate(regime);
    const int64_t K2 = static_cast<int64_t>(inst.params.K) * inst.params.K;
    const int64_t an = alpha_n(inst.params);
    EXPECT_EQ(static_cast<int64_t>(c.systems.size()), K2 * an) << regime;
    for (const auto& cc : c.counts) {
      EXPECT_EQ(cc.localized, an - inst.params.lambda_n / K2) << regime;
    }
    int64_t edges = 0;
    for (const auto& rec : c.systems) edges += rec.system.ps.graph.num_edges();
    EXPECT_EQ(edges, scheme_graph(inst).num_edges()) << regime;
  }
}

TEST(Pipeline, SerialAndParallelAgree) {
  for (const char* regime : {"noncritical", "critical", "few_edges"}) {
    const Instance& inst = instance(regime);
    Certificate s = run_pipeline(inst, ExecutionPolicy::kSerial);
    Certificate p = run_pipeline(inst, ExecutionPolicy::kParallel);
    EXPECT_EQ(to_json(s).dump(), to_json(p).dump()) << regime;
    Report vs = verify_certificate(inst, s, ExecutionPolicy::kSerial);
    Report vp = verify_certificate(inst, s, ExecutionPolicy::kParallel);
    EXPECT_EQ(to_json(vs).dump(), to_json(vp).dump()) << regime;
  }
}

TEST(Verify, DeletedEdgeBreaksCover) {
  const Instance& inst = instance("few_edges");
  Certificate c = certificate("few_edges");
  for (auto& rec : c.systems) {
    if (rec.system.ps.graph.num_edges() == 0) continue;
    std::vector<Edge> e = rec.system.ps.graph.edges();
    e.pop_back();
    rec.system.ps.graph = Graph(inst.G.n(), e);
    break;
  }
  Report r = verify_certificate(inst, c);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.find("cover")->passed);
}

TEST(Verify, RelabelledSystemIsCaught) {
  const Instance& inst = instance("noncritical");
  Certificate c = certificate("noncritical");
  for (auto& rec : c.systems) {
    if (rec.system.kind == SystemKind::kHES) {
      rec.system.kind = SystemKind::kMES;
      break;
    }
  }
  Report r = verify_certificate(inst, c);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.find("systems")->passed);
}

TEST(Verify, MovedLocaleIsCaught) {
  const Instance& inst = instance("noncritical");
  Certificate c = certificate("noncritical");
  for (auto& rec : c.systems) {
    if (rec.system.locale && rec.system.ps.graph.num_edges() > 0) {
      rec.system.locale = Locale{3 - rec.system.locale->i, rec.system.locale->j};
      break;
    }
  }
  EXPECT_FALSE(verify_certificate(inst, c).ok());
}

TEST(Verify, SwappedEdgeBetweenSystemsIsCaught) {
  const Instance& inst = instance("critical");
  Certificate c = certificate("critical");
  // Move one edge from the first system to the second: still a cover, but
  // the systems break.
  auto& a = c.systems[0].system.ps.graph;
  auto& b = c.systems[1].system.ps.graph;
  std::vector<Edge> ea = a.edges(), eb = b.edges();
  eb.push_back(ea.back());
  ea.pop_back();
  std::sort(eb.begin(), eb.end());
  a = Graph(inst.G.n(), ea);
  b = Graph(inst.G.n(), eb);
  Report r = verify_certificate(inst, c);
  EXPECT_TRUE(r.find("cover")->passed);
  EXPECT_FALSE(r.ok());
}

TEST(Verify, WrongInstanceIsCaught) {
  Report r = verify_certificate(instance("few_edges", 40, 0, 2),
                                certificate("few_edges"));
  EXPECT_FALSE(r.find("instance_hash")->passed);
}

TEST(Preconditions, OddCrossingParityStopsThePipeline) {
  Instance inst = instance("few_edges");
  // Replace the G0 edge at a by a crossing edge at a: G0 keeps degree phi n
  // on V0 and the scheme graph loses one crossing edge.
  const Vertex a = inst.P.A0()[0];
  std::vector<Edge> g0;
  for (const auto& e : inst.G0.edges()) {
    if (!e.touches(a)) g0.push_back(e);
  }
  for (Vertex u : inst.G.neighbors(a)) {
    if (inst.P.in_B_prime(u)) {
      g0.push_back(make_edge(a, u));
      break;
    }
  }
  std::sort(g0.begin(), g0.end());
  inst.G0 = Graph(inst.G.n(), g0);
  Certificate c = run_pipeline(inst);
  EXPECT_EQ(c.status, "precondition_failed");
  EXPECT_EQ(exit_code(c), 1);
  ASSERT_NE(c.preconditions.find("crossing_parity"), nullptr);
  EXPECT_FALSE(c.preconditions.find("crossing_parity")->passed);
}

TEST(Json, InstanceAndCertificateRoundTrip) {
  const Instance& inst = instance("critical");
  Instance back = instance_from_json(to_json(inst));
  EXPECT_EQ(instance_hash(back), instance_hash(inst));
  EXPECT_EQ(to_json(back).dump(), to_json(inst).dump());
  const Certificate& c = certificate("critical");
  Certificate cb = certificate_from_json(to_json(c), inst.G.n());
  EXPECT_EQ(to_json(cb).dump(), to_json(c).dump());
  EXPECT_TRUE(verify_certificate(inst, cb).ok());
}

TEST(Json, MalformedInputsAreInputErrors) {
  EXPECT_THROW(instance_from_json(Json::parse(R"({"n": 3})")), InputError);
  Json j = to_json(instance("few_edges"));
  j["edges"].push_back({0, 0});
  EXPECT_THROW(instance_from_json(j), InputError);
  Params p;
  apply_params(p, Json::parse(R"({"eps": "1/20", "K": 3})"));
  EXPECT_EQ(p.eps, Rational(1, 20));
  EXPECT_EQ(p.K, 3);
}

TEST(Relabel, NonLocalCandidatesGoGlobal) {
  Partition p = block_partition(2, 10, 1, Rational(1, 21));
  std::vector<ExceptionalCandidate> cands;
  // Two local 2-matchings and one that leaves cell (1, 1).
  cands.push_back(make_candidate(p, {make_edge(p.A(1)[0], p.B(1)[0]),
                                     make_edge(p.A(1)[1], p.B(1)[1])}));
  cands.push_back(make_candidate(p, {make_edge(p.A(1)[2], p.B(2)[0]),
                                     make_edge(p.A(1)[3], p.B(1)[3])}));
  cands.push_back(make_candidate(p, {make_edge(p.A(1)[4], p.B(1)[4]),
                                     make_edge(p.A(1)[5], p.B(1)[5])}));
  Relabeled r = relabel_cell(cands, p, 1, 1, 2, 1, {}, false);
  ASSERT_EQ(r.Fprime.size(), 1u);
  EXPECT_EQ(r.info.nonlocal, 1);
  EXPECT_TRUE(r.Fprime[0].ps.graph.has_edge(make_edge(p.A(1)[2], p.B(2)[0])));
  for (const auto& f : r.F) {
    ASSERT_TRUE(f.locale.has_value());
    EXPECT_EQ(*f.locale, (Locale{1, 1}));
  }
  EXPECT_THROW(relabel_cell(cands, p, 2, 2, 2, 1, {}, false), InfeasibleError);
}

TEST(Extension, GlobalHallFailureNamesTheVertex) {
  Partition p = block_partition(1, 10, 1, Rational(1, 11));
  const Vertex a = p.A0()[0], b = p.B0()[0];
  // Candidate uses A-vertex 1 and 2; a's only H-neighbours are 1 and 2.
  auto f = make_candidate(p, {make_edge(p.A(1)[0], p.B(1)[0]),
                              make_edge(p.A(1)[1], p.B(1)[1])});
  Graph H(p.n(), {make_edge(a, p.A(1)[0]), make_edge(a, p.A(1)[1]),
                  make_edge(b, p.B(1)[5]), make_edge(b, p.B(1)[6])});
  try {
    extend_global(H, {f}, p);
    FAIL() << "a cannot be extended";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.clause(), "hall_condition");
    const auto& w = e.witness_vertices();
    EXPECT_NE(std::find(w.begin(), w.end(), a), w.end());
  }
}

TEST(Extension, LocalizedRejectsForeignEdges) {
  Partition p = block_partition(2, 10, 1, Rational(1, 21));
  Graph H(p.n(), {make_edge(p.A0()[0], p.A(2)[0])});
  EXPECT_THROW(extend_localized(H, {}, p, Locale{1, 1}), PreconditionError);
}
