#include "exdecomp/assembly.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>

#include "exdecomp/errors.hpp"
#include "exdecomp/matchings.hpp"

namespace exdecomp {
namespace {

std::string vname(Vertex v) { return std::to_string(v); }

std::string cell_str(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Runs fn(c) for every cell, in parallel under kParallel. The exception of
// the lowest failing cell is rethrown.
void for_each_cell(int cells, ExecutionPolicy policy,
                   const std::function<void(int)>& fn) {
  std::vector<std::exception_ptr> errs(cells);
  if (policy == ExecutionPolicy::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < cells; ++c) {
      try {
        fn(c);
      } catch (...) {
        errs[c] = std::current_exception();
      }
    }
  } else {
    for (int c = 0; c < cells; ++c) {
      try {
        fn(c);
      } catch (...) {
        errs[c] = std::current_exception();
        break;
      }
    }
  }
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

// Exceptional vertex of an edge whose other end is a cluster vertex on the
// same side, or -1.
Vertex exceptional_end(const Edge& e, const Partition& p) {
  Vertex x = p.exceptional(e.u) ? e.u : e.v;
  Vertex y = e.other(x);
  if (!p.exceptional(x) || p.exceptional(y) || p.side(x) != p.side(y)) return -1;
  return x;
}

// Adds to each candidate 2 - d_{F_s}(v) edges vx of H per exceptional v,
// with x outside the current system, via one bipartite matching per v. With
// `exact` every H-edge at v must be used.
std::vector<std::vector<Edge>> assign_by_matching(
    const Graph& H, const std::vector<ExceptionalCandidate>& F,
    const Partition& p, bool exact, const std::string& stage) {
  const int n = H.n();
  const int S = static_cast<int>(F.size());
  std::vector<std::vector<Edge>> J(S);
  std::vector<std::vector<char>> used(S, std::vector<char>(n, 0));
  for (int s = 0; s < S; ++s) {
    J[s] = F[s].ps.graph.edges();
    for (const auto& e : J[s]) used[s][e.u] = used[s][e.v] = 1;
  }
  for (Vertex v : p.V0()) {
    const auto& V1 = H.neighbors(v);
    std::vector<int> slot;
    for (int s = 0; s < S; ++s) {
      for (int k = F[s].ps.graph.degree(v); k < 2; ++k) slot.push_back(s);
    }
    if (exact && V1.size() != slot.size()) {
      throw PreconditionError(stage, "degree_accounting",
                              "vertex " + vname(v) + " has " +
                                  std::to_string(V1.size()) +
                                  " edges for " + std::to_string(slot.size()) +
                                  " open slots",
                              {v});
    }
    if (V1.size() < slot.size()) {
      throw InfeasibleError(stage, "starvation",
                            "vertex " + vname(v) + " has " +
                                std::to_string(V1.size()) +
                                " edges for " + std::to_string(slot.size()) +
                                " open slots",
                            {v});
    }
    BipartiteMatcher m(static_cast<int>(slot.size()),
                       static_cast<int>(V1.size()));
    for (size_t a = 0; a < slot.size(); ++a) {
      for (size_t b = 0; b < V1.size(); ++b) {
        if (!used[slot[a]][V1[b]]) {
          m.add_edge(static_cast<int>(a), static_cast<int>(b));
        }
      }
    }
    if (m.solve() < static_cast<int>(slot.size())) {
      std::vector<int> wit{v};
      for (int a : m.hall_violator()) wit.push_back(-1 - slot[a]);
      throw InfeasibleError(stage, "hall_condition",
                            "no perfect assignment of the edges at " + vname(v) +
                                " (negative witnesses -1-s name systems)",
                            wit);
    }
    for (size_t a = 0; a < slot.size(); ++a) {
      Vertex u = V1[m.match_of_left(static_cast<int>(a))];
      J[slot[a]].push_back(make_edge(v, u));
      used[slot[a]][u] = used[slot[a]][v] = 1;
    }
  }
  return J;
}

ExceptionalSystem system_from(const ExceptionalCandidate& f,
                              std::vector<Edge> edges, const Partition& p,
                              std::optional<Locale> loc) {
  ExceptionalSystem j;
  Graph g(p.n(), std::move(edges));
  VertexSet iso;
  for (Vertex v : f.ps.isolated) {
    if (g.degree(v) == 0) iso.push_back(v);
  }
  j.ps = PathSystem(std::move(g), std::move(iso));
  j.kind = f.kind == CandidateKind::kHESC ? SystemKind::kHES : SystemKind::kMES;
  j.locale = loc;
  return j;
}

void require_ok(const Report& rep, const std::string& stage) {
  if (const ClauseResult* f = rep.first_failure()) {
    throw InfeasibleError(stage, f->clause,
                          rep.subject() + ": " + f->clause +
                              (f->detail.empty() ? "" : " (" + f->detail + ")"),
                          f->witness_vertices);
  }
}

// Keeps the listed clauses hard and marks the rest advisory.
void keep_hard(Report& rep, const std::vector<std::string>& hard) {
  Report out(rep.subject());
  for (const auto& c : rep.clauses()) {
    bool h = std::find(hard.begin(), hard.end(), c.clause) != hard.end();
    ClauseResult& r = h ? out.add(c.clause, c.passed, c.detail)
                        : out.add_advisory(c.clause, c.passed, c.detail);
    r.witness_vertices = c.witness_vertices;
    r.witness_edges = c.witness_edges;
    r.slack = c.slack;
  }
  rep = std::move(out);
}

Certificate start(const Instance& inst, const std::string& regime) {
  Certificate cert;
  cert.instance_hash = instance_hash(inst);
  cert.regime = regime;
  cert.params = inst.params;
  return cert;
}

void fail(Certificate& cert, const std::string& status, std::string stage,
          std::string clause, std::string msg, std::vector<int> witness) {
  cert.status = status;
  cert.failure = Failure{std::move(stage), std::move(clause), std::move(msg),
                         std::move(witness)};
}

// Runs the stages of a pipeline and records the outcome on the certificate.
Certificate guarded(const Instance& inst, const std::string& regime,
                    ExecutionPolicy policy,
                    const std::function<void(Certificate&)>& body) {
  Certificate cert = start(inst, regime);
  try {
    cert.preconditions = check_preconditions(inst, regime);
  } catch (const InputError& e) {
    fail(cert, "precondition_failed", "preconditions", "input", e.what(), {});
    return cert;
  }
  if (const ClauseResult* f = cert.preconditions.first_failure()) {
    fail(cert, "precondition_failed", "preconditions", f->clause,
         f->clause + (f->detail.empty() ? "" : ": " + f->detail),
         f->witness_vertices);
    return cert;
  }
  try {
    body(cert);
  } catch (const PreconditionError& e) {
    fail(cert, "infeasible", e.stage(), e.clause(), e.what(),
         e.witness_vertices());
    return cert;
  } catch (const InfeasibleError& e) {
    fail(cert, "infeasible", e.stage(), e.clause(), e.what(),
         e.witness_vertices());
    return cert;
  } catch (const InputError& e) {
    fail(cert, "infeasible", "input", "input", e.what(), {});
    return cert;
  } catch (const ContractError& e) {
    fail(cert, "infeasible", "internal", "contract", e.what(), {});
    return cert;
  }
  cert.verification = verify_certificate(inst, cert, policy);
  if (const ClauseResult* f = cert.verification.first_failure()) {
    fail(cert, "verification_failed", "verify", f->clause,
         f->clause + (f->detail.empty() ? "" : ": " + f->detail),
         f->witness_vertices);
  }
  return cert;
}

void tally(Certificate& cert, const Instance& inst) {
  const Partition& p = inst.P;
  const int K = p.K();
  const int64_t K2 = static_cast<int64_t>(K) * K;
  const int64_t an = alpha_n(inst.params);
  const int64_t target = an - inst.params.lambda_n / K2;
  cert.counts.clear();
  for (int i = 1; i <= K; ++i) {
    for (int j = 1; j <= K; ++j) {
      CellCount c;
      c.i = i;
      c.j = j;
      c.target = target;
      for (const auto& r : cert.systems) {
        if (!r.system.locale || r.system.locale->i != i ||
            r.system.locale->j != j) {
          continue;
        }
        ++c.localized;
        const Graph& g = r.system.ps.graph;
        if (crossing_edges(g, p) == 2) {
          ++c.two_edge;
          bool sp = true;
          for (Vertex w : cert.W0) sp = sp && crossing_degree(g, p, w) == 1;
          if (sp) ++c.special;
        }
      }
      cert.counts.push_back(c);
    }
  }
}

}  // namespace

Graph scheme_graph(const Instance& inst) {
  const Partition& p = inst.P;
  std::vector<Edge> keep;
  for (const auto& e : inst.G.edges()) {
    if (p.in_A(e.u) && p.in_A(e.v)) continue;
    if (p.in_B(e.u) && p.in_B(e.v)) continue;
    if (inst.G0.has_edge(e)) continue;
    keep.push_back(e);
  }
  return Graph(inst.G.n(), std::move(keep));
}

std::string instance_hash(const Instance& inst) {
  uint64_t h = 1469598103934665603ULL;
  for (Vertex v = 0; v < inst.P.n(); ++v) {
    const Block& b = inst.P.block(v);
    h = (h ^ static_cast<uint64_t>(b.cluster * 2 + (b.side == Side::kB)))
        * 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return graph_hash(inst.G) + "-" + graph_hash(inst.G0) + "-" + buf;
}

Graph crossing_graph(const Graph& g, const VertexSet& Aprime) {
  std::vector<char> in_a(g.n(), 0);
  for (Vertex v : Aprime) in_a[v] = 1;
  std::vector<Edge> out;
  for (const auto& e : g.edges()) {
    if (in_a[e.u] != in_a[e.v]) out.push_back(e);
  }
  return Graph(g.n(), std::move(out));
}

CriticalityReport classify_criticality(const Graph& g, const VertexSet& Aprime,
                                       const VertexSet& Bprime, int64_t D) {
  if (static_cast<int>(Aprime.size() + Bprime.size()) != g.n()) {
    throw InputError("A' and B' must partition the vertex set");
  }
  CriticalityReport rep;
  rep.D = D;
  const int n = g.n();
  Graph cross = crossing_graph(g, Aprime);
  rep.crossing_edges = cross.num_edges();
  rep.delta_cross = cross.max_degree();
  rep.cap = static_cast<int>(11 * D / 40);
  rep.capped_max_edges = max_subgraph_degree_capped(cross, rep.cap).num_edges();
  rep.is_critical = 40 * static_cast<int64_t>(rep.delta_cross) >= 11 * D &&
                    40 * rep.capped_max_edges <= 41 * D;

  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return cross.degree(a) > cross.degree(b);
  });
  for (int k = 0; k < std::min(n, 4); ++k) {
    rep.top.push_back(order[k]);
    rep.top_degree.push_back(cross.degree(order[k]));
  }
  for (Vertex v : order) {
    if (40 * static_cast<int64_t>(cross.degree(v)) >= 11 * D) rep.W.push_back(v);
  }
  auto deg_at = [&](int k) -> int64_t {
    return k < n ? cross.degree(order[k]) : 0;
  };
  int j = 0;
  while (j < n && 80 * deg_at(j) > 21 * D) ++j;
  // Prefix lengths i with |W| <= i <= min(j, 3) and a gap of D/240 after.
  for (int i = std::max<int>(1, static_cast<int>(rep.W.size()));
       i <= std::min(j, 3); ++i) {
    if (240 * (deg_at(i - 1) - deg_at(i)) >= D) {
      rep.Wprime.assign(order.begin(), order.begin() + i);
      break;
    }
  }

  const int64_t e = rep.crossing_edges;
  const int64_t w = static_cast<int64_t>(rep.W.size());
  Report& b = rep.bounds;
  b = Report("critical graph bounds");
  b.add("i", w >= 1 && w <= 3, "|W| = " + std::to_string(w));
  bool ii = (2 * D == n - 1 && n % 4 == 1) || (2 * D == n - 2 && n % 4 == 0);
  if (n % 4 == 1) ii = ii && w == 1;
  b.add("ii", ii, "n = " + std::to_string(n) + ", D = " + std::to_string(D));
  b.add("iii", 10 * e <= 17 * D + 50 && e < n,
        "e(A',B') = " + std::to_string(e));
  int64_t e_rest = 0;
  for (const auto& ed : cross.edges()) {
    if (!contains(make_vertex_set(rep.W), ed.u) &&
        !contains(make_vertex_set(rep.W), ed.v)) {
      ++e_rest;
    }
  }
  bool iv = w == 1   ? 4 * e_rest <= 3 * D + 20
            : w == 2 ? 40 * e_rest <= 19 * D + 200
            : w == 3 ? 5 * e_rest <= D + 25
                     : false;
  b.add("iv", iv, "e_{G-W}(A',B') = " + std::to_string(e_rest));
  b.add("v", !rep.Wprime.empty(), "|W'| = " + std::to_string(rep.Wprime.size()));
  return rep;
}

namespace {

// Swaps leftover edges v-x with x in `avoid` against pendant edges v-y added
// to a system of the same cell, with y outside `avoid` and x fresh for that
// system. Pendant edges stay pendant, so every system stays valid.
int64_t steer_leftover(LocalizedExtension& out,
                       const std::vector<ExceptionalCandidate>& F,
                       const Partition& p, const VertexSet& avoid) {
  if (avoid.empty()) return 0;
  std::set<Edge> left(out.leftover.edges().begin(), out.leftover.edges().end());
  const int n = out.leftover.n();
  int64_t swaps = 0;
  for (const Edge bad : std::vector<Edge>(left.begin(), left.end())) {
    const Vertex v = exceptional_end(bad, p);
    const Vertex x = bad.other(v);
    if (!contains(avoid, x)) continue;
    for (size_t s = 0; s < out.systems.size(); ++s) {
      const Graph& g = out.systems[s].ps.graph;
      if (g.degree(x) != 0) continue;
      std::optional<Edge> give;
      for (Vertex y : g.neighbors(v)) {
        Edge e = make_edge(v, y);
        if (!p.exceptional(y) && !contains(avoid, y) &&
            !F[s].ps.graph.has_edge(e) && g.degree(y) == 1) {
          give = e;
          break;
        }
      }
      if (!give) continue;
      std::vector<Edge> edges;
      for (const auto& e : g.edges()) {
        if (e != *give) edges.push_back(e);
      }
      edges.push_back(bad);
      std::sort(edges.begin(), edges.end());
      out.systems[s].ps.graph = Graph(n, std::move(edges));
      left.erase(bad);
      left.insert(*give);
      ++swaps;
      break;
    }
  }
  out.leftover = Graph(n, std::vector<Edge>(left.begin(), left.end()));
  return swaps;
}

}  // namespace

LocalizedExtension extend_localized(const Graph& H,
                                    const std::vector<ExceptionalCandidate>& F,
                                    const Partition& p, const Locale& loc,
                                    const VertexSet& avoid) {
  const std::string stage = "extend_localized";
  LocalizedExtension out;
  out.report = Report("localized extension " + cell_str(loc.i, loc.j));
  for (const auto& e : H.edges()) {
    Vertex x = exceptional_end(e, p);
    bool ok = x >= 0 &&
              p.cluster(e.other(x)) == (p.in_A_prime(x) ? loc.i : loc.j);
    if (!ok) {
      throw PreconditionError(stage, "H_local",
                              "edge " + vname(e.u) + "-" + vname(e.v) +
                                  " is not an A0A_i or B0B_j edge of cell " +
                                  cell_str(loc.i, loc.j),
                              {e.u, e.v});
    }
  }
  for (size_t s = 0; s < F.size(); ++s) {
    ExceptionalCandidate f = F[s];
    f.locale = loc;
    Report r = verify_candidate(f, p);
    if (const ClauseResult* c = r.first_failure()) {
      throw PreconditionError(stage, "candidate_local",
                              "candidate " + std::to_string(s + 1) + ": " +
                                  c->clause + " " + c->detail,
                              c->witness_vertices);
    }
  }
  const int64_t n = p.n();
  const int64_t g2 = 2 * static_cast<int64_t>(F.size());
  Rational worst(0);
  bool first = true;
  Vertex bad = -1;
  for (Vertex v : p.V0()) {
    int64_t d = H.degree(v);
    for (const auto& f : F) d += f.ps.graph.degree(v);
    int64_t room = d - g2;
    Rational slack = room < 0 ? Rational(-1)
                              : Rational(room * room) -
                                    p.eps0() * Rational(n * n);
    if (first || slack < worst) {
      worst = slack;
      first = false;
      if (slack < Rational(0)) bad = v;
    }
  }
  auto& adv = out.report.add_advisory(
      "degree_room", bad < 0,
      bad < 0 ? "" : "vertex " + vname(bad) + " below (2 gamma + sqrt eps0) n");
  if (bad >= 0) adv.witness_vertices = {bad};

  // Greedy pass: one candidate at a time on what is left of H.
  std::set<Edge> rest(H.edges().begin(), H.edges().end());
  std::vector<ExceptionalSystem> sys;
  std::optional<size_t> starved;
  for (size_t s = 0; s < F.size(); ++s) {
    Graph host(H.n(), std::vector<Edge>(rest.begin(), rest.end()));
    try {
      ExceptionalSystem j = faithful_extend(F[s], host, p);
      j.locale = loc;
      for (const auto& e : j.ps.graph.edges()) rest.erase(e);
      sys.push_back(std::move(j));
    } catch (const InfeasibleError&) {
      starved = s;
      break;
    }
  }
  if (!starved) {
    out.systems = std::move(sys);
    out.leftover = Graph(H.n(), std::vector<Edge>(rest.begin(), rest.end()));
    out.report.add_advisory("leftover_swaps", true,
                            std::to_string(steer_leftover(out, F, p, avoid)));
    return out;
  }

  // The greedy pass can starve where a joint assignment exists.
  out.used_matching_fallback = true;
  std::vector<std::vector<Edge>> J;
  try {
    J = assign_by_matching(H, F, p, false, stage);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(stage, "starvation",
                          "candidate " + std::to_string(*starved + 1) +
                              " of cell " + cell_str(loc.i, loc.j) +
                              " cannot be extended; joint assignment: " +
                              e.what(),
                          e.witness_vertices());
  }
  std::set<Edge> left(H.edges().begin(), H.edges().end());
  for (size_t s = 0; s < F.size(); ++s) {
    for (const auto& e : J[s]) left.erase(e);
    out.systems.push_back(system_from(F[s], std::move(J[s]), p, loc));
  }
  out.leftover = Graph(H.n(), std::vector<Edge>(left.begin(), left.end()));
  out.report.add_advisory("leftover_swaps", true,
                          std::to_string(steer_leftover(out, F, p, avoid)));
  return out;
}

std::vector<ExceptionalSystem> extend_global(
    const Graph& H, const std::vector<ExceptionalCandidate>& F,
    const Partition& p) {
  const std::string stage = "extend_global";
  for (const auto& e : H.edges()) {
    if (exceptional_end(e, p) < 0) {
      throw PreconditionError(stage, "H_edges",
                              "edge " + vname(e.u) + "-" + vname(e.v) +
                                  " is not an A0A or B0B edge",
                              {e.u, e.v});
    }
  }
  auto J = assign_by_matching(H, F, p, true, stage);
  std::vector<ExceptionalSystem> out;
  for (size_t s = 0; s < F.size(); ++s) {
    out.push_back(system_from(F[s], std::move(J[s]), p, std::nullopt));
  }
  return out;
}

AssemblyResult construct_all_systems(
    const Graph& Gstar, const Partition& p, const CellGrid& H,
    const std::vector<std::vector<ExceptionalCandidate>>& F,
    const std::vector<std::vector<ExceptionalCandidate>>& Fprime,
    int64_t alpha_n, int64_t lambda_n, ExecutionPolicy policy) {
  const int K = H.K;
  const int cells = K * K;
  const int64_t K2 = static_cast<int64_t>(K) * K;
  AssemblyResult res;
  res.report = Report("system construction");
  if (static_cast<int>(F.size()) != cells ||
      static_cast<int>(Fprime.size()) != cells) {
    throw InputError("candidate grids must have K^2 cells");
  }
  std::vector<Edge> all;
  for (int c = 0; c < cells; ++c) {
    all.insert(all.end(), H.cells[c].edges().begin(), H.cells[c].edges().end());
    for (const auto* list : {&F[c], &Fprime[c]}) {
      for (const auto& f : *list) {
        all.insert(all.end(), f.ps.graph.edges().begin(),
                   f.ps.graph.edges().end());
      }
    }
  }
  std::sort(all.begin(), all.end());
  bool partition = all == Gstar.edges();
  res.report.add("ii", partition, "pieces partition the scheme graph");
  if (!partition) {
    throw PreconditionError("construct_all_systems", "ii",
                            "H, F and F' do not partition the scheme graph");
  }
  Vertex bad = -1;
  for (Vertex v : p.V0()) {
    if (Gstar.degree(v) != 2 * K2 * alpha_n) bad = v;
  }
  res.report.add("vi", bad < 0, "degree 2 K^2 alpha n on V0");
  if (bad >= 0) {
    throw PreconditionError("construct_all_systems", "vi",
                            "vertex " + vname(bad) + " has degree " +
                                std::to_string(Gstar.degree(bad)),
                            {bad});
  }

  // Cluster vertices used by a global candidate; leftover edges at them
  // cannot serve that candidate, so the localized pass steers away.
  std::vector<Vertex> busy;
  for (const auto& list : Fprime) {
    for (const auto& f : list) {
      for (Vertex v : f.ps.graph.non_isolated()) {
        if (!p.exceptional(v)) busy.push_back(v);
      }
    }
  }
  const VertexSet avoid = make_vertex_set(std::move(busy));
  std::vector<LocalizedExtension> ext(cells);
  for_each_cell(cells, policy, [&](int c) {
    Locale loc{c / K + 1, c % K + 1};
    ext[c] = extend_localized(H.cells[c], F[c], p, loc, avoid);
  });
  std::vector<Edge> h0;
  std::vector<ExceptionalCandidate> fp;
  std::vector<Locale> fp_origin;
  for (int c = 0; c < cells; ++c) {
    Locale loc{c / K + 1, c % K + 1};
    res.report.merge(ext[c].report, cell_str(loc.i, loc.j) + ".");
    res.report.add_advisory(cell_str(loc.i, loc.j) + ".greedy_extension",
                            !ext[c].used_matching_fallback);
    for (size_t s = 0; s < ext[c].systems.size(); ++s) {
      res.records.push_back(SystemRecord{std::move(ext[c].systems[s]),
                                         F[c][s].stage, "localized", loc});
    }
    h0.insert(h0.end(), ext[c].leftover.edges().begin(),
              ext[c].leftover.edges().end());
    for (const auto& f : Fprime[c]) {
      fp.push_back(f);
      fp_origin.push_back(loc);
    }
  }
  if (static_cast<int64_t>(fp.size()) != lambda_n) {
    throw ContractError("global candidate count differs from lambda n");
  }
  auto glob = extend_global(Graph(Gstar.n(), h0), fp, p);
  for (size_t s = 0; s < glob.size(); ++s) {
    res.records.push_back(
        SystemRecord{std::move(glob[s]), fp[s].stage, "global", fp_origin[s]});
  }
  return res;
}

Relabeled relabel_cell(std::vector<ExceptionalCandidate> cands,
                       const Partition& p, int i, int j, int64_t gamma_n,
                       int64_t gamma_prime_n,
                       const std::vector<Vertex>& special_w0,
                       bool special_needs_w0) {
  Relabeled out;
  out.info.i = i;
  out.info.j = j;
  if (static_cast<int64_t>(cands.size()) != gamma_n + gamma_prime_n) {
    throw ContractError("cell " + cell_str(i, j) + " has " +
                        std::to_string(cands.size()) + " candidates, expected " +
                        std::to_string(gamma_n + gamma_prime_n));
  }
  auto local = [&](const ExceptionalCandidate& f) {
    for (const auto& e : f.ps.graph.edges()) {
      if (!p.edge_in_cell(e, i, j)) return false;
    }
    return true;
  };
  auto special = [&](const ExceptionalCandidate& f) {
    if (f.ps.graph.num_edges() != 2) return false;
    if (!special_needs_w0) return true;
    for (Vertex w : special_w0) {
      if (f.ps.graph.degree(w) != 1) return false;
    }
    return true;
  };
  std::vector<ExceptionalCandidate> loc;
  for (auto& f : cands) {
    if (local(f)) {
      loc.push_back(std::move(f));
    } else {
      f.locale.reset();
      out.Fprime.push_back(std::move(f));
    }
  }
  out.info.nonlocal = static_cast<int64_t>(out.Fprime.size());
  if (out.info.nonlocal > gamma_prime_n) {
    throw InfeasibleError("relabel", "nonlocal",
                          "cell " + cell_str(i, j) + " has " +
                              std::to_string(out.info.nonlocal) +
                              " non-local candidates, at most " +
                              std::to_string(gamma_prime_n) + " allowed");
  }
  auto rank = [&](const ExceptionalCandidate& f) {
    if (f.ps.graph.num_edges() == 2) return special(f) && special_needs_w0 ? 1 : 0;
    return 2;
  };
  std::stable_sort(loc.begin(), loc.end(),
                   [&](const ExceptionalCandidate& a,
                       const ExceptionalCandidate& b) {
                     return rank(a) < rank(b);
                   });
  const int64_t fill = gamma_prime_n - out.info.nonlocal;
  out.info.filled_from_local = fill;
  for (int64_t k = 0; k < fill; ++k) {
    loc[k].locale.reset();
    out.Fprime.push_back(std::move(loc[k]));
  }
  for (size_t k = static_cast<size_t>(fill); k < loc.size(); ++k) {
    loc[k].locale = Locale{i, j};
    if (loc[k].ps.graph.num_edges() == 2) ++out.info.local_two_edge;
    if (special(loc[k])) ++out.info.local_special;
    out.F.push_back(std::move(loc[k]));
  }
  return out;
}

std::string select_regime(const Instance& inst) {
  const Partition& p = inst.P;
  Graph cross = crossing_graph(inst.G, p.A_prime());
  if (cross.num_edges() < inst.params.D) return "few_edges";
  CriticalityReport c =
      classify_criticality(inst.G, p.A_prime(), p.B_prime(), inst.params.D);
  return c.is_critical ? "critical" : "noncritical";
}

Report check_preconditions(const Instance& inst, const std::string& regime) {
  Report rep("preconditions (" + regime + ")");
  const Graph& G = inst.G;
  const Partition& p = inst.P;
  const Params& pr = inst.params;
  const int64_t n = G.n();
  const int64_t D = pr.D;
  const int K = pr.K;
  const int64_t K2 = static_cast<int64_t>(K) * K;

  auto probs = p.problems();
  bool part_ok = probs.empty() && p.n() == n && p.K() == K &&
                 p.eps0() == pr.eps0;
  rep.add("partition", part_ok,
          part_ok ? "" : (probs.empty() ? "partition does not match the "
                                          "graph or parameters"
                                        : probs.front()));
  if (!part_ok) return rep;
  Vertex irregular = -1;
  for (Vertex v = 0; v < n; ++v) {
    if (G.degree(v) != D) {
      irregular = v;
      break;
    }
  }
  rep.add("regular", irregular < 0,
          irregular < 0 ? "" : "vertex " + vname(irregular) + " has degree " +
                                   std::to_string(G.degree(irregular)))
      .witness_vertices = irregular < 0 ? std::vector<int>{}
                                        : std::vector<int>{irregular};
  if (irregular >= 0) return rep;

  const Graph& G0 = inst.G0;
  bool g0_sub = G0.n() == n;
  Edge bad_e{-1, -1};
  if (g0_sub) {
    for (const auto& e : G0.edges()) {
      if (!G.has_edge(e)) {
        g0_sub = false;
        bad_e = e;
        break;
      }
    }
  }
  auto& sub = rep.add("G0_subgraph", g0_sub);
  if (bad_e.u >= 0) sub.witness_vertices = {bad_e.u, bad_e.v};
  if (!g0_sub) return rep;
  Edge inner{-1, -1};
  for (const auto& e : G.edges()) {
    bool a0 = p.in_A_prime(e.u) && p.in_A_prime(e.v) && p.exceptional(e.u) &&
              p.exceptional(e.v);
    bool b0 = p.in_B_prime(e.u) && p.in_B_prime(e.v) && p.exceptional(e.u) &&
              p.exceptional(e.v);
    if ((a0 || b0) && !G0.has_edge(e)) {
      inner = e;
      break;
    }
  }
  auto& in0 = rep.add("G0_exceptional_parts", inner.u < 0,
                      "G[A0] + G[B0] lies in G0");
  if (inner.u >= 0) in0.witness_vertices = {inner.u, inner.v};
  Vertex bad_phi = -1;
  for (Vertex v : p.V0()) {
    if (G0.degree(v) != pr.phi_n) {
      bad_phi = v;
      break;
    }
  }
  auto& phi = rep.add("G0_degree", bad_phi < 0, "phi n on V0");
  if (bad_phi >= 0) phi.witness_vertices = {bad_phi};
  rep.add("divisibility",
          (D - pr.phi_n) % (2 * K2) == 0 && pr.lambda_n % K2 == 0 &&
              D - pr.phi_n >= 0,
          "2K^2 | D - phi n and K^2 | lambda n");
  if (!rep.ok()) return rep;

  Graph gd = scheme_graph(inst);
  const int64_t e_diamond = crossing_edges(gd, p);
  rep.add("crossing_parity", e_diamond % 2 == 0,
          "e(A', B') of the scheme graph is " + std::to_string(e_diamond));
  rep.merge(verify_scheme(gd, p, pr.eps), "scheme.");

  Graph cross = crossing_graph(G, p.A_prime());
  const int64_t e = cross.num_edges();
  const int64_t delta = cross.max_degree();
  const int64_t an = alpha_n(pr);
  if (regime == "noncritical") {
    rep.add("edge_window",
            D <= e && Rational(e) <= pr.eps0 * Rational(n * n),
            "e(A', B') = " + std::to_string(e));
    rep.add("crossing_degree", 2 * delta <= D,
            "max crossing degree " + std::to_string(delta));
    auto c = classify_criticality(G, p.A_prime(), p.B_prime(), D);
    rep.add("not_critical", !c.is_critical);
    rep.add("gamma", an - 2 * pr.lambda_n / K2 > 0,
            "alpha n - 2 lambda n / K^2 = " +
                std::to_string(an - 2 * pr.lambda_n / K2));
  } else if (regime == "critical") {
    rep.add("degree_floor", D >= n - 2 * (n / 4) - 1);
    rep.add("edge_floor", e >= D, "e(A', B') = " + std::to_string(e));
    rep.add("crossing_degree", 2 * delta <= D,
            "max crossing degree " + std::to_string(delta));
    auto c = classify_criticality(G, p.A_prime(), p.B_prime(), D);
    rep.add("critical", c.is_critical);
    rep.add("divisibility_critical", (D - pr.phi_n) % (400 * K2) == 0,
            "400 K^2 | D - phi n");
    int64_t g0_cross = crossing_edges(G0, p);
    rep.add("G0_crossing", g0_cross <= pr.phi_n,
            "e_G0(A', B') = " + std::to_string(g0_cross));
    Graph dcross = crossing_part(gd, p);
    Vertex bad_w = -1;
    for (size_t k = 0; k < std::min<size_t>(2, c.top.size()); ++k) {
      if (2 * dcross.degree(c.top[k]) > D - pr.phi_n) bad_w = c.top[k];
    }
    auto& w = rep.add("top_degrees", bad_w < 0,
                      "two largest crossing degrees at most (D - phi n)/2");
    if (bad_w >= 0) w.witness_vertices = {bad_w};
  } else if (regime == "few_edges") {
    rep.add("regular_half", n % 4 == 0 && D == n / 2 - 1);
    rep.add("halves",
            static_cast<int64_t>(p.A_prime().size()) == n / 2 &&
                static_cast<int64_t>(p.B_prime().size()) == n / 2);
    rep.add("crossing_degree", 4 * delta <= n,
            "max crossing degree " + std::to_string(delta));
    int64_t dd = crossing_part(gd, p).max_degree();
    rep.add("window", 2 * dd <= e_diamond && 2 * e_diamond <= D - pr.phi_n,
            "scheme crossing edges " + std::to_string(e_diamond) +
                ", max degree " + std::to_string(dd));
  } else {
    throw InputError("unknown regime '" + regime + "'");
  }
  return rep;
}

namespace {

// Relabels every cell and runs the combined construction.
void assemble(Certificate& cert, const Instance& inst, const Graph& gd,
              const SliceDecomposition& sd,
              std::vector<std::vector<ExceptionalCandidate>> cands,
              const std::vector<Vertex>& special_w0, bool special_needs_w0,
              ExecutionPolicy policy) {
  const Partition& p = inst.P;
  const int K = p.K();
  const int64_t K2 = static_cast<int64_t>(K) * K;
  const int64_t an = alpha_n(inst.params);
  const int64_t g2p = inst.params.lambda_n / K2;
  const int64_t g2 = an - g2p;
  std::vector<std::vector<ExceptionalCandidate>> F(K * K), Fp(K * K);
  for (int c = 0; c < K * K; ++c) {
    Relabeled r = relabel_cell(std::move(cands[c]), p, c / K + 1, c % K + 1, g2,
                               g2p, special_w0, special_needs_w0);
    F[c] = std::move(r.F);
    Fp[c] = std::move(r.Fprime);
    cert.relabeling.push_back(r.info);
  }
  AssemblyResult res = construct_all_systems(gd, p, sd.H, F, Fp, an,
                                             inst.params.lambda_n, policy);
  cert.systems = std::move(res.records);
  cert.slices = sd;
  tally(cert, inst);
}

}  // namespace

Certificate pipeline_noncritical(const Instance& inst, ExecutionPolicy policy) {
  return guarded(inst, "noncritical", policy, [&](Certificate& cert) {
    const Partition& p = inst.P;
    const Params& pr = inst.params;
    const int K = p.K();
    const int64_t K2 = static_cast<int64_t>(K) * K;
    const int64_t an = alpha_n(pr);
    const int64_t lam = pr.lambda_n / K2;
    const int64_t g1 = an - 2 * lam;
    const int64_t g1p = 2 * lam;
    Graph gd = scheme_graph(inst);
    RawSlices raw = random_slice(gd, p, pr.seed);
    SliceDecomposition sd = move_for_parity(raw, gd, p, pr);
    keep_hard(sd.report, {"partition", "b1", "b3"});
    require_ok(sd.report, "move_for_parity");
    std::vector<std::vector<ExceptionalCandidate>> cands(K * K);
    for_each_cell(K * K, policy, [&](int c) {
      Locale loc{c / K + 1, c % K + 1};
      NoncriticalResult r =
          decompose_noncritical(sd.Hpp.cells[c], p, g1, g1p,
                                pr.seed * 1000003ULL + c, loc);
      cands[c] = std::move(r.F);
      for (auto& f : r.Fprime) cands[c].push_back(std::move(f));
    });
    assemble(cert, inst, gd, sd, std::move(cands), {}, false, policy);
  });
}

Certificate pipeline_critical(const Instance& inst, ExecutionPolicy policy) {
  return guarded(inst, "critical", policy, [&](Certificate& cert) {
    const Partition& p = inst.P;
    const Params& pr = inst.params;
    const int K = p.K();
    const int64_t an = alpha_n(pr);
    CriticalityReport crit =
        classify_criticality(inst.G, p.A_prime(), p.B_prime(), pr.D);
    cert.W = crit.W;
    cert.Wprime = crit.Wprime;
    if (crit.Wprime.empty()) {
      throw InfeasibleError("classify_criticality", "Wprime",
                            "no prefix of the top crossing degrees has the "
                            "required gap");
    }
    for (size_t k = 0; k < std::min<size_t>(2, crit.top.size()); ++k) {
      if (contains(make_vertex_set(crit.Wprime), crit.top[k])) {
        cert.W0.push_back(crit.top[k]);
      }
    }
    Graph gd = scheme_graph(inst);
    RawSlices raw = random_slice(gd, p, pr.seed);
    SliceDecomposition sd = move_critical(raw, gd, p, cert.W0, pr.eps);
    keep_hard(sd.report, {"partition", "b1", "b3", "b6", "b7"});
    require_ok(sd.report, "move_critical");
    std::vector<std::vector<ExceptionalCandidate>> cands(K * K);
    for_each_cell(K * K, policy, [&](int c) {
      const Graph& h = sd.Hpp.cells[c];
      Rational eta(h.num_edges() - 2 * an, 2 * an);
      CriticalResult r = decompose_critical(h, p, crit.Wprime, cert.W0, an, eta,
                                            Locale{c / K + 1, c % K + 1});
      cands[c] = std::move(r.F);
    });
    assemble(cert, inst, gd, sd, std::move(cands), cert.W0, true, policy);
  });
}

Certificate pipeline_few_edges(const Instance& inst, ExecutionPolicy policy) {
  return guarded(inst, "few_edges", policy, [&](Certificate& cert) {
    const Partition& p = inst.P;
    const Params& pr = inst.params;
    const int K = p.K();
    const int64_t n = p.n();
    const int64_t an = alpha_n(pr);
    Graph gd = scheme_graph(inst);
    Graph cross = crossing_part(gd, p);
    const int64_t e = cross.num_edges();
    RawSlices raw = random_slice(gd, p, pr.seed);
    SliceDecomposition sd;
    if (Rational(e) <= Rational(300) * pr.eps * Rational(n)) {
      cert.branch = "single_cell";
      sd.H = raw.H;
      sd.Hpp.K = K;
      sd.Hpp.cells.assign(K * K, Graph(gd.n()));
      sd.Hpp.cells[0] = cross;
      sd.moved_in.assign(K * K, 0);
      sd.moved_out.assign(K * K, 0);
      sd.report = Report("single cell");
      sd.report.add("partition", true, "all crossing edges in cell (1,1)");
    } else {
      cert.branch = "w0_moves";
      for (Vertex v = 0; v < n; ++v) {
        if (8 * static_cast<int64_t>(cross.degree(v)) >= 3 * e) {
          cert.W0.push_back(v);
        }
      }
      sd = move_critical(raw, gd, p, cert.W0, pr.eps);
      keep_hard(sd.report, {"partition", "b1", "b3", "b6", "b7"});
      require_ok(sd.report, "move_critical");
    }
    std::vector<std::vector<ExceptionalCandidate>> cands(K * K);
    for_each_cell(K * K, policy, [&](int c) {
      const Graph& h = sd.Hpp.cells[c];
      const int64_t ec = h.num_edges();
      const std::string cell = cell_str(c / K + 1, c % K + 1);
      if (ec % 2 != 0 || ec > 2 * an) {
        throw InfeasibleError("few_edges.matching", "cell_size",
                              "cell " + cell + " has " + std::to_string(ec) +
                                  " crossing edges");
      }
      if (2 * static_cast<int64_t>(h.max_degree()) > ec) {
        throw InfeasibleError("few_edges.matching", "cell_degree",
                              "cell " + cell + " has max degree " +
                                  std::to_string(h.max_degree()));
      }
      Locale loc{c / K + 1, c % K + 1};
      if (ec > 0) {
        for (auto& m : balanced_matching_decomposition(h, ec / 2)) {
          if (m.size() != 2) {
            throw ContractError("balanced split of cell " + cell +
                                " gave a class of size " +
                                std::to_string(m.size()));
          }
          cands[c].push_back(
              make_candidate(p, std::move(m), loc, "few_edges.matching"));
        }
      }
      while (static_cast<int64_t>(cands[c].size()) < an) {
        cands[c].push_back(make_candidate(p, {}, loc, "few_edges.empty"));
      }
    });
    assemble(cert, inst, gd, sd, std::move(cands), {}, false, policy);
  });
}

Certificate run_pipeline(const Instance& inst, ExecutionPolicy policy) {
  std::string regime;
  try {
    regime = select_regime(inst);
  } catch (const InputError& e) {
    Certificate cert = start(inst, "unknown");
    fail(cert, "precondition_failed", "select_regime", "input", e.what(), {});
    return cert;
  }
  if (regime == "noncritical") return pipeline_noncritical(inst, policy);
  if (regime == "critical") return pipeline_critical(inst, policy);
  return pipeline_few_edges(inst, policy);
}

Report verify_certificate(const Instance& inst, const Certificate& cert,
                          ExecutionPolicy policy) {
  Report rep("certificate");
  const Partition& p = inst.P;
  const int K = p.K();
  const int64_t K2 = static_cast<int64_t>(K) * K;
  const int64_t an = alpha_n(inst.params);
  const int64_t lam = inst.params.lambda_n / K2;

  rep.add("instance_hash", cert.instance_hash == instance_hash(inst));
  std::string regime = select_regime(inst);
  rep.add("regime", regime == cert.regime,
          "recomputed '" + regime + "', stored '" + cert.regime + "'");
  rep.add("params",
          cert.params.D == inst.params.D &&
              cert.params.phi_n == inst.params.phi_n &&
              cert.params.lambda_n == inst.params.lambda_n &&
              cert.params.K == inst.params.K);

  Graph gd = scheme_graph(inst);
  std::vector<Edge> all;
  bool contained = true;
  for (const auto& r : cert.systems) {
    if (r.system.ps.graph.n() != gd.n()) {
      contained = false;
      continue;
    }
    for (const auto& e : r.system.ps.graph.edges()) {
      if (!gd.has_edge(e)) contained = false;
      all.push_back(e);
    }
  }
  std::sort(all.begin(), all.end());
  bool disjoint = std::adjacent_find(all.begin(), all.end()) == all.end();
  rep.add("containment", contained, "every system edge is a scheme edge");
  rep.add("disjoint", disjoint, "systems are edge-disjoint");
  rep.add("cover", contained && disjoint && all.size() ==
                                               gd.edges().size(),
          std::to_string(all.size()) + " of " +
              std::to_string(gd.num_edges()) + " scheme edges covered");

  const int S = static_cast<int>(cert.systems.size());
  std::vector<Report> sys(S);
  auto check = [&](int s) { sys[s] = verify_system(cert.systems[s].system, p); };
  if (policy == ExecutionPolicy::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < S; ++s) check(s);
  } else {
    for (int s = 0; s < S; ++s) check(s);
  }
  int bad_sys = -1;
  int bad_kind = -1;
  for (int s = 0; s < S; ++s) {
    if (bad_sys < 0 && !sys[s].ok()) bad_sys = s;
    const auto& j = cert.systems[s].system;
    bool kind_ok = j.kind == SystemKind::kHES;
    if (regime == "few_edges") {
      kind_ok = j.kind == SystemKind::kMES ||
                crossing_edges(j.ps.graph, p) == 2;
    }
    if (bad_kind < 0 && !kind_ok) bad_kind = s;
  }
  std::string sys_detail;
  if (bad_sys >= 0) {
    const ClauseResult* f = sys[bad_sys].first_failure();
    sys_detail = "system " + std::to_string(bad_sys) + ": " + f->clause + " " +
                 f->detail;
  }
  auto& sc = rep.add("systems", bad_sys < 0, sys_detail);
  if (bad_sys >= 0) sc.witness_vertices = sys[bad_sys].first_failure()->witness_vertices;
  rep.add("kinds", bad_kind < 0,
          bad_kind < 0 ? "" : "system " + std::to_string(bad_kind) +
                                  " has the wrong kind for the regime");
  rep.add("total", S == K2 * an,
          std::to_string(S) + " systems, want " + std::to_string(K2 * an));

  std::vector<Vertex> w0;
  if (regime == "critical") {
    auto c = classify_criticality(inst.G, p.A_prime(), p.B_prime(),
                                  inst.params.D);
    for (size_t k = 0; k < std::min<size_t>(2, c.top.size()); ++k) {
      if (40 * static_cast<int64_t>(c.top_degree[k]) >= 11 * inst.params.D) {
        w0.push_back(c.top[k]);
      }
    }
  }
  std::string bad_cell, weak_cell;
  for (int i = 1; i <= K; ++i) {
    for (int j = 1; j <= K; ++j) {
      int64_t local = 0, good = 0;
      for (const auto& r : cert.systems) {
        const auto& loc = r.system.locale;
        if (!loc || loc->i != i || loc->j != j) continue;
        ++local;
        const Graph& g = r.system.ps.graph;
        bool ok = crossing_edges(g, p) == 2;
        for (Vertex w : w0) ok = ok && crossing_degree(g, p, w) == 1;
        if (ok) ++good;
      }
      if (local != an - lam && bad_cell.empty()) {
        bad_cell = cell_str(i, j) + " has " + std::to_string(local) +
                   " localized systems, want " + std::to_string(an - lam);
      }
      if (good < lam && weak_cell.empty()) {
        weak_cell = cell_str(i, j) + " has " + std::to_string(good) +
                    " localized 2-edge systems, want " + std::to_string(lam);
      }
    }
  }
  rep.add("localized_per_cell", bad_cell.empty(), bad_cell);
  rep.add_advisory("two_edge_per_cell", weak_cell.empty(), weak_cell);
  return rep;
}

int exit_code(const Certificate& cert) {
  if (cert.status == "ok") return 0;
  if (cert.status == "precondition_failed") return 1;
  if (cert.status == "infeasible") return 2;
  return 3;
}

}  // namespace exdecomp
