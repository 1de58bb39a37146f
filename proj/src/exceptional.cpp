#include "exdecomp/exceptional.hpp"

#include <algorithm>
#include <cstdlib>

#include "exdecomp/errors.hpp"

namespace exdecomp {
namespace {

std::string vname(Vertex v) { return std::to_string(v); }

// Clauses shared by covers and candidates: path system, V0 in support, no
// edge inside A or inside B.
void structural_clauses(const PathSystem& ps, const Partition& p,
                        const std::string& pfx, Report& rep) {
  PathCheck pc = is_path_system(ps.graph);
  auto& c1 = rep.add(pfx + ".path_system", pc.ok, pc.reason);
  c1.witness_vertices = pc.witness;

  Vertex missing = -1;
  for (Vertex v : p.V0()) {
    if (!ps.in_support(v)) {
      missing = v;
      break;
    }
  }
  auto& c2 = rep.add(pfx + ".exceptional_in_support", missing < 0,
                     missing < 0 ? "" : "vertex " + vname(missing) +
                                            " of V0 not in support");
  if (missing >= 0) c2.witness_vertices = {missing};

  std::optional<Edge> bad;
  for (const auto& e : ps.graph.edges()) {
    if ((p.in_A(e.u) && p.in_A(e.v)) || (p.in_B(e.u) && p.in_B(e.v))) {
      bad = e;
      break;
    }
  }
  auto& c3 = rep.add(pfx + ".no_internal_edges", !bad.has_value(),
                     bad ? "edge " + vname(bad->u) + "-" + vname(bad->v) +
                               " inside a cluster side"
                         : "");
  if (bad) c3.witness_edges = {*bad};
}

}  // namespace

const char* to_string(SystemKind k) {
  return k == SystemKind::kHES ? "HES" : "MES";
}

const char* to_string(CandidateKind k) {
  return k == CandidateKind::kHESC ? "HESC" : "MESC";
}

ExceptionalCandidate make_candidate(const Partition& p, std::vector<Edge> edges,
                                    std::optional<Locale> locale,
                                    std::string stage) {
  ExceptionalCandidate f;
  Graph g(p.n(), std::move(edges));
  VertexSet iso;
  for (Vertex v : p.V0()) {
    if (g.degree(v) == 0) iso.push_back(v);
  }
  f.kind = crossing_edges(g, p) > 0 ? CandidateKind::kHESC
                                    : CandidateKind::kMESC;
  f.ps = PathSystem(std::move(g), std::move(iso));
  f.locale = locale;
  f.stage = std::move(stage);
  return f;
}

int64_t system_path_bound(const Partition& p) {
  return floor_sqrt_times(p.eps0(), p.n(), 1);
}

int64_t candidate_cross_bound(const Partition& p) {
  return floor_sqrt_times(p.eps0(), p.n(), 2);
}

ClauseResult check_locale(const PathSystem& ps, const Partition& p,
                          const Locale& loc) {
  ClauseResult res;
  res.clause = "localized";
  if (loc.i < 1 || loc.j < 1 || loc.i > p.K() || loc.j > p.K()) {
    res.passed = false;
    res.detail = "locale outside 1..K";
    return res;
  }
  for (Vertex v : ps.support()) {
    if (!p.in_cell(v, loc.i, loc.j)) {
      res.passed = false;
      res.detail = "vertex " + vname(v) + " outside V0 u A_" +
                   std::to_string(loc.i) + " u B_" + std::to_string(loc.j);
      res.witness_vertices = {v};
      return res;
    }
  }
  return res;
}

Report verify_cover(const PathSystem& ps, const Partition& p) {
  Report rep("exceptional cover");
  PathCheck pc = is_path_system(ps.graph);
  Vertex missing = -1;
  for (Vertex v : p.V0()) {
    if (!ps.in_support(v)) {
      missing = v;
      break;
    }
  }
  bool ec1 = pc.ok && missing < 0;
  auto& c1 = rep.add("EC1", ec1,
                     !pc.ok ? pc.reason
                            : (missing >= 0 ? "vertex " + vname(missing) +
                                                  " of V0 not covered"
                                            : ""));
  if (!pc.ok) c1.witness_vertices = pc.witness;
  if (missing >= 0) c1.witness_vertices = {missing};

  Vertex bad_deg = -1;
  for (Vertex v = 0; v < ps.graph.n(); ++v) {
    int d = ps.graph.degree(v);
    bool ok = p.exceptional(v) ? d == 2 : d <= 1;
    if (!ok) {
      bad_deg = v;
      break;
    }
  }
  auto& c2 = rep.add("EC2", bad_deg < 0,
                     bad_deg < 0 ? ""
                                 : "vertex " + vname(bad_deg) + " has degree " +
                                       std::to_string(ps.graph.degree(bad_deg)));
  if (bad_deg >= 0) c2.witness_vertices = {bad_deg};

  std::optional<Edge> bad;
  for (const auto& e : ps.graph.edges()) {
    if ((p.in_A(e.u) && p.in_A(e.v)) || (p.in_B(e.u) && p.in_B(e.v))) {
      bad = e;
      break;
    }
  }
  auto& c3 = rep.add("EC3", !bad.has_value(),
                     bad ? "edge " + vname(bad->u) + "-" + vname(bad->v) +
                               " inside A or B"
                         : "");
  if (bad) c3.witness_edges = {*bad};
  return rep;
}

Report verify_system(const ExceptionalSystem& j, const Partition& p) {
  Report rep(std::string("exceptional system (") + to_string(j.kind) + ")");
  Report cover = verify_cover(j.ps, p);
  rep.merge(cover, "ES1.");
  bool path_ok = is_path_system(j.ps.graph).ok;
  int64_t paths = path_ok ? count_ab_paths(j.ps, p) : -1;
  if (j.kind == SystemKind::kHES) {
    bool ok = path_ok && paths > 0 && paths % 2 == 0;
    rep.add("ES2.HES", ok,
            path_ok ? std::to_string(paths) + " AB-paths"
                    : "not a path system");
  } else {
    std::optional<Edge> cross;
    for (const auto& e : j.ps.graph.edges()) {
      if (p.crossing(e)) {
        cross = e;
        break;
      }
    }
    auto& c = rep.add("ES2.MES", !cross.has_value(),
                      cross ? "crossing edge " + vname(cross->u) + "-" +
                                  vname(cross->v)
                            : "");
    if (cross) c.witness_edges = {*cross};
  }
  int64_t bound = system_path_bound(p);
  auto& c3 = rep.add("ES3", path_ok && paths <= bound,
                     std::to_string(paths) + " AB-paths, bound " +
                         std::to_string(bound));
  c3.slack = static_cast<double>(bound - paths);
  if (j.locale) {
    ClauseResult lc = check_locale(j.ps, p, *j.locale);
    auto& c = rep.add("ES.localized", lc.passed, lc.detail);
    c.witness_vertices = lc.witness_vertices;
  }
  return rep;
}

Report verify_candidate(const ExceptionalCandidate& f, const Partition& p) {
  Report rep(std::string("exceptional system candidate (") + to_string(f.kind) +
             ")");
  structural_clauses(f.ps, p, "ESC1", rep);

  Vertex bad = -1;
  for (Vertex v : f.ps.support()) {
    int d = f.ps.graph.degree(v);
    bool ok = p.exceptional(v) ? d <= 2 : d == 1;
    if (!ok) {
      bad = v;
      break;
    }
  }
  auto& c2 = rep.add("ESC2", bad < 0,
                     bad < 0 ? ""
                             : "vertex " + vname(bad) + " has degree " +
                                   std::to_string(f.ps.graph.degree(bad)));
  if (bad >= 0) c2.witness_vertices = {bad};

  int64_t cross = crossing_edges(f.ps.graph, p);
  int64_t bound = candidate_cross_bound(p);
  auto& c3 = rep.add("ESC3", cross <= bound,
                     std::to_string(cross) + " crossing edges, bound " +
                         std::to_string(bound));
  c3.slack = static_cast<double>(bound - cross);

  bool path_ok = is_path_system(f.ps.graph).ok;
  if (f.kind == CandidateKind::kHESC) {
    int64_t b = path_ok ? count_ab_paths(f.ps, p) : -1;
    rep.add("ESC4.HESC", path_ok && b > 0 && b % 2 == 0,
            path_ok ? "b(F) = " + std::to_string(b) : "not a path system");
  } else {
    rep.add("ESC4.MESC", cross == 0,
            std::to_string(cross) + " crossing edges");
  }
  if (f.locale) {
    ClauseResult lc = check_locale(f.ps, p, *f.locale);
    auto& c = rep.add("ESC.localized", lc.passed, lc.detail);
    c.witness_vertices = lc.witness_vertices;
  }
  return rep;
}

Report verify_scheme(const Graph& g, const Partition& p, const Rational& eps) {
  Report rep("exceptional scheme");
  const int n = g.n();
  const int K = p.K();
  auto probs = p.problems();
  bool size_ok = p.n() == n;
  std::string d1 = size_ok ? "" : "partition covers a different vertex count";
  for (const auto& s : probs) d1 += (d1.empty() ? "" : "; ") + s;
  rep.add("ESch1", size_ok && probs.empty(), d1);
  if (!size_ok) return rep;

  std::optional<Edge> inner;
  for (const auto& e : g.edges()) {
    if ((p.in_A(e.u) && p.in_A(e.v)) || (p.in_B(e.u) && p.in_B(e.v))) {
      inner = e;
      break;
    }
  }
  auto& c2 = rep.add("ESch2", !inner.has_value(),
                     inner ? "edge " + vname(inner->u) + "-" +
                                 vname(inner->v) + " inside A or B"
                           : "");
  if (inner) c2.witness_edges = {*inner};

  // Per-vertex cluster degrees: cnt[v][0..K-1] into A_i, [K..2K-1] into B_i.
  std::vector<std::vector<int>> cnt(n, std::vector<int>(2 * K, 0));
  std::vector<int> to_a0(n, 0), to_b0(n, 0);
  for (const auto& e : g.edges()) {
    for (auto [x, y] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      const Block& b = p.block(y);
      if (b.cluster == 0) {
        (b.side == Side::kA ? to_a0 : to_b0)[x]++;
      } else {
        cnt[x][(b.side == Side::kA ? 0 : K) + b.cluster - 1]++;
      }
    }
  }
  const Rational eps0n = p.eps0() * Rational(n);
  {
    Vertex worst = -1;
    Rational worst_slack(0);
    bool first = true;
    for (Vertex v = 0; v < n; ++v) {
      if (p.exceptional(v)) continue;
      int other = 0;
      if (p.in_A(v)) {
        for (int i = 0; i < K; ++i) other += cnt[v][K + i];
        other += to_b0[v];
      } else {
        for (int i = 0; i < K; ++i) other += cnt[v][i];
        other += to_a0[v];
      }
      Rational slack = eps0n - Rational(other);
      if (first || slack < worst_slack) {
        worst_slack = slack;
        worst = v;
        first = false;
      }
    }
    bool ok = first || Rational(0) < worst_slack;
    auto& c = rep.add("ESch3", ok,
                      ok ? "" : "vertex " + vname(worst) +
                                    " has too many neighbours across");
    if (!ok) c.witness_vertices = {worst};
    c.slack = first ? 0.0 : worst_slack.to_double();
  }
  {
    const Rational epsn = eps * Rational(n);
    Vertex worst = -1;
    Rational worst_slack = epsn;
    for (Vertex v = 0; v < n; ++v) {
      int da = 0, db = 0;
      for (int i = 0; i < K; ++i) {
        da += cnt[v][i];
        db += cnt[v][K + i];
      }
      for (int i = 0; i < K; ++i) {
        int dev = std::max(std::abs(K * cnt[v][i] - da),
                           std::abs(K * cnt[v][K + i] - db));
        Rational slack = epsn - Rational(dev);
        if (slack < worst_slack) {
          worst_slack = slack;
          worst = v;
        }
      }
    }
    bool ok = Rational(0) <= worst_slack;
    auto& c = rep.add("ESch4", ok,
                      ok ? "" : "vertex " + vname(worst) +
                                    " has unbalanced cluster degrees");
    if (!ok) c.witness_vertices = {worst};
    c.slack = worst_slack.to_double();
  }
  {
    // X0 -> Y_i counts for X in {A, B}, Y in {A, B}.
    Rational worst_slack(1000000000);
    std::string worst_name;
    auto check = [&](const std::string& name, const std::vector<int64_t>& part,
                     int64_t total, int64_t k) {
      Rational tol = eps * Rational(std::max<int64_t>(total, n));
      for (size_t i = 0; i < part.size(); ++i) {
        Rational slack = tol - Rational(std::abs(k * part[i] - total));
        if (slack < worst_slack) {
          worst_slack = slack;
          worst_name = name + "[" + std::to_string(i + 1) + "]";
        }
      }
    };
    for (int xs = 0; xs < 2; ++xs) {
      const VertexSet& x0 = xs == 0 ? p.A0() : p.B0();
      for (int ys = 0; ys < 2; ++ys) {
        std::vector<int64_t> part(K, 0);
        for (Vertex v : x0) {
          for (int i = 0; i < K; ++i) part[i] += cnt[v][ys * K + i];
        }
        int64_t total = 0;
        for (auto x : part) total += x;
        std::string name = std::string("e(") + (xs == 0 ? "A0" : "B0") + "," +
                           (ys == 0 ? "A" : "B") + "_i)";
        check(name, part, total, K);
      }
    }
    std::vector<int64_t> cells(K * K, 0);
    for (const auto& e : g.edges()) {
      if (p.exceptional(e.u) || p.exceptional(e.v) || !p.crossing(e)) continue;
      Vertex a = p.in_A(e.u) ? e.u : e.v;
      Vertex b = e.other(a);
      cells[(p.cluster(a) - 1) * K + p.cluster(b) - 1]++;
    }
    int64_t total = 0;
    for (auto x : cells) total += x;
    check("e(A_i,B_j)", cells, total, static_cast<int64_t>(K) * K);
    bool ok = Rational(0) <= worst_slack;
    auto& c = rep.add("ESch5", ok, ok ? "" : worst_name + " out of range");
    c.slack = worst_slack.to_double();
  }
  return rep;
}

Report extend_preconditions(const Graph& g, const Partition& p) {
  Report rep("extension hypotheses");
  const Rational eps0n = p.eps0() * Rational(p.n());
  rep.add("size_of_V0", Rational(static_cast<int64_t>(p.V0().size())) <= eps0n,
          std::to_string(p.V0().size()) + " exceptional vertices");
  int64_t need = floor_sqrt_times(p.eps0(), p.n(), 1);
  // d(v, A) >= sqrt(eps0) n  <=>  d^2 >= eps0 n^2 for integer d.
  Vertex worst = -1;
  int worst_d = 0;
  for (Vertex v : p.V0()) {
    int d = degree_into(g, v, p.in_A_prime(v) ? p.A_all() : p.B_all());
    bool ok = Rational(int64_t{d} * d) >= eps0n * Rational(p.n());
    if (!ok && (worst < 0 || d < worst_d)) {
      worst = v;
      worst_d = d;
    }
  }
  auto& c = rep.add("same_side_degree", worst < 0,
                    worst < 0 ? ""
                              : "vertex " + vname(worst) + " has " +
                                    std::to_string(worst_d) +
                                    " same-side neighbours, needs about " +
                                    std::to_string(need));
  if (worst >= 0) c.witness_vertices = {worst};
  return rep;
}

ExceptionalSystem faithful_extend(const ExceptionalCandidate& f, const Graph& g,
                                  const Partition& p) {
  const Graph& fg = f.ps.graph;
  std::vector<int> deg(fg.n());
  for (int v = 0; v < fg.n(); ++v) deg[v] = fg.degree(v);
  std::vector<Edge> edges = fg.edges();
  for (Vertex v : p.V0()) {
    bool a_side = p.in_A_prime(v);
    for (Vertex u : g.neighbors(v)) {
      if (deg[v] >= 2) break;
      bool own = a_side ? p.in_A(u) : p.in_B(u);
      if (!own || deg[u] != 0 || contains(f.ps.isolated, u)) continue;
      edges.push_back(make_edge(v, u));
      ++deg[v];
      ++deg[u];
    }
    if (deg[v] < 2) {
      throw InfeasibleError("faithful_extend", "fresh_neighbours",
                            "exceptional vertex " + vname(v) +
                                " has too few fresh same-side neighbours",
                            {v});
    }
  }
  ExceptionalSystem j;
  j.ps = PathSystem(Graph(fg.n(), std::move(edges)), f.ps.isolated);
  // Isolated V0 vertices now have degree 2; keep only those still isolated.
  VertexSet iso;
  for (Vertex v : j.ps.isolated) {
    if (j.ps.graph.degree(v) == 0) iso.push_back(v);
  }
  j.ps.isolated = std::move(iso);
  j.kind = f.kind == CandidateKind::kHESC ? SystemKind::kHES : SystemKind::kMES;
  j.locale = f.locale;
  return j;
}

}  // namespace exdecomp
