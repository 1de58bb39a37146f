#include "exdecomp/candidates.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "exdecomp/errors.hpp"
#include "exdecomp/matchings.hpp"

namespace exdecomp {
namespace {

// Random subsets drawn before the leftover step gives up. The proof needs one
// good subset; at desk scale its concentration margins are below one edge.
constexpr int kSubsetAttempts = 500;

// Edge set with adjacency sets, for graphs that lose edges as they are
// assigned.
class EdgePool {
 public:
  explicit EdgePool(const Graph& g) : adj_(g.n()) {
    for (const auto& e : g.edges()) add(e);
  }

  void add(const Edge& e) {
    edges_.insert(e);
    adj_[e.u].insert(e.v);
    adj_[e.v].insert(e.u);
  }
  void remove(const Edge& e) {
    if (edges_.erase(e) == 0) throw ContractError("edge not in pool");
    adj_[e.u].erase(e.v);
    adj_[e.v].erase(e.u);
  }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
  const std::set<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  const std::set<Edge>& edges() const { return edges_; }
  bool empty() const { return edges_.empty(); }
  int n() const { return static_cast<int>(adj_.size()); }
  Graph graph() const {
    return Graph(n(), std::vector<Edge>(edges_.begin(), edges_.end()));
  }

 private:
  std::set<Edge> edges_;
  std::vector<std::set<Vertex>> adj_;
};

void require_crossing(const Graph& h, const Partition& p) {
  for (const auto& e : h.edges()) {
    if (!p.crossing(e)) {
      throw InputError("edge " + std::to_string(e.u) + "-" +
                       std::to_string(e.v) + " is not an A'B'-edge");
    }
  }
}

// Neighbour of v in the pool with the largest pool degree, ties by lowest id,
// skipping vertices rejected by `skip`.
template <typename Skip>
std::optional<Vertex> heaviest_neighbor(const EdgePool& pool, Vertex v,
                                        Skip skip) {
  std::optional<Vertex> best;
  for (Vertex u : pool.neighbors(v)) {
    if (skip(u)) continue;
    if (!best || pool.degree(u) > pool.degree(*best)) best = u;
  }
  return best;
}

// Greedy 2-matching: an edge at a maximum-degree vertex, then a disjoint edge
// at a maximum-degree vertex of what is left.
std::optional<std::vector<Edge>> greedy_two_matching(const EdgePool& pool) {
  std::vector<Edge> out;
  std::vector<Vertex> blocked;
  auto is_blocked = [&](Vertex x) {
    return std::find(blocked.begin(), blocked.end(), x) != blocked.end();
  };
  for (int k = 0; k < 2; ++k) {
    Vertex best = -1;
    int best_deg = 0;
    for (Vertex v = 0; v < pool.n(); ++v) {
      if (is_blocked(v)) continue;
      int d = 0;
      for (Vertex u : pool.neighbors(v)) d += is_blocked(u) ? 0 : 1;
      if (d > best_deg) {
        best = v;
        best_deg = d;
      }
    }
    if (best < 0) return std::nullopt;
    Vertex u = *heaviest_neighbor(pool, best, is_blocked);
    out.push_back(make_edge(best, u));
    blocked.push_back(best);
    blocked.push_back(u);
  }
  return out;
}

struct Draw {
  std::vector<std::vector<Edge>> F;
  std::vector<std::string> stage;
  int64_t r = 0;
};

}  // namespace

NoncriticalResult decompose_noncritical(const Graph& h, const Partition& p,
                                        int64_t gamma_n, int64_t gamma_prime_n,
                                        uint64_t seed,
                                        std::optional<Locale> locale) {
  if (gamma_n < 0 || gamma_prime_n < 0) {
    throw InputError("matching counts must be non-negative");
  }
  require_crossing(h, p);
  const int64_t n = p.n();
  NoncriticalResult res;
  res.report = Report("noncritical decomposition");
  Report& rep = res.report;
  auto require = [&](const std::string& clause, bool ok,
                     const std::string& detail) {
    rep.add(clause, ok, detail);
    if (!ok) {
      throw InfeasibleError("decompose_noncritical", clause,
                            clause + ": " + detail);
    }
  };

  require("even_edges", h.num_edges() % 2 == 0,
          std::to_string(h.num_edges()) + " edges");
  require("max_degree", 15 * static_cast<int64_t>(h.max_degree()) <= 16 * gamma_n,
          "max degree " + std::to_string(h.max_degree()) + ", gamma n " +
              std::to_string(gamma_n));
  const int d_ab = bipartite_part(h, p.A_all(), p.B_all()).max_degree();
  require("cluster_degree",
          Rational(5 * static_cast<int64_t>(d_ab)) <
              Rational(3 * gamma_n) - Rational(5) * p.eps0() * Rational(n),
          "max degree of h[A,B] is " + std::to_string(d_ab));
  const int cap = static_cast<int>(gamma_n * 3 / 5);
  Graph forced = bipartite_part(h, p.A0(), p.B0());
  std::optional<Graph> hp = max_capped_subgraph_with(h, cap, forced, true);
  require("capped_subgraph", hp.has_value(),
          "no even subgraph with degrees <= " + std::to_string(cap) +
              " contains h[A0,B0]");
  const int64_t ehp = hp->num_edges();
  require("capped_size",
          2 * (gamma_n + gamma_prime_n) <= ehp &&
              Rational(ehp) <=
                  Rational(10) * p.eps0() * Rational(gamma_n) * Rational(n),
          "e(H') = " + std::to_string(ehp));

  // F'_s: greedy 2-matchings of H'.
  EdgePool hp_pool(*hp);
  for (int64_t s = 0; s < gamma_prime_n; ++s) {
    auto two = greedy_two_matching(hp_pool);
    if (!two) {
      throw InfeasibleError("noncritical.two_matching", "two_matching",
                            "H' has no 2-matching left for F'_" +
                                std::to_string(s + 1));
    }
    for (const auto& e : *two) hp_pool.remove(e);
    res.Fprime.push_back(
        make_candidate(p, *two, locale, "noncritical.two_matching"));
  }
  Graph hp1 = hp_pool.graph();
  Graph hpp = graph_minus(h, *hp);

  if (gamma_n == 0) {
    if (hp1.num_edges() != 0 || hpp.num_edges() != 0) {
      throw InfeasibleError("noncritical.matching", "no_matchings",
                            "edges remain but gamma n = 0");
    }
    return res;
  }
  MatchingList M =
      even_matching_decomposition(hp1, static_cast<int>(gamma_n));

  if (hpp.num_edges() == 0) {
    for (auto& m : M) {
      res.F.push_back(make_candidate(p, m, locale, "noncritical.matching"));
    }
    return res;
  }

  // d_{H'_1}(v) and the exceptional vertices with H''-edges.
  std::vector<Vertex> X;
  for (Vertex v : p.V0()) {
    if (hpp.degree(v) > 0) X.push_back(v);
  }
  const int64_t cross_bound = candidate_cross_bound(p);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(2.0 / 3.0);
  std::string last_clause, last_msg;

  for (int attempt = 1; attempt <= kSubsetAttempts; ++attempt) {
    res.attempts = attempt;
    std::vector<int> sel, unsel;
    for (size_t s = 0; s < M.size(); ++s) {
      (coin(rng) ? sel : unsel).push_back(static_cast<int>(s));
    }
    const int64_t r = static_cast<int64_t>(sel.size());
    Draw draw;
    draw.r = r;
    EdgePool rest(hpp);
    for (int64_t s = 0; s < r; ++s) {
      const Matching& ms = M[sel[s]];
      std::vector<char> taken(n, 0);
      for (const auto& e : ms) taken[e.u] = taken[e.v] = 1;
      std::vector<Edge> f = ms;
      bool extended = false;
      for (Vertex w : X) {
        if (taken[w]) continue;
        std::vector<Vertex> ends;
        for (Vertex u : rest.neighbors(w)) {
          if (!taken[u]) ends.push_back(u);
          if (ends.size() == 2) break;
        }
        if (ends.size() < 2) continue;
        taken[w] = 1;
        for (Vertex u : ends) {
          taken[u] = 1;
          f.push_back(make_edge(w, u));
          rest.remove(make_edge(w, u));
        }
        extended = true;
      }
      draw.F.push_back(std::move(f));
      draw.stage.push_back(extended ? "noncritical.matching_with_paths"
                                    : "noncritical.matching");
    }
    std::vector<Edge> left(rest.edges().begin(), rest.edges().end());
    for (int s : unsel) left.insert(left.end(), M[s].begin(), M[s].end());
    const int64_t t = gamma_n - r;
    Graph leftover(static_cast<int>(n), left);
    if (t == 0) {
      if (leftover.num_edges() != 0) {
        last_clause = "leftover";
        last_msg = "every matching was extended but edges remain";
        continue;
      }
    } else {
      if (3 * static_cast<int64_t>(leftover.max_degree()) > 2 * t ||
          leftover.num_edges() < 2 * t) {
        last_clause = "leftover";
        last_msg = "leftover has max degree " +
                   std::to_string(leftover.max_degree()) + " and " +
                   std::to_string(leftover.num_edges()) + " edges for " +
                   std::to_string(t) + " matchings";
        continue;
      }
      MatchingList L;
      try {
        L = even_matching_decomposition(leftover, static_cast<int>(t));
      } catch (const InfeasibleError& e) {
        last_clause = "leftover";
        last_msg = e.what();
        continue;
      }
      bool small = true;
      for (const auto& m : L) {
        if (static_cast<int64_t>(m.size()) > cross_bound) small = false;
      }
      if (!small) {
        last_clause = "leftover_size";
        last_msg = "a leftover matching exceeds " + std::to_string(cross_bound) +
                   " edges";
        continue;
      }
      for (auto& m : L) {
        draw.F.push_back(std::move(m));
        draw.stage.push_back("noncritical.leftover");
      }
    }

    // Advisory concentration of the random subset.
    const Rational tol = p.eps0() * Rational(gamma_n);
    Rational slack_r = tol - Rational(std::abs(3 * r - 2 * gamma_n), 3);
    rep.add_advisory("subset_size", Rational(0) <= slack_r,
                     "r = " + std::to_string(r))
        .slack = slack_r.to_double();
    std::vector<int> hit(n, 0);
    for (int s : sel) {
      for (const auto& e : M[s]) {
        ++hit[e.u];
        ++hit[e.v];
      }
    }
    Rational worst = tol;
    for (Vertex v = 0; v < n; ++v) {
      Rational sl = tol - Rational(std::abs(3 * hit[v] - 2 * hp1.degree(v)), 3);
      worst = std::min(worst, sl);
    }
    rep.add_advisory("subset_degrees", Rational(0) <= worst).slack =
        worst.to_double();

    res.r = r;
    for (size_t s = 0; s < draw.F.size(); ++s) {
      res.F.push_back(make_candidate(p, draw.F[s], locale, draw.stage[s]));
    }
    return res;
  }
  throw InfeasibleError("noncritical.matching_with_paths", last_clause,
                        std::to_string(kSubsetAttempts) +
                            " random subsets failed; last: " + last_msg);
}

AllocationMatrix allocate_matrix(const std::vector<int64_t>& a,
                                 const std::vector<int>& c, const Rational& eta,
                                 int r) {
  const int q = static_cast<int>(a.size());
  if (q < 1 || q > 3) throw InputError("allocation needs 1 to 3 rows");
  if (r < 1 || static_cast<int>(c.size()) != r) {
    throw InputError("allocation needs r >= 1 column bases");
  }
  if (eta < Rational(0) || eta >= Rational(1)) {
    throw InputError("eta must lie in [0, 1)");
  }
  if (!(eta * Rational(r)).is_integer()) {
    throw InputError("eta r must be an integer");
  }
  for (int j = 0; j < r; ++j) {
    if (c[j] < 0 || c[j] > 2) throw InputError("column bases must be 0, 1, 2");
    if (j > 0 && c[j] > c[j - 1]) {
      throw InputError("column bases must be non-increasing");
    }
  }
  if (c[0] - c[r - 1] > 1) throw InputError("column bases spread more than 1");
  int64_t total = 0;
  for (int64_t x : a) total += x;
  for (int x : c) total += x;
  if (Rational(total) != Rational(2) * (Rational(1) + eta) * Rational(r)) {
    throw InputError("row and column sums do not total 2(1 + eta) r");
  }
  for (int i = 0; i < q; ++i) {
    bool ok = 60 * a[i] >= 31 * static_cast<int64_t>(r) &&
              (i < 2 ? a[i] <= r : 30 * a[i] <= 31 * static_cast<int64_t>(r));
    if (!ok) {
      throw InputError("row sum " + std::to_string(a[i]) + " of row " +
                       std::to_string(i + 1) + " is out of range");
    }
  }

  AllocationMatrix m;
  m.q = q;
  m.r = r;
  m.a.assign(q, std::vector<int>(r, 0));
  std::vector<int> col(c.begin(), c.end());
  for (int i = 0; i < q; ++i) {
    int64_t sum = 0;
    for (int x : col) sum += x;
    std::vector<int>& row = m.a[i];
    if (sum >= 2 * static_cast<int64_t>(r)) {
      int64_t left = a[i];
      for (int j = 0; j < r; ++j) {
        row[j] = static_cast<int>(
            std::min<int64_t>({2, 4 - col[j], left}));
        left -= row[j];
      }
    } else if (sum >= 2 * static_cast<int64_t>(r) - a[i]) {
      int rp = 0;
      while (rp < r && col[rp] == 2) ++rp;
      for (int j = rp; j < r; ++j) row[j] = 1;
      int64_t left = a[i] - (r - rp);
      for (int j = 0; j < rp && left > 0; ++j) {
        row[j] = static_cast<int>(std::min<int64_t>(2, left));
        left -= row[j];
      }
      if (left != 0) throw ContractError("allocation case 2 overflow");
    } else {
      int lo = r;
      int mn = *std::min_element(col.begin(), col.end());
      for (int j = 0; j < r; ++j) {
        if (col[j] == mn) {
          lo = j;
          break;
        }
      }
      for (int64_t k = 0; k < a[i]; ++k) row[(lo + k) % r] += 1;
    }
    for (int j = 0; j < r; ++j) col[j] += row[j];
  }
  Report check = check_allocation(m, a, c, eta);
  if (!check.ok()) throw ContractError("allocation: " + check.summary());
  return m;
}

Report check_allocation(const AllocationMatrix& m, const std::vector<int64_t>& a,
                        const std::vector<int>& c, const Rational& eta) {
  Report rep("allocation");
  const int r = m.r;
  const int64_t eta_r = (eta * Rational(r)).floor();
  bool entries = m.q == static_cast<int>(a.size()) &&
                 static_cast<int>(m.a.size()) == m.q &&
                 static_cast<int>(c.size()) == r;
  for (const auto& row : m.a) {
    if (static_cast<int>(row.size()) != r) entries = false;
    for (int x : row) {
      if (x < 0 || x > 2) entries = false;
    }
  }
  rep.add("entries", entries);
  if (!entries) return rep;
  bool rows = true;
  for (int i = 0; i < m.q; ++i) {
    int64_t s = 0;
    for (int x : m.a[i]) s += x;
    if (s != a[i]) rows = false;
  }
  rep.add("a", rows, "row sums");
  bool cols = true, ones = true;
  for (int j = 0; j < r; ++j) {
    int tot = c[j];
    int k = 0;
    for (int i = 0; i < m.q; ++i) {
      tot += m.a[i][j];
      k += m.a[i][j] == 1 ? 1 : 0;
    }
    if (tot != (j < eta_r ? 4 : 2)) cols = false;
    if (k < 2 - c[j]) ones = false;
  }
  rep.add("b", cols, "column totals");
  rep.add("c", ones, "ones per column");
  return rep;
}

CriticalResult decompose_critical(const Graph& h, const Partition& p,
                                  const std::vector<Vertex>& Wprime,
                                  const std::vector<Vertex>& W0,
                                  int64_t alpha_n, const Rational& eta,
                                  std::optional<Locale> locale) {
  require_crossing(h, p);
  const int64_t an = alpha_n;
  const int64_t n = p.n();
  CriticalResult res;
  res.report = Report("critical decomposition");
  Report& rep = res.report;
  auto pre = [&](const std::string& clause, bool ok, const std::string& detail,
                 std::vector<int> witness = {}) {
    auto& c = rep.add(clause, ok, detail);
    c.witness_vertices = witness;
    if (!ok) {
      throw PreconditionError("decompose_critical", clause,
                              clause + ": " + detail, witness);
    }
  };
  auto in_wp = [&](Vertex v) {
    return std::find(Wprime.begin(), Wprime.end(), v) != Wprime.end();
  };

  pre("alpha_divisible", an > 0 && an % 200 == 0,
      "alpha n = " + std::to_string(an) + " must be a positive multiple of 200");
  const Rational eta_an = eta * Rational(an);
  pre("eta", Rational(0) <= eta && eta < Rational(199, 200) &&
                 eta_an.is_integer(),
      "eta = " + eta.str());
  pre("c1", Rational(h.num_edges()) == Rational(2 * an) + Rational(2) * eta_an,
      "e(h) = " + std::to_string(h.num_edges()));
  std::set<Vertex> wset(Wprime.begin(), Wprime.end());
  pre("c2_size", !Wprime.empty() && Wprime.size() <= 3 &&
                     wset.size() == Wprime.size(),
      "|W'| = " + std::to_string(Wprime.size()));
  int64_t e_rest = 0;
  for (const auto& e : h.edges()) {
    if (!in_wp(e.u) && !in_wp(e.v)) ++e_rest;
  }
  pre("c2_rest", 100 * e_rest <= 199 * an,
      "e(h - W') = " + std::to_string(e_rest));
  for (Vertex w : Wprime) {
    pre("c2_degree", 25 * static_cast<int64_t>(h.degree(w)) >= 13 * an,
        "d(" + std::to_string(w) + ") = " + std::to_string(h.degree(w)), {w});
  }
  bool w0_ok = W0.size() == std::min<size_t>(2, Wprime.size());
  for (Vertex w : W0) w0_ok = w0_ok && in_wp(w);
  pre("c3_set", w0_ok, "W0 must be min(2, |W'|) vertices of W'");
  std::vector<Vertex> ws(W0.begin(), W0.end());
  for (Vertex w : Wprime) {
    if (std::find(W0.begin(), W0.end(), w) == W0.end()) ws.push_back(w);
  }
  for (size_t k = 0; k < ws.size(); ++k) {
    int64_t d = h.degree(ws[k]);
    bool ok = k < W0.size() ? d <= an : 40 * d <= 41 * an;
    pre("c3_degree", ok, "d(" + std::to_string(ws[k]) + ") = " + std::to_string(d),
        {ws[k]});
  }
  int64_t max_out = 0;
  Vertex arg_out = -1;
  for (Vertex v = 0; v < n; ++v) {
    if (!in_wp(v) && h.degree(v) > max_out) {
      max_out = h.degree(v);
      arg_out = v;
    }
  }
  for (Vertex w : Wprime) {
    pre("c4", 150 * (h.degree(w) - max_out) >= an,
        "gap between " + std::to_string(w) + " and " + std::to_string(arg_out),
        {w});
  }
  for (Vertex v : set_union(p.A_all(), p.B_all())) {
    pre("c5", Rational(h.degree(v)) <= p.eps0() * Rational(n),
        "cluster vertex " + std::to_string(v) + " has degree " +
            std::to_string(h.degree(v)),
        {v});
  }

  EdgePool pool(h);
  std::vector<std::vector<Edge>> seeds, extras;
  std::vector<Edge> wwedges;
  for (const auto& e : h.edges()) {
    if (in_wp(e.u) && in_wp(e.v)) wwedges.push_back(e);
  }
  for (const auto& f : wwedges) {
    std::vector<Edge> m{f};
    pool.remove(f);
    if (ws.size() == 2) {
      std::optional<Edge> g;
      for (const auto& e : pool.edges()) {
        if (!in_wp(e.u) && !in_wp(e.v)) {
          g = e;
          break;
        }
      }
      if (!g) {
        throw InfeasibleError("critical.seed", "seed",
                              "h - W' has no edge to pair with the W'-edge");
      }
      m.push_back(*g);
    } else {
      Vertex third = -1;
      for (Vertex w : ws) {
        if (!f.touches(w)) third = w;
      }
      auto x = heaviest_neighbor(pool, third, in_wp);
      if (!x) {
        throw InfeasibleError("critical.seed", "seed",
                              "no edge leaves W' at " + std::to_string(third),
                              {third});
      }
      m.push_back(make_edge(third, *x));
    }
    pool.remove(m.back());
    seeds.push_back(std::move(m));
  }
  const int64_t n_extra = an / 200 - static_cast<int64_t>(wwedges.size());
  if (n_extra < 0) {
    throw InfeasibleError("critical.w0_pair", "count",
                          "h[W'] has more edges than alpha n / 200");
  }
  for (int64_t s = 0; s < n_extra; ++s) {
    std::vector<Edge> m;
    auto x = heaviest_neighbor(pool, ws[0], in_wp);
    if (!x) {
      throw InfeasibleError("critical.w0_pair", "w0_edge",
                            "no edge left at " + std::to_string(ws[0]), {ws[0]});
    }
    m.push_back(make_edge(ws[0], *x));
    if (W0.size() == 2) {
      auto y = heaviest_neighbor(
          pool, ws[1], [&](Vertex u) { return in_wp(u) || u == *x; });
      if (!y) {
        throw InfeasibleError("critical.w0_pair", "w0_edge",
                              "no disjoint edge left at " + std::to_string(ws[1]),
                              {ws[1]});
      }
      m.push_back(make_edge(ws[1], *y));
    } else {
      std::optional<Edge> best;
      int best_sum = -1;
      for (const auto& e : pool.edges()) {
        if (in_wp(e.u) || in_wp(e.v) || e.touches(*x)) continue;
        int sum = pool.degree(e.u) + pool.degree(e.v);
        if (sum > best_sum) {
          best = e;
          best_sum = sum;
        }
      }
      if (!best) {
        throw InfeasibleError("critical.w0_pair", "rest_edge",
                              "h - W' has no edge disjoint from " +
                                  std::to_string(*x));
      }
      m.push_back(*best);
    }
    for (const auto& e : m) pool.remove(e);
    extras.push_back(std::move(m));
  }

  // Matchings of H'_1 = H_1 - W'.
  const int r = static_cast<int>(199 * an / 200);
  std::vector<Edge> rest;
  for (const auto& e : pool.edges()) {
    if (!in_wp(e.u) && !in_wp(e.v)) rest.push_back(e);
  }
  MatchingList M = balanced_matching_decomposition(
      Graph(static_cast<int>(n), rest), r);
  for (const auto& e : rest) pool.remove(e);
  std::stable_sort(M.begin(), M.end(), [](const Matching& x, const Matching& y) {
    return x.size() > y.size();
  });
  std::vector<int> c(r);
  for (int j = 0; j < r; ++j) {
    if (M[j].size() > 2) {
      throw InfeasibleError("critical.allocated", "matching_sizes",
                            "a matching of h - W' has more than two edges");
    }
    c[j] = static_cast<int>(M[j].size());
  }
  std::vector<int64_t> a;
  for (Vertex w : ws) a.push_back(pool.degree(w));
  const Rational eta_p = eta_an / Rational(r);
  try {
    res.allocation = allocate_matrix(a, c, eta_p, r);
  } catch (const InputError& e) {
    throw InfeasibleError("critical.allocated", "allocation", e.what());
  }

  std::vector<std::vector<Edge>> F(M.begin(), M.end());
  std::vector<char> in_v0(n, 0);
  for (Vertex v : p.V0()) in_v0[v] = 1;
  for (size_t i = 0; i < ws.size(); ++i) {
    const Vertex w = ws[i];
    std::vector<int> ap = res.allocation.a[i];
    std::vector<Vertex> N(pool.neighbors(w).begin(), pool.neighbors(w).end());
    for (int j = 0; j < r; ++j) {
      if (ap[j] != 2) continue;
      auto it = std::find_if(N.begin(), N.end(),
                             [&](Vertex v) { return in_v0[v] != 0; });
      if (it == N.end()) continue;
      F[j].push_back(make_edge(w, *it));
      pool.remove(make_edge(w, *it));
      N.erase(it);
      ap[j] = 1;
    }
    std::vector<int> copy_of;
    for (int j = 0; j < r; ++j) {
      for (int k = 0; k < ap[j]; ++k) copy_of.push_back(j);
    }
    if (copy_of.size() != N.size()) {
      throw ContractError("allocation does not match the degree of a W' vertex");
    }
    BipartiteMatcher Q(static_cast<int>(N.size()),
                       static_cast<int>(copy_of.size()));
    for (size_t x = 0; x < N.size(); ++x) {
      for (size_t y = 0; y < copy_of.size(); ++y) {
        bool free = true;
        for (const auto& e : F[copy_of[y]]) {
          if (e.touches(N[x])) free = false;
        }
        if (free) Q.add_edge(static_cast<int>(x), static_cast<int>(y));
      }
    }
    if (Q.solve() < static_cast<int>(N.size())) {
      std::vector<int> bad;
      for (int x : Q.hall_violator()) bad.push_back(N[x]);
      throw InfeasibleError("decompose_critical", "hall_condition",
                            "no perfect assignment of the edges at " +
                                std::to_string(w),
                            bad);
    }
    for (size_t x = 0; x < N.size(); ++x) {
      int j = copy_of[Q.match_of_left(static_cast<int>(x))];
      F[j].push_back(make_edge(w, N[x]));
      pool.remove(make_edge(w, N[x]));
    }
  }
  if (!pool.empty()) {
    throw ContractError("critical decomposition left edges unassigned");
  }

  for (auto& f : F) {
    std::sort(f.begin(), f.end());
    res.F.push_back(make_candidate(p, f, locale, "critical.allocated"));
  }
  for (auto& m : extras) {
    res.F.push_back(make_candidate(p, m, locale, "critical.w0_pair"));
  }
  for (auto it = seeds.rbegin(); it != seeds.rend(); ++it) {
    res.F.push_back(make_candidate(p, *it, locale, "critical.seed"));
  }
  res.specials = static_cast<int64_t>(extras.size() + seeds.size());

  int64_t four = 0, special = 0;
  for (const auto& f : res.F) {
    const Graph& g = f.ps.graph;
    if (g.num_edges() == 4) ++four;
    bool sp = g.num_edges() == 2;
    for (Vertex w : W0) sp = sp && g.degree(w) == 1;
    if (sp) ++special;
  }
  rep.add("count", static_cast<int64_t>(res.F.size()) == an,
          std::to_string(res.F.size()) + " candidates");
  rep.add("four_edge", Rational(four) == eta_an,
          std::to_string(four) + " candidates with 4 edges");
  rep.add("special", 200 * special >= an,
          std::to_string(special) + " W0-covering 2-matchings");
  return res;
}

}  // namespace exdecomp
