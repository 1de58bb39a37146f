#include "exdecomp/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <optional>
#include <string>
#include <tuple>

#include "exdecomp/errors.hpp"
#include "exdecomp/matchings.hpp"

namespace exdecomp {
namespace {

std::string cell_name(int K, int c) {
  return "(" + std::to_string(c / K + 1) + "," + std::to_string(c % K + 1) + ")";
}

std::string edge_name(const Edge& e) {
  return std::to_string(e.u) + "-" + std::to_string(e.v);
}

// Crossing cells under repair: edge lists plus per-cell vertex degrees.
class MutableCells {
 public:
  MutableCells(const CellGrid& grid, int n)
      : K_(grid.K), edges_(grid.cells.size()), deg_(grid.cells.size()) {
    for (size_t c = 0; c < grid.cells.size(); ++c) {
      edges_[c] = grid.cells[c].edges();
      deg_[c].assign(n, 0);
      for (const auto& e : edges_[c]) {
        ++deg_[c][e.u];
        ++deg_[c][e.v];
      }
    }
    moved_in_.assign(edges_.size(), 0);
    moved_out_.assign(edges_.size(), 0);
  }

  int cells() const { return static_cast<int>(edges_.size()); }
  int64_t size(int c) const { return static_cast<int64_t>(edges_[c].size()); }
  int degree(int c, Vertex v) const { return deg_[c][v]; }
  const std::vector<Edge>& edges(int c) const { return edges_[c]; }

  void move(int from, int to, const Edge& e) {
    auto& src = edges_[from];
    auto it = std::find(src.begin(), src.end(), e);
    if (it == src.end()) throw ContractError("moved edge not in source cell");
    src.erase(it);
    --deg_[from][e.u];
    --deg_[from][e.v];
    edges_[to].push_back(e);
    ++deg_[to][e.u];
    ++deg_[to][e.v];
    ++moved_out_[from];
    ++moved_in_[to];
  }

  CellGrid grid(int n) const {
    CellGrid g;
    g.K = K_;
    for (const auto& es : edges_) g.cells.emplace_back(n, es);
    return g;
  }
  const std::vector<int64_t>& moved_in() const { return moved_in_; }
  const std::vector<int64_t>& moved_out() const { return moved_out_; }

 private:
  int K_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<int>> deg_;
  std::vector<int64_t> moved_in_, moved_out_;
};

// Picks the edge of cell `from` accepted by `ok` that is cheapest to move
// into cell `to`: edges avoiding V0 first, then smallest endpoint degree sum
// in `to`, then lexicographically smallest.
template <typename Pred>
std::optional<Edge> pick_edge(const MutableCells& mc, const Partition& p,
                              int from, int to, Pred ok) {
  std::optional<Edge> best;
  std::tuple<int, int, Edge> best_key{0, 0, Edge{}};
  for (const auto& e : mc.edges(from)) {
    if (!ok(e)) continue;
    int v0 = (p.exceptional(e.u) || p.exceptional(e.v)) ? 1 : 0;
    std::tuple<int, int, Edge> key{v0, mc.degree(to, e.u) + mc.degree(to, e.v),
                                   e};
    if (!best || key < best_key) {
      best = e;
      best_key = key;
    }
  }
  return best;
}

// Moves units from cells with surplus (have > want) to cells with deficit,
// deficit cells in index order, each served by the first surplus cell.
template <typename Have, typename Pick>
void rebalance(MutableCells& mc, const std::vector<int64_t>& want, Have have,
               Pick pick) {
  int cells = mc.cells();
  int src = 0;
  for (int dst = 0; dst < cells; ++dst) {
    while (have(dst) < want[dst]) {
      while (src < cells && have(src) <= want[src]) ++src;
      if (src >= cells) throw ContractError("rebalance ran out of surplus");
      std::optional<Edge> e = pick(src, dst);
      if (!e) {
        throw InfeasibleError("slicing", "movable_edge",
                              "no movable edge in cell " +
                                  cell_name(static_cast<int>(std::sqrt(cells)),
                                            src));
      }
      mc.move(src, dst, *e);
    }
  }
}

// Clauses shared by both repairs: exact partition of E(g), locality of H and
// containment of Hpp in the crossing part.
void common_clauses(const SliceDecomposition& s, const Graph& g,
                    const Partition& p, int64_t nonlocal_budget,
                    const std::string& budget_text, Report& rep) {
  const int K = s.H.K;
  std::vector<Edge> all = all_edges(s);
  bool disjoint = std::adjacent_find(all.begin(), all.end()) == all.end();
  bool cover = disjoint && all == g.edges();
  rep.add("partition", cover,
          cover ? "" : (disjoint ? "union differs from the input edges"
                                 : "an edge lies in two pieces"));

  std::optional<Edge> bad_h;
  int bad_cell = -1;
  for (int i = 1; i <= K && !bad_h; ++i) {
    for (int j = 1; j <= K && !bad_h; ++j) {
      for (const auto& e : s.H.at(i, j).edges()) {
        Vertex x = p.exceptional(e.u) ? e.u : e.v;
        Vertex y = e.other(x);
        bool ok = p.exceptional(x) && !p.exceptional(y) &&
                  p.side(x) == p.side(y) &&
                  p.cluster(y) == (p.in_A_prime(y) ? i : j);
        if (!ok) {
          bad_h = e;
          bad_cell = CellGrid::index(K, i, j);
          break;
        }
      }
    }
  }
  auto& c1 = rep.add("b1", !bad_h.has_value(),
                     bad_h ? "edge " + edge_name(*bad_h) + " of H" +
                                 cell_name(K, bad_cell) +
                                 " is not an exceptional-to-own-cluster edge"
                           : "");
  if (bad_h) c1.witness_edges = {*bad_h};

  std::optional<Edge> noncross;
  int64_t worst_nonlocal = 0;
  int worst_cell = 0;
  for (int i = 1; i <= K; ++i) {
    for (int j = 1; j <= K; ++j) {
      int64_t nonlocal = 0;
      for (const auto& e : s.Hpp.at(i, j).edges()) {
        if (!p.crossing(e)) noncross = e;
        if (!p.edge_in_cell(e, i, j)) ++nonlocal;
      }
      if (nonlocal > worst_nonlocal) {
        worst_nonlocal = nonlocal;
        worst_cell = CellGrid::index(K, i, j);
      }
    }
  }
  bool b2 = !noncross && worst_nonlocal <= nonlocal_budget;
  auto& c2 = rep.add(
      "b2", b2,
      noncross ? "edge " + edge_name(*noncross) + " is not crossing"
               : "at most " + std::to_string(worst_nonlocal) +
                     " non-local edges in a cell (cell " +
                     cell_name(K, worst_cell) + "), budget " + budget_text);
  c2.slack = static_cast<double>(nonlocal_budget - worst_nonlocal);
  if (noncross) c2.witness_edges = {*noncross};
}

// d_{H(i,j) + Hpp(i,j)}(v) for every cell, v in V0.
std::vector<std::vector<int>> cell_v0_degrees(const SliceDecomposition& s,
                                              const Partition& p) {
  std::vector<std::vector<int>> out;
  for (size_t c = 0; c < s.H.cells.size(); ++c) {
    std::vector<int> row;
    for (Vertex v : p.V0()) {
      row.push_back(s.H.cells[c].degree(v) + s.Hpp.cells[c].degree(v));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Report parity_report(const SliceDecomposition& s, const Graph& g,
                     const Partition& p, const Params& params) {
  Report rep("parity move");
  const int K = s.H.K;
  const int64_t n = p.n();
  const int64_t K2 = static_cast<int64_t>(K) * K;
  const int64_t an = alpha_n(params);
  const int64_t gamma_n = an - 2 * (params.lambda_n / K2);
  const Rational eps_prime_n = params.eps_prime * Rational(n);
  common_clauses(s, g, p, eps_prime_n.floor(), eps_prime_n.str(), rep);

  const Rational upper = Rational(11) * p.eps0() * Rational(n * n) /
                         Rational(10 * K2);
  int bad3 = -1;
  int64_t worst3 = 0;
  bool first = true;
  for (int c = 0; c < K * K; ++c) {
    int64_t e = s.Hpp.cells[c].num_edges();
    bool ok = e % 2 == 0 && e >= 2 * an && Rational(e) <= upper;
    int64_t slack = std::min(e - 2 * an, (upper - Rational(e)).floor());
    if (first || slack < worst3) {
      worst3 = slack;
      first = false;
    }
    if (!ok && bad3 < 0) bad3 = c;
  }
  auto& c3 = rep.add("b3", bad3 < 0,
                     bad3 < 0 ? ""
                              : "cell " + cell_name(K, bad3) + " has " +
                                    std::to_string(s.Hpp.cells[bad3].num_edges()) +
                                    " crossing edges");
  c3.slack = static_cast<double>(worst3);

  int max_deg = 0;
  int bad4 = -1;
  for (int c = 0; c < K * K; ++c) {
    int d = s.Hpp.cells[c].max_degree();
    if (d > max_deg) {
      max_deg = d;
      if (30 * static_cast<int64_t>(d) > 31 * an) bad4 = c;
    }
  }
  auto& c4 = rep.add("b4", bad4 < 0,
                     "max degree " + std::to_string(max_deg) + ", bound 31*" +
                         std::to_string(an) + "/30");
  c4.slack = 31.0 * an / 30.0 - max_deg;

  auto deg = cell_v0_degrees(s, p);
  Rational worst5 = eps_prime_n;
  Vertex bad5 = -1;
  for (size_t c = 0; c < deg.size(); ++c) {
    for (size_t k = 0; k < p.V0().size(); ++k) {
      Rational slack = eps_prime_n - Rational(std::abs(deg[c][k] - 2 * an));
      if (slack < worst5) {
        worst5 = slack;
        if (slack < Rational(0)) bad5 = p.V0()[k];
      }
    }
  }
  auto& c5 = rep.add("b5", bad5 < 0,
                     bad5 < 0 ? ""
                              : "exceptional vertex " + std::to_string(bad5) +
                                    " has cell degree outside 2*alpha*n +- "
                                    "eps'*n");
  c5.slack = worst5.to_double();
  if (bad5 >= 0) c5.witness_vertices = {bad5};

  const int cap = static_cast<int>((Rational(3 * gamma_n) / Rational(5)).floor());
  int bad6 = -1;
  int64_t worst6 = 0;
  first = true;
  for (int c = 0; c < K * K; ++c) {
    const Graph& h = s.Hpp.cells[c];
    Graph forced = bipartite_part(h, p.A0(), p.B0());
    auto best = cap >= 0 ? max_capped_subgraph_with(h, cap, forced, true)
                         : std::nullopt;
    int64_t val = best ? best->num_edges() : -1;
    if (first || val - 2 * an < worst6) {
      worst6 = val - 2 * an;
      first = false;
    }
    if (val < 2 * an && bad6 < 0) bad6 = c;
  }
  auto& c6 = rep.add("b6", bad6 < 0,
                     bad6 < 0 ? ""
                              : "capped even subgraph of cell " +
                                    cell_name(K, bad6) +
                                    " has fewer than 2*alpha*n edges");
  c6.slack = static_cast<double>(worst6);
  return rep;
}

Report critical_report(const SliceDecomposition& s, const Graph& g,
                       const Partition& p, const std::vector<Vertex>& W0,
                       const Rational& eps) {
  Report rep("critical move");
  const int K = s.H.K;
  const int64_t n = p.n();
  const int64_t K2 = static_cast<int64_t>(K) * K;
  const Rational budget = Rational(20) * eps * Rational(n) / Rational(K2);
  common_clauses(s, g, p, budget.floor(), budget.str(), rep);

  Graph cross = crossing_part(g, p);
  const int64_t e = cross.num_edges();
  const int64_t lo = 2 * (e / (2 * K2));
  const int64_t hi = 2 * ((e + 2 * K2 - 1) / (2 * K2));
  int bad3 = -1;
  for (int c = 0; c < K * K; ++c) {
    int64_t x = s.Hpp.cells[c].num_edges();
    if (x != lo && x != hi && bad3 < 0) bad3 = c;
  }
  rep.add("b3", bad3 < 0,
          bad3 < 0 ? ""
                   : "cell " + cell_name(K, bad3) + " has " +
                         std::to_string(s.Hpp.cells[bad3].num_edges()) +
                         " crossing edges, want " + std::to_string(lo) +
                         " or " + std::to_string(hi));

  const Rational tol = Rational(25) * eps * Rational(n);
  Rational worst4 = tol, worst5 = tol;
  Vertex bad4 = -1, bad5 = -1;
  auto deg = cell_v0_degrees(s, p);
  for (int c = 0; c < K * K; ++c) {
    for (size_t k = 0; k < p.V0().size(); ++k) {
      Vertex v = p.V0()[k];
      Rational s4 = tol - Rational(std::abs(K2 * s.Hpp.cells[c].degree(v) -
                                            cross.degree(v)));
      Rational s5 = tol - Rational(std::abs(K2 * deg[c][k] - g.degree(v)));
      if (s4 < worst4) {
        worst4 = s4;
        if (s4 < Rational(0)) bad4 = v;
      }
      if (s5 < worst5) {
        worst5 = s5;
        if (s5 < Rational(0)) bad5 = v;
      }
    }
  }
  auto& c4 = rep.add("b4", bad4 < 0,
                     bad4 < 0 ? "" : "vertex " + std::to_string(bad4));
  c4.slack = worst4.to_double();
  auto& c5 = rep.add("b5", bad5 < 0,
                     bad5 < 0 ? "" : "vertex " + std::to_string(bad5));
  c5.slack = worst5.to_double();

  Vertex bad6 = -1, bad7 = -1;
  for (Vertex w : W0) {
    int64_t d = cross.degree(w);
    for (int c = 0; c < K * K; ++c) {
      int64_t x = s.Hpp.cells[c].degree(w);
      if (x != d / K2 && x != (d + K2 - 1) / K2) bad6 = w;
      if (2 * x > s.Hpp.cells[c].num_edges()) bad7 = w;
    }
  }
  auto& c6 = rep.add("b6", bad6 < 0,
                     bad6 < 0 ? "" : "vertex " + std::to_string(bad6) +
                                         " has an unbalanced cell degree");
  if (bad6 >= 0) c6.witness_vertices = {bad6};
  auto& c7 = rep.add("b7", bad7 < 0,
                     bad7 < 0 ? "" : "vertex " + std::to_string(bad7) +
                                         " has more than half a cell's edges");
  if (bad7 >= 0) c7.witness_vertices = {bad7};
  return rep;
}

// Cells ordered by decreasing value, ties by lowest index.
std::vector<int> order_by_value(const std::vector<int64_t>& val, int cells) {
  std::vector<int> idx(cells);
  for (int c = 0; c < cells; ++c) idx[c] = c;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    int64_t va = val.empty() ? 0 : val[a];
    int64_t vb = val.empty() ? 0 : val[b];
    return va > vb;
  });
  return idx;
}

}  // namespace

RawSlices random_slice(const Graph& g, const Partition& p, uint64_t seed) {
  const int K = p.K();
  const int n = g.n();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, K);
  std::vector<std::vector<Edge>> h(K * K), hp(K * K);
  for (const auto& e : g.edges()) {
    const Block& bu = p.block(e.u);
    const Block& bv = p.block(e.v);
    if (bu.side == bv.side) {
      if (bu.cluster == 0 && bv.cluster == 0) {
        throw InputError("edge " + edge_name(e) +
                         " lies inside an exceptional set");
      }
      if (bu.cluster != 0 && bv.cluster != 0) {
        throw InputError("edge " + edge_name(e) + " lies inside A or B");
      }
      int c = bu.cluster != 0 ? bu.cluster : bv.cluster;
      int other = pick(rng);
      int i = bu.side == Side::kA ? c : other;
      int j = bu.side == Side::kA ? other : c;
      h[CellGrid::index(K, i, j)].push_back(e);
      continue;
    }
    const Block& ba = bu.side == Side::kA ? bu : bv;
    const Block& bb = bu.side == Side::kA ? bv : bu;
    int i = ba.cluster != 0 ? ba.cluster : pick(rng);
    int j = bb.cluster != 0 ? bb.cluster : pick(rng);
    hp[CellGrid::index(K, i, j)].push_back(e);
  }
  RawSlices out;
  out.H.K = out.Hp.K = K;
  for (int c = 0; c < K * K; ++c) {
    out.H.cells.emplace_back(n, std::move(h[c]));
    out.Hp.cells.emplace_back(n, std::move(hp[c]));
  }
  return out;
}

Report slice_report(const RawSlices& s, const Graph& g, const Partition& p,
                    const Rational& eps) {
  Report rep("random slice");
  const int K = p.K();
  const int64_t n = p.n();
  const int64_t K2 = static_cast<int64_t>(K) * K;
  SliceDecomposition tmp;
  tmp.H = s.H;
  tmp.Hpp = s.Hp;
  Report loc;
  common_clauses(tmp, g, p, n, std::to_string(n), loc);
  for (const auto& c : loc.clauses()) {
    ClauseResult r = c;
    if (r.clause == "b1") r.clause = "a1";
    if (r.clause == "b2") {
      r.clause = "a2";
      // Every crossing edge must sit in its own cell.
      bool ok = true;
      for (int i = 1; i <= K && ok; ++i) {
        for (int j = 1; j <= K && ok; ++j) {
          for (const auto& e : s.Hp.at(i, j).edges()) {
            if (!p.crossing(e) || !p.edge_in_cell(e, i, j)) {
              ok = false;
              r.witness_edges = {e};
              break;
            }
          }
        }
      }
      r.passed = ok;
      r.detail = ok ? "" : "crossing edge outside its cell";
      r.slack.reset();
    }
    ClauseResult& dst = rep.add(r.clause, r.passed, r.detail);
    dst.witness_edges = r.witness_edges;
  }

  Graph cross = crossing_part(g, p);
  const int64_t e = cross.num_edges();
  const Rational tol3 = Rational(4) * eps * Rational(std::max(n, e));
  Rational worst3 = tol3;
  for (const auto& c : s.Hp.cells) {
    Rational slack = tol3 - Rational(std::abs(K2 * c.num_edges() - e));
    if (slack < worst3) worst3 = slack;
  }
  rep.add("a3", Rational(0) <= worst3).slack = worst3.to_double();

  const Rational tol4 = Rational(2) * eps * Rational(n);
  const Rational tol5 = Rational(4) * eps * Rational(n);
  Rational worst4 = tol4, worst5 = tol5;
  for (int c = 0; c < K * K; ++c) {
    for (Vertex v : p.V0()) {
      int64_t dh = s.Hp.cells[c].degree(v);
      int64_t dg = dh + s.H.cells[c].degree(v);
      Rational s4 = tol4 - Rational(std::abs(K2 * dh - cross.degree(v)));
      Rational s5 = tol5 - Rational(std::abs(K2 * dg - g.degree(v)));
      worst4 = std::min(worst4, s4);
      worst5 = std::min(worst5, s5);
    }
  }
  rep.add("a4", Rational(0) <= worst4).slack = worst4.to_double();
  rep.add("a5", Rational(0) <= worst5).slack = worst5.to_double();
  return rep;
}

SliceDecomposition move_for_parity(const RawSlices& raw, const Graph& g,
                                   const Partition& p, const Params& params) {
  const int K = raw.Hp.K;
  const int cells = K * K;
  const int64_t an = alpha_n(params);
  if (an < 0) {
    throw PreconditionError("move_for_parity", "divisibility",
                            "(D - phi n) is not divisible by 2K^2");
  }
  MutableCells mc(raw.Hp, g.n());
  std::vector<int64_t> cur(cells), want(cells);
  int64_t total = 0;
  for (int c = 0; c < cells; ++c) {
    cur[c] = mc.size(c);
    total += cur[c];
  }
  if (total % 2 != 0) {
    throw PreconditionError("move_for_parity", "crossing_parity",
                            "the number of crossing edges is odd");
  }
  int64_t planned = 0;
  for (int c = 0; c < cells; ++c) {
    want[c] = std::max(cur[c] - cur[c] % 2, 2 * an);
    planned += want[c];
  }
  while (planned < total) {
    int best = 0;
    for (int c = 1; c < cells; ++c) {
      if (want[c] - cur[c] < want[best] - cur[best]) best = c;
    }
    want[best] += 2;
    planned += 2;
  }
  while (planned > total) {
    int best = -1;
    for (int c = 0; c < cells; ++c) {
      if (want[c] - 2 < 2 * an) continue;
      if (best < 0 || want[c] - cur[c] > want[best] - cur[best]) best = c;
    }
    if (best < 0) {
      throw InfeasibleError("move_for_parity", "b3",
                            "only " + std::to_string(total) +
                                " crossing edges for " + std::to_string(cells) +
                                " cells of at least " + std::to_string(2 * an));
    }
    want[best] -= 2;
    planned -= 2;
  }
  const int64_t budget = floor_sqrt_times(params.eps, p.n(), 1);
  for (int c = 0; c < cells; ++c) {
    if (std::abs(want[c] - cur[c]) > budget) {
      InfeasibleError err("move_for_parity", "move_budget",
                          "cell " + cell_name(K, c) + " needs " +
                              std::to_string(std::abs(want[c] - cur[c])) +
                              " moves, budget " + std::to_string(budget));
      err.cell_i = c / K + 1;
      err.cell_j = c % K + 1;
      throw err;
    }
  }
  rebalance(
      mc, want, [&](int c) { return mc.size(c); },
      [&](int from, int to) {
        return pick_edge(mc, p, from, to, [](const Edge&) { return true; });
      });

  SliceDecomposition out;
  out.H = raw.H;
  out.Hpp = mc.grid(g.n());
  out.moved_in = mc.moved_in();
  out.moved_out = mc.moved_out();
  out.report = parity_report(out, g, p, params);
  return out;
}

CriticalTargets plan_critical_targets(
    int64_t e, const std::vector<int64_t>& dw, int K,
    const std::vector<int64_t>& current_edges,
    const std::vector<std::vector<int64_t>>& current_w) {
  if (K < 1) throw InputError("K must be positive");
  if (e < 0 || e % 2 != 0) throw InputError("edge total must be even");
  const int64_t K2 = static_cast<int64_t>(K) * K;
  const int cells = static_cast<int>(K2);
  const int64_t b = e / (2 * K2);
  const int64_t q = (e - 2 * K2 * b) / 2;
  CriticalTargets t;
  t.K = K;
  t.edges.assign(cells, 2 * b);
  std::vector<int> big = order_by_value(current_edges, cells);
  std::vector<char> is_big(cells, 0);
  for (int64_t k = 0; k < q; ++k) {
    t.edges[big[k]] = 2 * b + 2;
    is_big[big[k]] = 1;
  }
  for (size_t k = 0; k < dw.size(); ++k) {
    const int64_t d = dw[k];
    if (d < K2 || 2 * d > e) {
      throw InputError("degree " + std::to_string(d) +
                       " outside [K^2, e/2]");
    }
    const int64_t a = d / K2;
    const int64_t pp = d % K2;
    std::vector<int64_t> cw =
        k < current_w.size() ? current_w[k] : std::vector<int64_t>{};
    std::vector<int> order = order_by_value(cw, cells);
    std::vector<int64_t> row(cells, a);
    int64_t placed = 0;
    for (int c : order) {
      if (placed == pp) break;
      if (a == b && !is_big[c]) continue;
      row[c] = a + 1;
      ++placed;
    }
    if (placed != pp) throw ContractError("critical targets: claim failed");
    t.w_degree.push_back(std::move(row));
  }
  return t;
}

Report check_critical_targets(const CriticalTargets& t, int64_t e,
                              const std::vector<int64_t>& dw) {
  Report rep("critical targets");
  const int64_t K2 = static_cast<int64_t>(t.K) * t.K;
  const int64_t lo = 2 * (e / (2 * K2));
  const int64_t hi = 2 * ((e + 2 * K2 - 1) / (2 * K2));
  int64_t sum = 0;
  bool vals = static_cast<int64_t>(t.edges.size()) == K2;
  for (int64_t x : t.edges) {
    sum += x;
    if (x != lo && x != hi) vals = false;
  }
  rep.add("edge_values", vals);
  rep.add("edge_sum", sum == e);
  bool fl = t.w_degree.size() == dw.size(), half = true, wsum = fl;
  for (size_t k = 0; k < t.w_degree.size() && k < dw.size(); ++k) {
    int64_t s = 0;
    for (size_t c = 0; c < t.w_degree[k].size(); ++c) {
      int64_t a = t.w_degree[k][c];
      s += a;
      if (a != dw[k] / K2 && a != (dw[k] + K2 - 1) / K2) fl = false;
      if (c >= t.edges.size() || 2 * a > t.edges[c]) half = false;
    }
    if (s != dw[k] || static_cast<int64_t>(t.w_degree[k].size()) != K2) {
      wsum = false;
    }
  }
  rep.add("degree_values", fl);
  rep.add("half_of_cell", half);
  rep.add("degree_sum", wsum);
  return rep;
}

SliceDecomposition move_critical(const RawSlices& raw, const Graph& g,
                                 const Partition& p,
                                 const std::vector<Vertex>& W0,
                                 const Rational& eps) {
  const int K = raw.Hp.K;
  const int cells = K * K;
  const int64_t K2 = static_cast<int64_t>(K) * K;
  if (W0.size() > 2) {
    throw PreconditionError("move_critical", "W0_size", "W0 has more than two vertices");
  }
  Graph cross = crossing_part(g, p);
  const int64_t e = cross.num_edges();
  if (e % 2 != 0 || e > 2 * static_cast<int64_t>(p.n())) {
    throw PreconditionError("move_critical", "crossing_total",
                            "crossing edge count must be even and at most 2n");
  }
  std::vector<int64_t> dw;
  for (Vertex w : W0) {
    int64_t d = cross.degree(w);
    if (d < K2 || 2 * d > e) {
      throw PreconditionError("move_critical", "W0_degree",
                              "vertex " + std::to_string(w) +
                                  " has crossing degree outside [K^2, e/2]",
                              {w});
    }
    dw.push_back(d);
  }
  MutableCells mc(raw.Hp, g.n());
  std::vector<int64_t> cur(cells);
  std::vector<std::vector<int64_t>> cur_w(W0.size(), std::vector<int64_t>(cells));
  for (int c = 0; c < cells; ++c) {
    cur[c] = mc.size(c);
    for (size_t k = 0; k < W0.size(); ++k) cur_w[k][c] = mc.degree(c, W0[k]);
  }
  CriticalTargets t = plan_critical_targets(e, dw, K, cur, cur_w);

  auto in_w0 = [&](Vertex x) {
    return std::find(W0.begin(), W0.end(), x) != W0.end();
  };
  for (size_t k = 0; k < W0.size(); ++k) {
    Vertex w = W0[k];
    rebalance(
        mc, t.w_degree[k], [&](int c) { return mc.degree(c, w); },
        [&](int from, int to) {
          return pick_edge(mc, p, from, to, [&](const Edge& ed) {
            return ed.touches(w) && !in_w0(ed.other(w));
          });
        });
  }
  rebalance(
      mc, t.edges, [&](int c) { return mc.size(c); },
      [&](int from, int to) {
        return pick_edge(mc, p, from, to, [&](const Edge& ed) {
          return !in_w0(ed.u) && !in_w0(ed.v);
        });
      });

  SliceDecomposition out;
  out.H = raw.H;
  out.Hpp = mc.grid(g.n());
  out.moved_in = mc.moved_in();
  out.moved_out = mc.moved_out();
  out.report = critical_report(out, g, p, W0, eps);
  return out;
}

std::vector<Edge> all_edges(const SliceDecomposition& s) {
  std::vector<Edge> all;
  for (const auto& c : s.H.cells) {
    all.insert(all.end(), c.edges().begin(), c.edges().end());
  }
  for (const auto& c : s.Hpp.cells) {
    all.insert(all.end(), c.edges().begin(), c.edges().end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace exdecomp
