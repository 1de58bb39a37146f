#include "exdecomp/matchings.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>

#include "exdecomp/errors.hpp"

namespace exdecomp {
namespace {

// Edge colouring state: color[e] per edge, at[v][c] = edge of colour c at v.
class ColoringState {
 public:
  ColoringState(const Graph& g, int colors)
      : g_(g),
        edges_(g.edges()),
        colors_(colors),
        color_(edges_.size(), -1),
        at_(g.n(), std::vector<int>(colors, -1)),
        nbr_edge_(g.n()) {
    for (int v = 0; v < g.n(); ++v) nbr_edge_[v].resize(g.degree(v), -1);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      const Edge& ed = edges_[e];
      nbr_edge_[ed.u][slot(ed.u, ed.v)] = e;
      nbr_edge_[ed.v][slot(ed.v, ed.u)] = e;
    }
  }

  int colors() const { return colors_; }
  int color(int e) const { return color_[e]; }
  const std::vector<int>& color_vector() const { return color_; }
  bool free(int v, int c) const { return at_[v][c] == -1; }
  int first_free(int v) const {
    for (int c = 0; c < colors_; ++c) {
      if (at_[v][c] == -1) return c;
    }
    return -1;
  }
  void set(int e, int c) {
    color_[e] = c;
    at_[edges_[e].u][c] = e;
    at_[edges_[e].v][c] = e;
  }
  void unset(int e) {
    int c = color_[e];
    if (c < 0) return;
    at_[edges_[e].u][c] = -1;
    at_[edges_[e].v][c] = -1;
    color_[e] = -1;
  }
  int edge_at(int v, int c) const { return at_[v][c]; }
  int edge_index(int v, int w) const { return nbr_edge_[v][slot(v, w)]; }

  // Swaps colours a and b along the maximal a/b chain leaving x by colour a.
  void flip_chain(int x, int a, int b) {
    std::vector<int> path;
    int c = a;
    while (at_[x][c] != -1) {
      int e = at_[x][c];
      path.push_back(e);
      x = edges_[e].other(x);
      c = c == a ? b : a;
    }
    for (int e : path) unset_keep(e);
    for (int e : path) {
      int c0 = color_[e];
      set(e, c0 == a ? b : a);
    }
  }

 private:
  int slot(int v, int w) const {
    const auto& nb = g_.neighbors(v);
    return static_cast<int>(std::lower_bound(nb.begin(), nb.end(), w) -
                            nb.begin());
  }
  // Clears the at[] entries but remembers the colour in color_.
  void unset_keep(int e) {
    int c = color_[e];
    at_[edges_[e].u][c] = -1;
    at_[edges_[e].v][c] = -1;
  }

  const Graph& g_;
  const std::vector<Edge>& edges_;
  int colors_;
  std::vector<int> color_;
  std::vector<std::vector<int>> at_;
  std::vector<std::vector<int>> nbr_edge_;
};

// Alternating-path colouring of a bipartite graph with max(maxdeg, 1) colours.
std::vector<int> color_bipartite(const Graph& g, int colors) {
  ColoringState st(g, colors);
  const auto& edges = g.edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    int u = edges[e].u, v = edges[e].v;
    int a = st.first_free(u);
    int b = st.first_free(v);
    if (!st.free(v, a)) {
      // a is used at v and b is free at v; the a/b chain from v cannot reach
      // u in a bipartite graph, so flipping it frees a at v.
      st.flip_chain(v, a, b);
    }
    st.set(e, a);
  }
  return st.color_vector();
}

// Misra-Gries constructive Vizing colouring with maxdeg + 1 colours.
std::vector<int> color_vizing(const Graph& g, int colors) {
  ColoringState st(g, colors);
  const auto& edges = g.edges();
  for (int e0 = 0; e0 < static_cast<int>(edges.size()); ++e0) {
    int u = edges[e0].u, v = edges[e0].v;
    std::vector<int> fan{v};
    std::vector<int> fan_edges{e0};
    std::vector<char> in_fan(g.n(), 0);
    in_fan[v] = 1;
    while (true) {
      int last = fan.back();
      bool grown = false;
      for (int w : g.neighbors(u)) {
        if (in_fan[w]) continue;
        int ew = st.edge_index(u, w);
        int cw = st.color(ew);
        if (cw >= 0 && st.free(last, cw)) {
          fan.push_back(w);
          fan_edges.push_back(ew);
          in_fan[w] = 1;
          grown = true;
          break;
        }
      }
      if (!grown) break;
    }
    int c = st.first_free(u);
    int d = st.first_free(fan.back());
    if (c != d) st.flip_chain(u, d, c);
    int idx = -1;
    for (int i = 0; i < static_cast<int>(fan.size()); ++i) {
      if (i >= 1) {
        int ci = st.color(fan_edges[i]);
        if (ci < 0 || !st.free(fan[i - 1], ci)) break;
      }
      if (st.free(fan[i], d)) {
        idx = i;
        break;
      }
    }
    if (idx < 0) throw std::logic_error("vizing fan rotation failed");
    for (int i = 0; i < idx; ++i) {
      int cn = st.color(fan_edges[i + 1]);
      st.unset(fan_edges[i + 1]);
      st.set(fan_edges[i], cn);
    }
    st.set(fan_edges[idx], d);
  }
  return st.color_vector();
}

// Exhaustive search for a proper m-edge-colouring with a node budget.
bool color_exact(const Graph& g, int m, std::vector<int>* out) {
  if (m > 63) return false;
  const auto& edges = g.edges();
  int ne = static_cast<int>(edges.size());
  std::vector<uint64_t> used(g.n(), 0);
  std::vector<int> col(ne, -1);
  int64_t budget = 4'000'000;
  auto rec = [&](auto&& self, int i, int max_used) -> bool {
    if (i == ne) return true;
    if (--budget < 0) return false;
    const Edge& e = edges[i];
    int limit = std::min(m - 1, max_used + 1);
    for (int c = 0; c <= limit; ++c) {
      uint64_t bit = uint64_t{1} << c;
      if ((used[e.u] | used[e.v]) & bit) continue;
      used[e.u] |= bit;
      used[e.v] |= bit;
      col[i] = c;
      if (self(self, i + 1, std::max(max_used, c))) return true;
      used[e.u] &= ~bit;
      used[e.v] &= ~bit;
    }
    return false;
  };
  if (!rec(rec, 0, -1)) return false;
  *out = std::move(col);
  return true;
}

// Kempe-chain balancing: moves one edge from a largest to a smallest class
// until all class sizes are within one of each other.
void balance_classes(const Graph& g, int m, std::vector<int>& color) {
  const auto& edges = g.edges();
  int ne = static_cast<int>(edges.size());
  std::vector<int> size(m, 0);
  for (int c : color) ++size[c];
  std::vector<std::vector<int>> inc(g.n());
  for (int e = 0; e < ne; ++e) {
    inc[edges[e].u].push_back(e);
    inc[edges[e].v].push_back(e);
  }
  while (true) {
    int a = 0, b = 0;
    for (int c = 1; c < m; ++c) {
      if (size[c] > size[a]) a = c;
      if (size[c] < size[b]) b = c;
    }
    if (size[a] - size[b] <= 1) break;
    // Components of the a/b subgraph are paths or even cycles; find the
    // first (by lowest edge) with more a-edges than b-edges and swap it.
    std::vector<char> seen(ne, 0);
    bool swapped = false;
    for (int e = 0; e < ne && !swapped; ++e) {
      if (seen[e] || (color[e] != a && color[e] != b)) continue;
      std::vector<int> comp;
      std::vector<int> stack{e};
      seen[e] = 1;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        comp.push_back(x);
        for (int end : {edges[x].u, edges[x].v}) {
          for (int y : inc[end]) {
            if (!seen[y] && (color[y] == a || color[y] == b)) {
              seen[y] = 1;
              stack.push_back(y);
            }
          }
        }
      }
      int ca = 0;
      for (int x : comp) ca += color[x] == a ? 1 : -1;
      if (ca > 0) {
        for (int x : comp) color[x] = color[x] == a ? b : a;
        size[a] -= ca;
        size[b] += ca;
        swapped = true;
      }
    }
    if (!swapped) throw std::logic_error("kempe balancing found no chain");
  }
}

MatchingList classes_to_list(const Graph& g, int m,
                             const std::vector<int>& color) {
  MatchingList out(m);
  const auto& edges = g.edges();
  for (size_t e = 0; e < edges.size(); ++e) out[color[e]].push_back(edges[e]);
  return out;
}

void require_bipartite_sides(const Graph& g, const VertexSet& a_side,
                             const VertexSet& b_side) {
  for (const auto& e : g.edges()) {
    bool ok = (contains(a_side, e.u) && contains(b_side, e.v)) ||
              (contains(a_side, e.v) && contains(b_side, e.u));
    if (!ok) {
      throw InputError("edge " + std::to_string(e.u) + "-" +
                       std::to_string(e.v) + " does not join the two sides");
    }
  }
}

// Dinic max flow with unit/integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : g_(n), level_(n), it_(n) {}
  int add(int a, int b, int cap) {
    g_[a].push_back({b, cap, static_cast<int>(g_[b].size())});
    g_[b].push_back({a, 0, static_cast<int>(g_[a].size()) - 1});
    return static_cast<int>(g_[a].size()) - 1;
  }
  int64_t run(int s, int t) {
    int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (int64_t f = dfs(s, t, std::numeric_limits<int>::max())) flow += f;
    }
    return flow;
  }
  int residual(int a, int idx) const { return g_[a][idx].cap; }

 private:
  struct Arc {
    int to, cap, rev;
  };
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (const auto& a : g_[x]) {
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[x] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }
  int dfs(int x, int t, int f) {
    if (x == t) return f;
    for (int& i = it_[x]; i < static_cast<int>(g_[x].size()); ++i) {
      Arc& a = g_[x][i];
      if (a.cap > 0 && level_[a.to] == level_[x] + 1) {
        int d = dfs(a.to, t, std::min(f, a.cap));
        if (d > 0) {
          a.cap -= d;
          g_[a.to][a.rev].cap += d;
          return d;
        }
      }
    }
    return 0;
  }
  std::vector<std::vector<Arc>> g_;
  std::vector<int> level_, it_;
};

}  // namespace

std::optional<std::vector<int8_t>> bipartition(const Graph& g) {
  std::vector<int8_t> side(g.n(), -1);
  for (int s = 0; s < g.n(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : g.neighbors(x)) {
        if (side[y] < 0) {
          side[y] = static_cast<int8_t>(1 - side[x]);
          stack.push_back(y);
        } else if (side[y] == side[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

MatchingList balanced_matching_decomposition(const Graph& g, int m) {
  if (m < 0) throw InputError("negative matching count");
  int delta = g.max_degree();
  if (g.num_edges() == 0) return MatchingList(m);
  std::vector<int> color;
  bool bip = bipartition(g).has_value();
  if (bip) {
    if (delta > m) {
      InfeasibleError err("balanced_matching_decomposition", "chromatic_index",
                          "bipartite graph needs " + std::to_string(delta) +
                              " colours but only " + std::to_string(m) +
                              " allowed");
      err.achieved_colors = delta;
      throw err;
    }
    color = color_bipartite(g, delta);
  } else if (delta + 1 <= m) {
    color = color_vizing(g, delta + 1);
  } else if (delta == m && color_exact(g, m, &color)) {
    // exact colouring found
  } else {
    InfeasibleError err("balanced_matching_decomposition", "chromatic_index",
                        "no proper edge colouring with " + std::to_string(m) +
                            " colours found");
    err.achieved_colors = delta + 1;
    throw err;
  }
  balance_classes(g, m, color);
  return classes_to_list(g, m, color);
}

MatchingList even_matching_decomposition(const Graph& h, int t) {
  const std::string stage = "even_matching_decomposition";
  if (t < 0) throw InputError("negative matching count");
  if (!bipartition(h)) {
    throw InfeasibleError(stage, "bipartite", "input graph is not bipartite");
  }
  int64_t e = h.num_edges();
  if (e % 2 != 0) {
    throw InfeasibleError(stage, "even_size",
                          "e(h) = " + std::to_string(e) + " is odd");
  }
  if (e < 2 * static_cast<int64_t>(t)) {
    throw InfeasibleError(stage, "size_lower_bound",
                          "e(h) = " + std::to_string(e) + " < 2t = " +
                              std::to_string(2 * t));
  }
  if (3 * h.max_degree() > 2 * t) {
    throw InfeasibleError(stage, "max_degree",
                          "maxdeg(h) = " + std::to_string(h.max_degree()) +
                              " exceeds 2t/3 with t = " + std::to_string(t));
  }
  if (t == 0) return {};
  int n1 = (2 * t) / 3;
  MatchingList base = balanced_matching_decomposition(h, n1);
  MatchingList out;
  std::vector<int> odd;
  for (int s = 0; s < n1; ++s) {
    if (base[s].size() % 2 == 1) {
      odd.push_back(s);
    } else {
      out.push_back(base[s]);
    }
  }
  for (size_t k = 0; k + 1 < odd.size(); k += 2) {
    Matching& ms = base[odd[k]];
    Matching& mt = base[odd[k + 1]];
    Edge e1 = ms.front();
    auto it = std::find_if(mt.begin(), mt.end(), [&](const Edge& f) {
      return !f.touches(e1.u) && !f.touches(e1.v);
    });
    if (it == mt.end()) {
      throw std::logic_error("odd matchings admit no disjoint exchange pair");
    }
    Edge e2 = *it;
    ms.erase(ms.begin());
    mt.erase(it);
    out.push_back(ms);
    out.push_back(mt);
    out.push_back(Matching{std::min(e1, e2), std::max(e1, e2)});
  }
  while (static_cast<int>(out.size()) < t) {
    size_t big = 0;
    for (size_t s = 1; s < out.size(); ++s) {
      if (out[s].size() > out[big].size()) big = s;
    }
    Matching& mb = out[big];
    size_t keep = mb.size() - 2 * (mb.size() / 4);
    Matching tail(mb.begin() + keep, mb.end());
    mb.resize(keep);
    out.push_back(std::move(tail));
  }
  for (auto& mm : out) std::sort(mm.begin(), mm.end());
  return out;
}

BipartiteMatcher::BipartiteMatcher(int left, int right)
    : left_(left),
      right_(right),
      adj_(left),
      match_l_(left, -1),
      match_r_(right, -1),
      dist_(left),
      it_(left) {}

void BipartiteMatcher::add_edge(int l, int r) { adj_[l].push_back(r); }

bool BipartiteMatcher::bfs() {
  std::queue<int> q;
  bool found = false;
  for (int l = 0; l < left_; ++l) {
    if (match_l_[l] == -1) {
      dist_[l] = 0;
      q.push(l);
    } else {
      dist_[l] = -1;
    }
  }
  while (!q.empty()) {
    int l = q.front();
    q.pop();
    for (int r : adj_[l]) {
      int l2 = match_r_[r];
      if (l2 == -1) {
        found = true;
      } else if (dist_[l2] == -1) {
        dist_[l2] = dist_[l] + 1;
        q.push(l2);
      }
    }
  }
  return found;
}

bool BipartiteMatcher::dfs(int l) {
  for (int& i = it_[l]; i < static_cast<int>(adj_[l].size()); ++i) {
    int r = adj_[l][i];
    int l2 = match_r_[r];
    if (l2 == -1 || (dist_[l2] == dist_[l] + 1 && dfs(l2))) {
      match_l_[l] = r;
      match_r_[r] = l;
      return true;
    }
  }
  dist_[l] = -1;
  return false;
}

int BipartiteMatcher::solve() {
  int size = 0;
  for (int l = 0; l < left_; ++l) size += match_l_[l] != -1;
  while (bfs()) {
    std::fill(it_.begin(), it_.end(), 0);
    for (int l = 0; l < left_; ++l) {
      if (match_l_[l] == -1 && dfs(l)) ++size;
    }
  }
  return size;
}

std::vector<int> BipartiteMatcher::hall_violator() const {
  int root = -1;
  for (int l = 0; l < left_; ++l) {
    if (match_l_[l] == -1) {
      root = l;
      break;
    }
  }
  if (root < 0) return {};
  std::vector<char> seen_l(left_, 0), seen_r(right_, 0);
  std::vector<int> stack{root};
  seen_l[root] = 1;
  while (!stack.empty()) {
    int l = stack.back();
    stack.pop_back();
    for (int r : adj_[l]) {
      if (seen_r[r]) continue;
      seen_r[r] = 1;
      int l2 = match_r_[r];
      if (l2 != -1 && !seen_l[l2]) {
        seen_l[l2] = 1;
        stack.push_back(l2);
      }
    }
  }
  std::vector<int> out;
  for (int l = 0; l < left_; ++l) {
    if (seen_l[l]) out.push_back(l);
  }
  return out;
}

namespace {

struct SidedMatch {
  Matching matching;
  std::vector<int> violator;
};

SidedMatch match_sides(const Graph& g, const VertexSet& a_side,
                       const VertexSet& b_side) {
  require_bipartite_sides(g, a_side, b_side);
  std::vector<int> idx(g.n(), -1);
  for (size_t i = 0; i < a_side.size(); ++i) idx[a_side[i]] = static_cast<int>(i);
  for (size_t i = 0; i < b_side.size(); ++i) idx[b_side[i]] = static_cast<int>(i);
  BipartiteMatcher bm(static_cast<int>(a_side.size()),
                      static_cast<int>(b_side.size()));
  for (Vertex a : a_side) {
    for (Vertex b : g.neighbors(a)) bm.add_edge(idx[a], idx[b]);
  }
  bm.solve();
  SidedMatch out;
  for (size_t i = 0; i < a_side.size(); ++i) {
    int r = bm.match_of_left(static_cast<int>(i));
    if (r >= 0) out.matching.push_back(make_edge(a_side[i], b_side[r]));
  }
  std::sort(out.matching.begin(), out.matching.end());
  for (int l : bm.hall_violator()) out.violator.push_back(a_side[l]);
  return out;
}

}  // namespace

Matching max_bipartite_matching(const Graph& g, const VertexSet& a_side,
                                const VertexSet& b_side) {
  return match_sides(g, a_side, b_side).matching;
}

Matching perfect_bipartite_matching(const Graph& g, const VertexSet& a_side,
                                    const VertexSet& b_side) {
  SidedMatch res = match_sides(g, a_side, b_side);
  if (!res.violator.empty()) {
    throw InfeasibleError("perfect_bipartite_matching", "hall_condition",
                          "a set of " + std::to_string(res.violator.size()) +
                              " vertices has fewer neighbours",
                          res.violator);
  }
  return res.matching;
}

std::optional<Graph> max_capped_subgraph_with(const Graph& g, int cap,
                                              const Graph& forced, bool even) {
  if (cap < 0) throw InputError("negative degree cap");
  auto side = bipartition(g);
  if (!side) throw InputError("capped subgraph needs a bipartite graph");
  for (const auto& e : forced.edges()) {
    if (!g.has_edge(e)) throw ContractError("forced edge not in graph");
  }
  int n = g.n();
  for (int v = 0; v < n; ++v) {
    if (forced.degree(v) > cap) return std::nullopt;
  }
  int s = n, t = n + 1;
  MaxFlow mf(n + 2);
  for (int v = 0; v < n; ++v) {
    int room = cap - forced.degree(v);
    if ((*side)[v] == 0) {
      mf.add(s, v, room);
    } else {
      mf.add(v, t, room);
    }
  }
  std::vector<std::pair<Edge, int>> arcs;
  for (const auto& e : g.edges()) {
    if (forced.has_edge(e)) continue;
    int a = (*side)[e.u] == 0 ? e.u : e.v;
    int b = e.other(a);
    arcs.push_back({e, mf.add(a, b, 1)});
  }
  mf.run(s, t);
  std::vector<Edge> chosen(forced.edges().begin(), forced.edges().end());
  std::vector<Edge> free_chosen;
  for (const auto& [e, idx] : arcs) {
    int a = (*side)[e.u] == 0 ? e.u : e.v;
    if (mf.residual(a, idx) == 0) free_chosen.push_back(e);
  }
  if (even && (chosen.size() + free_chosen.size()) % 2 == 1) {
    if (free_chosen.empty()) return std::nullopt;
    // Dropping any non-forced edge keeps the degree bound; drop the last.
    std::sort(free_chosen.begin(), free_chosen.end());
    free_chosen.pop_back();
  }
  chosen.insert(chosen.end(), free_chosen.begin(), free_chosen.end());
  return Graph(n, std::move(chosen));
}

Graph max_subgraph_degree_capped(const Graph& g, int cap) {
  return *max_capped_subgraph_with(g, cap, Graph(g.n()), false);
}

}  // namespace exdecomp
