#include "exdecomp/graph.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>

#include "exdecomp/errors.hpp"

namespace exdecomp {

VertexSet make_vertex_set(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const VertexSet& s, Vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), adj_(n) {
  if (n < 0) throw InputError("negative vertex count");
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw InputError("edge endpoint out of range: " + std::to_string(e.u) +
                       "-" + std::to_string(e.v));
    }
    if (e.u == e.v) throw InputError("self-loop at " + std::to_string(e.u));
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  for (size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1]) {
      throw InputError("duplicate edge " + std::to_string(edges[i].u) + "-" +
                       std::to_string(edges[i].v));
    }
  }
  edges_ = std::move(edges);
  std::vector<int> deg(n, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (int v = 0; v < n; ++v) adj_[v].reserve(deg[v]);
  for (const auto& e : edges_) {
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

const std::vector<Vertex>& Graph::neighbors(Vertex v) const {
  if (v < 0 || v >= n_) {
    throw InputError("vertex out of range: " + std::to_string(v));
  }
  return adj_[v];
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
  return d;
}

int Graph::min_degree() const {
  if (n_ == 0) return 0;
  int d = n_;
  for (const auto& a : adj_) d = std::min(d, static_cast<int>(a.size()));
  return d;
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) return false;
  const auto& s = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
  Vertex x = adj_[a].size() <= adj_[b].size() ? b : a;
  return std::binary_search(s.begin(), s.end(), x);
}

VertexSet Graph::non_isolated() const {
  VertexSet out;
  for (int v = 0; v < n_; ++v) {
    if (!adj_[v].empty()) out.push_back(v);
  }
  return out;
}

int degree_into(const Graph& g, Vertex v, const VertexSet& s) {
  const auto& nb = g.neighbors(v);
  int count = 0;
  if (nb.size() < s.size()) {
    for (Vertex u : nb) count += contains(s, u);
  } else {
    for (Vertex u : s) count += std::binary_search(nb.begin(), nb.end(), u);
  }
  return count;
}

int64_t edges_between(const Graph& g, const VertexSet& s, const VertexSet& t) {
  std::vector<char> in_s(g.n(), 0), in_t(g.n(), 0);
  for (Vertex v : s) {
    if (v < 0 || v >= g.n()) throw InputError("vertex out of range");
    in_s[v] = 1;
  }
  for (Vertex v : t) {
    if (v < 0 || v >= g.n()) throw InputError("vertex out of range");
    in_t[v] = 1;
  }
  int64_t count = 0;
  for (const auto& e : g.edges()) {
    if ((in_s[e.u] && in_t[e.v]) || (in_s[e.v] && in_t[e.u])) ++count;
  }
  return count;
}

int64_t edges_within(const Graph& g, const VertexSet& s) {
  int64_t twice = 0;
  for (Vertex v : s) twice += degree_into(g, v, s);
  return twice / 2;
}

Graph from_edges(int n, std::vector<Edge> edges) {
  return Graph(n, std::move(edges));
}

Graph graph_sum(const Graph& g, const Graph& h) {
  if (g.n() != h.n()) throw ContractError("graph_sum on different vertex sets");
  std::vector<Edge> out;
  out.reserve(g.edges().size() + h.edges().size());
  std::merge(g.edges().begin(), g.edges().end(), h.edges().begin(),
             h.edges().end(), std::back_inserter(out));
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i] == out[i - 1]) {
      throw ContractError("graph_sum of graphs sharing edge " +
                          std::to_string(out[i].u) + "-" +
                          std::to_string(out[i].v));
    }
  }
  return Graph(g.n(), std::move(out));
}

Graph graph_minus(const Graph& g, const Graph& h) {
  std::vector<Edge> out;
  out.reserve(g.edges().size());
  std::set_difference(g.edges().begin(), g.edges().end(), h.edges().begin(),
                      h.edges().end(), std::back_inserter(out));
  return Graph(g.n(), std::move(out));
}

Graph bipartite_part(const Graph& g, const VertexSet& s, const VertexSet& t) {
  std::vector<char> in_s(g.n(), 0), in_t(g.n(), 0);
  for (Vertex v : s) in_s[v] = 1;
  for (Vertex v : t) in_t[v] = 1;
  std::vector<Edge> out;
  for (const auto& e : g.edges()) {
    if ((in_s[e.u] && in_t[e.v]) || (in_s[e.v] && in_t[e.u])) out.push_back(e);
  }
  return Graph(g.n(), std::move(out));
}

Graph induced_part(const Graph& g, const VertexSet& s) {
  std::vector<char> in(g.n(), 0);
  for (Vertex v : s) in[v] = 1;
  std::vector<Edge> out;
  for (const auto& e : g.edges()) {
    if (in[e.u] && in[e.v]) out.push_back(e);
  }
  return Graph(g.n(), std::move(out));
}

Graph remove_vertices(const Graph& g, const VertexSet& s) {
  std::vector<char> gone(g.n(), 0);
  for (Vertex v : s) gone[v] = 1;
  std::vector<Edge> out;
  for (const auto& e : g.edges()) {
    if (!gone[e.u] && !gone[e.v]) out.push_back(e);
  }
  return Graph(g.n(), std::move(out));
}

PathCheck is_path_system(const Graph& g) {
  PathCheck res;
  for (int v = 0; v < g.n(); ++v) {
    if (g.degree(v) > 2) {
      res.ok = false;
      res.witness = {v};
      res.reason = "degree " + std::to_string(g.degree(v)) + " at vertex " +
                   std::to_string(v);
      return res;
    }
  }
  // Max degree <= 2: a component is a cycle iff no vertex in it has degree
  // below 2.
  std::vector<char> seen(g.n(), 0);
  for (int s = 0; s < g.n(); ++s) {
    if (seen[s] || g.degree(s) == 0) continue;
    std::vector<Vertex> comp;
    std::vector<Vertex> stack{s};
    seen[s] = 1;
    bool has_end = false;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      if (g.degree(x) < 2) has_end = true;
      for (Vertex y : g.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    if (!has_end) {
      std::vector<Vertex> cycle{s};
      Vertex prev = -1, cur = s;
      while (true) {
        const auto& nb = g.neighbors(cur);
        Vertex next = nb[0] != prev ? nb[0] : nb[1];
        if (next == s) break;
        cycle.push_back(next);
        prev = cur;
        cur = next;
      }
      res.ok = false;
      res.witness = std::move(cycle);
      res.reason = "cycle through vertex " + std::to_string(s);
      return res;
    }
  }
  return res;
}

PathSystem::PathSystem(Graph g, VertexSet iso)
    : graph(std::move(g)), isolated(make_vertex_set(std::move(iso))) {
  for (Vertex v : isolated) {
    if (v < 0 || v >= graph.n()) throw InputError("isolated vertex out of range");
  }
}

VertexSet PathSystem::support() const {
  return set_union(graph.non_isolated(), isolated);
}

bool PathSystem::in_support(Vertex v) const {
  return graph.degree(v) > 0 || contains(isolated, v);
}

Partition::Partition(int n, int K, int m, Rational eps0, VertexSet a0,
                     VertexSet b0, std::vector<VertexSet> a,
                     std::vector<VertexSet> b)
    : n_(n),
      K_(K),
      m_(m),
      eps0_(eps0),
      a0_(make_vertex_set(std::move(a0))),
      b0_(make_vertex_set(std::move(b0))),
      a_(std::move(a)),
      b_(std::move(b)) {
  if (K < 1) throw InputError("partition needs K >= 1");
  if (static_cast<int>(a_.size()) != K || static_cast<int>(b_.size()) != K) {
    throw InputError("partition must list exactly K clusters per side");
  }
  for (auto& c : a_) c = make_vertex_set(std::move(c));
  for (auto& c : b_) c = make_vertex_set(std::move(c));
  label_.assign(n, Block{Side::kA, -1});
  auto place = [&](const VertexSet& s, Side side, int cluster) {
    for (Vertex v : s) {
      if (v < 0 || v >= n) {
        throw InputError("partition vertex out of range: " + std::to_string(v));
      }
      if (label_[v].cluster != -1) {
        throw InputError("partition sets overlap at vertex " +
                         std::to_string(v));
      }
      label_[v] = Block{side, cluster};
    }
  };
  place(a0_, Side::kA, 0);
  place(b0_, Side::kB, 0);
  for (int i = 0; i < K; ++i) {
    place(a_[i], Side::kA, i + 1);
    place(b_[i], Side::kB, i + 1);
  }
  for (int v = 0; v < n; ++v) {
    if (label_[v].cluster == -1) {
      throw InputError("partition misses vertex " + std::to_string(v));
    }
  }
  v0_ = set_union(a0_, b0_);
  for (const auto& c : a_) a_all_ = set_union(a_all_, c);
  for (const auto& c : b_) b_all_ = set_union(b_all_, c);
  a_prime_ = set_union(a0_, a_all_);
  b_prime_ = set_union(b0_, b_all_);
}

bool Partition::in_cell(Vertex v, int i, int j) const {
  const Block& b = label_.at(v);
  if (b.cluster == 0) return true;
  return b.side == Side::kA ? b.cluster == i : b.cluster == j;
}

bool Partition::edge_in_cell(const Edge& e, int i, int j) const {
  return in_cell(e.u, i, j) && in_cell(e.v, i, j);
}

std::vector<std::string> Partition::problems() const {
  std::vector<std::string> out;
  for (int i = 1; i <= K_; ++i) {
    if (static_cast<int>(A(i).size()) != m_) {
      out.push_back("|A_" + std::to_string(i) + "| = " +
                    std::to_string(A(i).size()) + " != m");
    }
    if (static_cast<int>(B(i).size()) != m_) {
      out.push_back("|B_" + std::to_string(i) + "| = " +
                    std::to_string(B(i).size()) + " != m");
    }
  }
  if (!(Rational(0) < eps0_ && eps0_ < Rational(1))) {
    out.push_back("eps0 outside (0,1)");
  }
  if (Rational(static_cast<int64_t>(v0_.size())) > eps0_ * Rational(n_)) {
    out.push_back("|A0 u B0| = " + std::to_string(v0_.size()) +
                  " exceeds eps0*n");
  }
  return out;
}

int64_t count_ab_paths(const PathSystem& ps, const VertexSet& a_side,
                       const VertexSet& b_side) {
  const Graph& g = ps.graph;
  std::vector<int8_t> side(g.n(), -1);
  for (Vertex v : a_side) side.at(v) = 0;
  for (Vertex v : b_side) side.at(v) = 1;
  int64_t count = 0;
  std::vector<char> seen(g.n(), 0);
  for (int s = 0; s < g.n(); ++s) {
    if (g.degree(s) != 1 || seen[s]) continue;
    Vertex prev = -1, cur = s;
    seen[s] = 1;
    while (true) {
      Vertex next = -1;
      for (Vertex y : g.neighbors(cur)) {
        if (y != prev) {
          next = y;
          break;
        }
      }
      if (next == -1) break;
      prev = cur;
      cur = next;
      if (g.degree(cur) == 1) break;
    }
    seen[cur] = 1;
    if (side[s] < 0 || side[cur] < 0) {
      throw InputError("path endpoint outside both sides");
    }
    if (side[s] != side[cur]) ++count;
  }
  return count;
}

int64_t count_ab_paths(const PathSystem& ps, const Partition& p) {
  return count_ab_paths(ps, p.A_prime(), p.B_prime());
}

int64_t count_ab_paths(const Graph& g, const Partition& p) {
  return count_ab_paths(PathSystem(g), p);
}

int64_t crossing_edges(const Graph& g, const Partition& p) {
  int64_t count = 0;
  for (const auto& e : g.edges()) count += p.crossing(e);
  return count;
}

int crossing_degree(const Graph& g, const Partition& p, Vertex v) {
  int d = 0;
  for (Vertex u : g.neighbors(v)) d += p.side(u) != p.side(v);
  return d;
}

Graph crossing_part(const Graph& g, const Partition& p) {
  std::vector<Edge> out;
  for (const auto& e : g.edges()) {
    if (p.crossing(e)) out.push_back(e);
  }
  return Graph(g.n(), std::move(out));
}

std::string graph_hash(const Graph& g) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&](uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<uint64_t>(g.n()));
  for (const auto& e : g.edges()) {
    mix(static_cast<uint64_t>(e.u));
    mix(static_cast<uint64_t>(e.v));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace exdecomp
