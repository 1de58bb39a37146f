#ifndef EXDECOMP_GRAPH_HPP_
#define EXDECOMP_GRAPH_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "exdecomp/rational.hpp"

namespace exdecomp {

using Vertex = int;

// Undirected edge stored with u < v; ordering is lexicographic, which is the
// tie-break order used throughout.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  auto operator<=>(const Edge&) const = default;
  bool touches(Vertex x) const { return u == x || v == x; }
  Vertex other(Vertex x) const { return x == u ? v : u; }
};

inline Edge make_edge(Vertex a, Vertex b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

VertexSet make_vertex_set(std::vector<Vertex> v);
bool contains(const VertexSet& s, Vertex v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);

// Simple undirected graph on vertices 0..n-1. Immutable once built; edges and
// every adjacency list are kept sorted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(n) {}
  // Throws InputError on out-of-range endpoints, loops or duplicates.
  Graph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int64_t num_edges() const { return static_cast<int64_t>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const;
  int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
  int max_degree() const;
  int min_degree() const;
  bool has_edge(Vertex a, Vertex b) const;
  bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }
  // Vertices of positive degree, ascending.
  VertexSet non_isolated() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
};

int degree_into(const Graph& g, Vertex v, const VertexSet& s);
int64_t edges_between(const Graph& g, const VertexSet& s, const VertexSet& t);
// Edges with both endpoints in s.
int64_t edges_within(const Graph& g, const VertexSet& s);
Graph graph_sum(const Graph& g, const Graph& h);
Graph graph_minus(const Graph& g, const Graph& h);
// Subgraph of g consisting of the edges with one end in s and the other in t.
Graph bipartite_part(const Graph& g, const VertexSet& s, const VertexSet& t);
Graph induced_part(const Graph& g, const VertexSet& s);
Graph remove_vertices(const Graph& g, const VertexSet& s);
Graph from_edges(int n, std::vector<Edge> edges);

struct PathCheck {
  bool ok = true;
  // Offending vertex (degree > 2) or the cycle in traversal order.
  std::vector<Vertex> witness;
  std::string reason;
};
PathCheck is_path_system(const Graph& g);

// A path system together with its explicitly listed isolated support vertices.
struct PathSystem {
  Graph graph;
  VertexSet isolated;

  PathSystem() = default;
  explicit PathSystem(Graph g, VertexSet iso = {});
  // Support: non-isolated vertices plus the explicit isolated ones.
  VertexSet support() const;
  bool in_support(Vertex v) const;
};

enum class Side : uint8_t { kA, kB };

// Block label of a vertex: its side and its cluster index (0 = exceptional).
struct Block {
  Side side = Side::kA;
  int cluster = 0;
};

// (K, m, eps0)-partition: exceptional sets A0, B0 and clusters A_1..A_K,
// B_1..B_K, with an inverse lookup. Clusters are 1-based in every public
// accessor; cluster 0 denotes the exceptional set of that side.
class Partition {
 public:
  Partition() = default;
  // Throws InputError if ids are out of range or the sets are not a
  // disjoint cover of 0..n-1. Size constraints are checked by problems().
  Partition(int n, int K, int m, Rational eps0, VertexSet a0, VertexSet b0,
            std::vector<VertexSet> a, std::vector<VertexSet> b);

  int n() const { return n_; }
  int K() const { return K_; }
  int m() const { return m_; }
  const Rational& eps0() const { return eps0_; }
  const VertexSet& A0() const { return a0_; }
  const VertexSet& B0() const { return b0_; }
  const VertexSet& A(int i) const { return a_.at(i - 1); }
  const VertexSet& B(int i) const { return b_.at(i - 1); }
  const std::vector<VertexSet>& A_clusters() const { return a_; }
  const std::vector<VertexSet>& B_clusters() const { return b_; }

  const VertexSet& V0() const { return v0_; }
  const VertexSet& A_all() const { return a_all_; }
  const VertexSet& B_all() const { return b_all_; }
  const VertexSet& A_prime() const { return a_prime_; }
  const VertexSet& B_prime() const { return b_prime_; }

  const Block& block(Vertex v) const { return label_.at(v); }
  Side side(Vertex v) const { return label_.at(v).side; }
  int cluster(Vertex v) const { return label_.at(v).cluster; }
  bool exceptional(Vertex v) const { return label_.at(v).cluster == 0; }
  bool in_A_prime(Vertex v) const { return side(v) == Side::kA; }
  bool in_B_prime(Vertex v) const { return side(v) == Side::kB; }
  bool in_A(Vertex v) const { return in_A_prime(v) && !exceptional(v); }
  bool in_B(Vertex v) const { return in_B_prime(v) && !exceptional(v); }
  bool crossing(const Edge& e) const { return side(e.u) != side(e.v); }
  // Whether v lies in V0 u A_i u B_j.
  bool in_cell(Vertex v, int i, int j) const;
  // Whether crossing edge e lies in G[A0 u A_i, B0 u B_j].
  bool edge_in_cell(const Edge& e, int i, int j) const;

  // Violations of the size invariants; empty when the partition is valid.
  std::vector<std::string> problems() const;

 private:
  int n_ = 0;
  int K_ = 0;
  int m_ = 0;
  Rational eps0_;
  VertexSet a0_, b0_;
  std::vector<VertexSet> a_, b_;
  VertexSet v0_, a_all_, b_all_, a_prime_, b_prime_;
  std::vector<Block> label_;
};

// Maximal paths with one endpoint in a_side and the other in b_side. Trivial
// paths count as zero. Throws InputError for a support vertex in neither set.
int64_t count_ab_paths(const PathSystem& ps, const VertexSet& a_side,
                       const VertexSet& b_side);
// Same, with the sides A' and B' of a partition.
int64_t count_ab_paths(const PathSystem& ps, const Partition& p);
int64_t count_ab_paths(const Graph& g, const Partition& p);

// e(A'), e(B') restricted to clusters, crossing edges and related counts.
int64_t crossing_edges(const Graph& g, const Partition& p);
int crossing_degree(const Graph& g, const Partition& p, Vertex v);
Graph crossing_part(const Graph& g, const Partition& p);

// 64-bit FNV-1a over n and the sorted edge list, as hex.
std::string graph_hash(const Graph& g);

}  // namespace exdecomp

#endif  // EXDECOMP_GRAPH_HPP_
