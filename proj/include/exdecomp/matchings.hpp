#ifndef EXDECOMP_MATCHINGS_HPP_
#define EXDECOMP_MATCHINGS_HPP_

#include <optional>
#include <vector>

#include "exdecomp/graph.hpp"

namespace exdecomp {

using Matching = std::vector<Edge>;
using MatchingList = std::vector<Matching>;

// Two-colours g; returns std::nullopt if g has an odd cycle. Side 0 holds the
// lowest vertex of each component.
std::optional<std::vector<int8_t>> bipartition(const Graph& g);

// Proper edge colouring with exactly m classes whose sizes differ by at most
// one. Bipartite graphs need max degree <= m; other graphs get a Vizing
// colouring with max degree + 1 colours, or a bounded exact search when m
// equals the max degree. Throws InfeasibleError (achieved_colors set) when no
// m-colouring is found.
MatchingList balanced_matching_decomposition(const Graph& g, int m);

// Exactly t non-empty matchings of even size at most 3e(h)/t partitioning
// E(h). Requires h bipartite, e(h) even, e(h) >= 2t and 3*maxdeg(h) <= 2t.
MatchingList even_matching_decomposition(const Graph& h, int t);

// Hopcroft-Karp on an explicit bipartite graph with `left` and `right`
// vertex counts.
class BipartiteMatcher {
 public:
  BipartiteMatcher(int left, int right);
  void add_edge(int l, int r);
  int solve();
  int match_of_left(int l) const { return match_l_[l]; }
  int match_of_right(int r) const { return match_r_[r]; }
  // After solve(): a set S of left vertices with |N(S)| < |S|, or empty if
  // every left vertex is matched.
  std::vector<int> hall_violator() const;

 private:
  bool bfs();
  bool dfs(int l);

  int left_, right_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_l_, match_r_, dist_, it_;
};

// Maximum matching of the bipartite graph g with the given sides. Throws
// InputError if an edge does not join the two sides.
Matching max_bipartite_matching(const Graph& g, const VertexSet& a_side,
                                const VertexSet& b_side);

// Matching saturating a_side; throws InfeasibleError whose witness is a Hall
// violator inside a_side when there is none.
Matching perfect_bipartite_matching(const Graph& g, const VertexSet& a_side,
                                    const VertexSet& b_side);

// Maximum-size subgraph of the bipartite graph g with every degree <= cap,
// computed exactly by max flow.
Graph max_subgraph_degree_capped(const Graph& g, int cap);

// As above, but the subgraph must contain `forced` (a subgraph of g) and, if
// `even` is set, have an even number of edges. Returns std::nullopt when no
// such subgraph exists (forced degree above cap, or only odd options).
std::optional<Graph> max_capped_subgraph_with(const Graph& g, int cap,
                                              const Graph& forced, bool even);

}  // namespace exdecomp

#endif  // EXDECOMP_MATCHINGS_HPP_
