#ifndef EXDECOMP_SLICING_HPP_
#define EXDECOMP_SLICING_HPP_

#include <cstdint>
#include <vector>

#include "exdecomp/graph.hpp"
#include "exdecomp/params.hpp"
#include "exdecomp/report.hpp"

namespace exdecomp {

// K x K grid of graphs on the same vertex set, cell (i, j) stored at
// (i - 1) * K + (j - 1).
struct CellGrid {
  int K = 0;
  std::vector<Graph> cells;

  static int index(int K, int i, int j) { return (i - 1) * K + (j - 1); }
  const Graph& at(int i, int j) const { return cells.at(index(K, i, j)); }
};

// Output of the random slice: H holds the exceptional-to-cluster edges and
// Hp the crossing edges of each cell.
struct RawSlices {
  CellGrid H;
  CellGrid Hp;
};

// Decomposition into H(i,j) and the repaired crossing parts Hpp(i,j), with
// the per-cell number of moved edges and the clause report.
struct SliceDecomposition {
  CellGrid H;
  CellGrid Hpp;
  std::vector<int64_t> moved_in;
  std::vector<int64_t> moved_out;
  Report report;
};

// Assigns every edge of the scheme graph g to one cell. A0-A_i edges pick the
// column uniformly, B0-B_j edges pick the row uniformly, crossing edges with
// one exceptional end pick the free index uniformly, A0-B0 edges pick a
// uniform cell, and cluster-cluster crossing edges go to their own cell.
// Throws InputError if g has an edge inside A0, B0, A or B.
RawSlices random_slice(const Graph& g, const Partition& p, uint64_t seed);

// Locality clauses a1, a2 and the concentration bounds a3-a5 for the given
// eps; a3-a5 are statistical and reported with their slack.
Report slice_report(const RawSlices& s, const Graph& g, const Partition& p,
                    const Rational& eps);

// Moves whole crossing edges between cells so every cell has an even number
// of crossing edges, at least 2*alpha*n. Throws InfeasibleError naming the
// cell if some cell would need more than floor(sqrt(eps) n) moves. The
// report holds clauses b1-b6.
SliceDecomposition move_for_parity(const RawSlices& raw, const Graph& g,
                                   const Partition& p, const Params& params);

// Per-cell targets of the critical edge move: edges[c] in {2b, 2b+2} summing
// to e, and w_degree[k][c] the degree of the k-th vertex of W0 in cell c.
struct CriticalTargets {
  int K = 0;
  std::vector<int64_t> edges;
  std::vector<std::vector<int64_t>> w_degree;
};

// Targets for total crossing count e (even) and W0 crossing degrees dw, with
// each dw in [K^2, e/2]. Cells receiving the larger values are those with
// the largest `current` counts (ties by lowest index); `current_edges` and
// `current_w` may be empty, meaning all zero. Throws InputError when the
// inputs violate those bounds.
CriticalTargets plan_critical_targets(
    int64_t e, const std::vector<int64_t>& dw, int K,
    const std::vector<int64_t>& current_edges = {},
    const std::vector<std::vector<int64_t>>& current_w = {});

// Checks the three target properties: floor/ceil values, 2 a <= b per cell,
// and exact sums.
Report check_critical_targets(const CriticalTargets& t, int64_t e,
                              const std::vector<int64_t>& dw);

// Exact repair for the sparse case: W0 (at most two vertices, in order)
// degrees and cell sizes are moved to the planned targets. The report holds
// clauses b1-b7 with tolerance 25 eps n and locality budget 20 eps n / K^2.
SliceDecomposition move_critical(const RawSlices& raw, const Graph& g,
                                 const Partition& p,
                                 const std::vector<Vertex>& W0,
                                 const Rational& eps);

// Union of all cells of both grids, as a single edge list (sorted).
std::vector<Edge> all_edges(const SliceDecomposition& s);

}  // namespace exdecomp

#endif  // EXDECOMP_SLICING_HPP_
