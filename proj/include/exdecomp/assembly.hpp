#ifndef EXDECOMP_ASSEMBLY_HPP_
#define EXDECOMP_ASSEMBLY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exdecomp/candidates.hpp"
#include "exdecomp/exceptional.hpp"
#include "exdecomp/graph.hpp"
#include "exdecomp/params.hpp"
#include "exdecomp/report.hpp"
#include "exdecomp/slicing.hpp"

namespace exdecomp {

// Problem instance: D-regular G, its partition, the subgraph G0 and the
// pipeline parameters.
struct Instance {
  Graph G;
  Partition P;
  Graph G0;
  Params params;
  // Free-form generator metadata (regime hint, template size, ...).
  std::string meta;
};

// G - G[A] - G[B] - G0.
Graph scheme_graph(const Instance& inst);
std::string instance_hash(const Instance& inst);

struct CriticalityReport {
  bool is_critical = false;
  int64_t D = 0;
  int delta_cross = 0;
  int cap = 0;
  int64_t capped_max_edges = 0;
  int64_t crossing_edges = 0;
  // Vertices by decreasing crossing degree (ties by id), at most four.
  std::vector<Vertex> top;
  std::vector<int> top_degree;
  // W sorted like `top`; Wprime is a prefix of `top`, empty if none fits.
  std::vector<Vertex> W;
  std::vector<Vertex> Wprime;
  // Evaluations of the structural bounds (i)-(v) for critical graphs.
  Report bounds;
};

// Crossing graph of g between A' and B' = V \ A'.
Graph crossing_graph(const Graph& g, const VertexSet& Aprime);

// Critical iff maxdeg(G[A', B']) >= 11D/40 and every subgraph of G[A', B']
// with max degree <= floor(11D/40) has at most 41D/40 edges (exact via flow).
CriticalityReport classify_criticality(const Graph& g, const VertexSet& Aprime,
                                       const VertexSet& Bprime, int64_t D);

struct LocalizedExtension {
  std::vector<ExceptionalSystem> systems;
  // Edges of H not used by any system.
  Graph leftover;
  // True when the greedy pass starved and the matching-based pass was used.
  bool used_matching_fallback = false;
  Report report;
};

// Extends each candidate of one cell into an exceptional system localized at
// `loc`, taking the new edges from H (exceptional-to-own-cluster edges of the
// cell). Throws PreconditionError if H or a candidate is not local, and
// InfeasibleError naming the candidate if the extension starves. Leftover
// edges at vertices of `avoid` are swapped into the systems where possible.
LocalizedExtension extend_localized(const Graph& H,
                                    const std::vector<ExceptionalCandidate>& F,
                                    const Partition& p, const Locale& loc,
                                    const VertexSet& avoid = {});

// Decomposes H + sum F into one exceptional system per candidate, processing
// exceptional vertices in increasing order with a perfect matching between
// the H-neighbours of v and the open slots 2 - d_{F_s}(v). Throws
// InfeasibleError with the violating vertices when no perfect matching
// exists, and PreconditionError on a degree mismatch.
std::vector<ExceptionalSystem> extend_global(
    const Graph& H, const std::vector<ExceptionalCandidate>& F,
    const Partition& p);

struct SystemRecord {
  ExceptionalSystem system;
  std::string stage;
  // "localized" or "global".
  std::string role;
  Locale origin;
};

struct AssemblyResult {
  std::vector<SystemRecord> records;
  Report report;
};

// Per cell, localized extension of F(i,j) inside H(i,j); then the leftover of
// all H(i,j) together with every F'(i,j) goes to the global extension.
// F and Fprime are indexed like CellGrid cells.
AssemblyResult construct_all_systems(
    const Graph& Gstar, const Partition& p, const CellGrid& H,
    const std::vector<std::vector<ExceptionalCandidate>>& F,
    const std::vector<std::vector<ExceptionalCandidate>>& Fprime,
    int64_t alpha_n, int64_t lambda_n,
    ExecutionPolicy policy = ExecutionPolicy::kSerial);

struct CellRelabeling {
  int i = 1;
  int j = 1;
  int64_t nonlocal = 0;
  int64_t filled_from_local = 0;
  int64_t local_two_edge = 0;
  int64_t local_special = 0;
};

// Splits the candidates of cell (i, j) into gamma n localized ones (tagged
// with the cell) and gamma' n others. Non-local candidates go to the second
// list first; it is then filled from the local ones preferring 2-edge
// non-special candidates, then 2-edge special ones, then the rest. Throws
// InfeasibleError if more than gamma' n candidates are non-local.
struct Relabeled {
  std::vector<ExceptionalCandidate> F;
  std::vector<ExceptionalCandidate> Fprime;
  CellRelabeling info;
};
Relabeled relabel_cell(std::vector<ExceptionalCandidate> cands,
                       const Partition& p, int i, int j, int64_t gamma_n,
                       int64_t gamma_prime_n,
                       const std::vector<Vertex>& special_w0,
                       bool special_needs_w0);

struct CellCount {
  int i = 1;
  int j = 1;
  int64_t localized = 0;
  int64_t target = 0;
  int64_t two_edge = 0;
  int64_t special = 0;
};

struct Failure {
  std::string stage;
  std::string clause;
  std::string message;
  std::vector<int> witness;
};

struct Certificate {
  int schema = 1;
  std::string instance_hash;
  // "noncritical", "critical" or "few_edges".
  std::string regime;
  // "ok", "precondition_failed", "infeasible", "verification_failed".
  std::string status = "ok";
  std::optional<Failure> failure;
  Params params;
  std::vector<SystemRecord> systems;
  std::optional<SliceDecomposition> slices;
  // Few-edges branch: "single_cell" or "w0_moves".
  std::string branch;
  std::vector<Vertex> W, Wprime, W0;
  std::vector<CellCount> counts;
  std::vector<CellRelabeling> relabeling;
  Report preconditions;
  Report verification;
};

// Top-level hypotheses of each regime; a failed clause makes the pipeline
// stop with status precondition_failed.
Report check_preconditions(const Instance& inst, const std::string& regime);

// "few_edges" if e_G(A', B') < D, else "critical" or "noncritical".
std::string select_regime(const Instance& inst);

Certificate pipeline_noncritical(const Instance& inst,
                                 ExecutionPolicy policy = ExecutionPolicy::kSerial);
Certificate pipeline_critical(const Instance& inst,
                              ExecutionPolicy policy = ExecutionPolicy::kSerial);
Certificate pipeline_few_edges(const Instance& inst,
                               ExecutionPolicy policy = ExecutionPolicy::kSerial);
// Dispatches on select_regime.
Certificate run_pipeline(const Instance& inst,
                         ExecutionPolicy policy = ExecutionPolicy::kSerial);

// Independent re-verification of a certificate against its instance: cover
// and disjointness of G - G[A] - G[B] - G0, every system predicate with its
// locale, the regime's system kinds and the per-cell count identities.
// Stored verdicts are ignored.
Report verify_certificate(const Instance& inst, const Certificate& cert,
                          ExecutionPolicy policy = ExecutionPolicy::kSerial);

// Exit code for a certificate status: 0 ok, 1 precondition, 2 stage, 3
// verification.
int exit_code(const Certificate& cert);

}  // namespace exdecomp

#endif  // EXDECOMP_ASSEMBLY_HPP_
