#ifndef EXDECOMP_GENERATOR_HPP_
#define EXDECOMP_GENERATOR_HPP_

#include <cstdint>
#include <string>

#include "exdecomp/assembly.hpp"

namespace exdecomp {

// Request for one synthetic instance. n = 0 and K = 0 pick the regime
// defaults (noncritical n = 2000, K = 2; critical n = 801; few_edges n = 40).
struct GeneratorSpec {
  std::string regime = "noncritical";
  int n = 0;
  int K = 0;
  uint64_t seed = 1;
};

// Builds two quasi-cliques on A' and B', plants the crossing structure of the
// regime, and completes to a D-regular graph by removing a prescribed
// subgraph inside each side; cluster-to-cluster crossing edges are drawn as a
// random degree-constrained bipartite graph repaired by 2-swaps. Vertex ids
// are shuffled at the end. Throws InputError naming the violated constraint
// when the requested size cannot satisfy the regime's divisibility rules.
Instance generate(const GeneratorSpec& spec);

// Two cliques on 2k vertices each plus a vertex a joined to k vertices of
// each clique, and a perfect matching between the vertices of the two
// cliques not adjacent to a. A' is one clique plus a; D = 2k. The choice of
// neighbours and matching is random. No divisibility is enforced, so only
// k divisible by 200 passes the critical pipeline's preconditions.
Instance critical_template(int k, uint64_t seed);

}  // namespace exdecomp

#endif  // EXDECOMP_GENERATOR_HPP_
