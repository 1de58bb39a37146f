#ifndef EXDECOMP_CANDIDATES_HPP_
#define EXDECOMP_CANDIDATES_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "exdecomp/exceptional.hpp"
#include "exdecomp/graph.hpp"
#include "exdecomp/report.hpp"

namespace exdecomp {

struct NoncriticalResult {
  // F_1..F_{gamma n}; the matchings extended by 2-paths come first.
  std::vector<ExceptionalCandidate> F;
  // F'_1..F'_{gamma' n}, each a 2-matching.
  std::vector<ExceptionalCandidate> Fprime;
  // Number of extended matchings r and how many random subsets were drawn.
  int64_t r = 0;
  int attempts = 0;
  // Preconditions and the advisory concentration checks of the last draw.
  Report report;
};

// Splits the crossing graph h (a repaired cell) into gamma_n + gamma_prime_n
// edge-disjoint Hamilton candidates. Preconditions: e(h) even, maxdeg(h) <=
// 16 gamma n / 15, maxdeg(h[A, B]) < (3 gamma / 5 - eps0) n, and the largest
// even subgraph H' with degrees <= floor(3 gamma n / 5) containing h[A0, B0]
// has 2 (gamma + gamma') n <= e(H') <= 10 eps0 gamma n^2. A violated
// precondition or a starved construction (after 500 random subsets) throws
// InfeasibleError.
NoncriticalResult decompose_noncritical(const Graph& h, const Partition& p,
                                        int64_t gamma_n, int64_t gamma_prime_n,
                                        uint64_t seed,
                                        std::optional<Locale> locale = {});

// q x r matrix with entries in {0, 1, 2}.
struct AllocationMatrix {
  int q = 0;
  int r = 0;
  std::vector<std::vector<int>> a;
};

// Row sums a, column bases c (non-increasing, values in {0, 1, 2}, spread at
// most one), eta with eta r integral, sum a + sum c = 2 (1 + eta) r, and
// 31r/60 <= a_1, a_2 <= r, 31r/60 <= a_3 <= 31r/30. Returns entries with the
// given row sums, column totals 4 on the first eta r columns and 2 after,
// and at least 2 - c_j ones in column j. Throws InputError on bad input.
AllocationMatrix allocate_matrix(const std::vector<int64_t>& a,
                                 const std::vector<int>& c, const Rational& eta,
                                 int r);

// Checks the three output properties; used by tests and by the critical
// decomposition as a contract.
Report check_allocation(const AllocationMatrix& m, const std::vector<int64_t>& a,
                        const std::vector<int>& c, const Rational& eta);

struct CriticalResult {
  // F_1..F_{alpha n}: the 4-edge candidates first, then 2-edge ones, and the
  // special W0-covering 2-matchings last.
  std::vector<ExceptionalCandidate> F;
  int64_t specials = 0;
  AllocationMatrix allocation;
  Report report;
};

// Decomposes the crossing graph h into alpha_n candidates, eta alpha n of
// them with 4 edges and the rest with 2, and at least alpha n / 200 with
// d(w) = 1 on W0 and 2 edges. Wprime lists the high-degree vertices, W0 a
// subset of size min(2, |Wprime|). Preconditions (edge total, degree window
// and gap, cluster degrees at most eps0 n, alpha n / 200 integral) throw
// PreconditionError; a failed Hall step throws InfeasibleError with the
// violating vertices.
CriticalResult decompose_critical(const Graph& h, const Partition& p,
                                  const std::vector<Vertex>& Wprime,
                                  const std::vector<Vertex>& W0,
                                  int64_t alpha_n, const Rational& eta,
                                  std::optional<Locale> locale = {});

}  // namespace exdecomp

#endif  // EXDECOMP_CANDIDATES_HPP_
