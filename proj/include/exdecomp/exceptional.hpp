#ifndef EXDECOMP_EXCEPTIONAL_HPP_
#define EXDECOMP_EXCEPTIONAL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "exdecomp/graph.hpp"
#include "exdecomp/report.hpp"

namespace exdecomp {

enum class SystemKind { kHES, kMES };
enum class CandidateKind { kHESC, kMESC };

// Home cell (i, j) of a localized object, both 1-based.
struct Locale {
  int i = 1;
  int j = 1;
  auto operator<=>(const Locale&) const = default;
};

struct ExceptionalSystem {
  PathSystem ps;
  SystemKind kind = SystemKind::kMES;
  std::optional<Locale> locale;
};

struct ExceptionalCandidate {
  PathSystem ps;
  CandidateKind kind = CandidateKind::kMESC;
  std::optional<Locale> locale;
  // Name of the construction step that produced it.
  std::string stage;
};

const char* to_string(SystemKind k);
const char* to_string(CandidateKind k);

// Candidate with the given edges whose support also lists every vertex of V0;
// the kind is HESC when it has a crossing edge and MESC otherwise.
ExceptionalCandidate make_candidate(const Partition& p, std::vector<Edge> edges,
                                    std::optional<Locale> locale = std::nullopt,
                                    std::string stage = {});

// Path-count threshold floor(sqrt(eps0) n) and crossing-edge threshold
// floor(sqrt(eps0) n / 2).
int64_t system_path_bound(const Partition& p);
int64_t candidate_cross_bound(const Partition& p);

Report verify_cover(const PathSystem& ps, const Partition& p);
Report verify_system(const ExceptionalSystem& j, const Partition& p);
Report verify_candidate(const ExceptionalCandidate& f, const Partition& p);
// Localization check V(ps) within V0 u A_i u B_j, with a witness vertex.
ClauseResult check_locale(const PathSystem& ps, const Partition& p,
                          const Locale& loc);

// Checks that (g, p) is an exceptional scheme with parameters p.eps0(), eps.
Report verify_scheme(const Graph& g, const Partition& p, const Rational& eps);

// Preconditions for faithful extension on host g: |V0| <= eps0 n and same-side
// degree at least sqrt(eps0) n for exceptional vertices.
Report extend_preconditions(const Graph& g, const Partition& p);

// Raises every v in V0 to degree 2 by pendant edges of g to fresh vertices on
// v's own side, lowest id first. Throws InfeasibleError naming v when there
// are not enough fresh neighbours. Does not enforce extend_preconditions.
ExceptionalSystem faithful_extend(const ExceptionalCandidate& f, const Graph& g,
                                  const Partition& p);

}  // namespace exdecomp

#endif  // EXDECOMP_EXCEPTIONAL_HPP_
