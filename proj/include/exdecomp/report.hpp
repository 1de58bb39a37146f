#ifndef EXDECOMP_REPORT_HPP_
#define EXDECOMP_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "exdecomp/graph.hpp"

namespace exdecomp {

// Outcome of one named condition. `slack` is the margin by which the worst
// instance satisfies (positive) or violates (negative) a numeric bound.
struct ClauseResult {
  std::string clause;
  bool passed = true;
  std::string detail;
  std::vector<Vertex> witness_vertices;
  std::vector<Edge> witness_edges;
  std::optional<double> slack;
  // Advisory clauses are reported but never make a report fail.
  bool advisory = false;
};

class Report {
 public:
  Report() = default;
  explicit Report(std::string subject) : subject_(std::move(subject)) {}

  const std::string& subject() const { return subject_; }
  const std::vector<ClauseResult>& clauses() const { return clauses_; }
  // True when no non-advisory clause failed.
  bool ok() const;
  // First failing non-advisory clause, or nullptr.
  const ClauseResult* first_failure() const;
  const ClauseResult* find(const std::string& clause) const;

  ClauseResult& add(std::string clause, bool passed, std::string detail = {});
  ClauseResult& add_advisory(std::string clause, bool passed,
                             std::string detail = {});
  // Marks every clause advisory.
  void make_advisory();
  // Appends `other`'s clauses, prefixing names with `prefix` when non-empty.
  void merge(const Report& other, const std::string& prefix = {});
  std::string summary() const;

 private:
  std::string subject_;
  std::vector<ClauseResult> clauses_;
};

}  // namespace exdecomp

#endif  // EXDECOMP_REPORT_HPP_
