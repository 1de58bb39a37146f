#include "exdecomp/report.hpp"

namespace exdecomp {

bool Report::ok() const { return first_failure() == nullptr; }

const ClauseResult* Report::first_failure() const {
  for (const auto& c : clauses_) {
    if (!c.passed && !c.advisory) return &c;
  }
  return nullptr;
}

const ClauseResult* Report::find(const std::string& clause) const {
  for (const auto& c : clauses_) {
    if (c.clause == clause) return &c;
  }
  return nullptr;
}

ClauseResult& Report::add(std::string clause, bool passed, std::string detail) {
  ClauseResult c;
  c.clause = std::move(clause);
  c.passed = passed;
  c.detail = std::move(detail);
  clauses_.push_back(std::move(c));
  return clauses_.back();
}

ClauseResult& Report::add_advisory(std::string clause, bool passed,
                                   std::string detail) {
  ClauseResult& c = add(std::move(clause), passed, std::move(detail));
  c.advisory = true;
  return c;
}

void Report::make_advisory() {
  for (auto& c : clauses_) c.advisory = true;
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.clauses_) {
    if (!prefix.empty()) c.clause = prefix + c.clause;
    clauses_.push_back(std::move(c));
  }
}

std::string Report::summary() const {
  std::string out = subject_.empty() ? "report" : subject_;
  const ClauseResult* f = first_failure();
  if (f == nullptr) return out + ": ok";
  out += ": " + f->clause + " failed";
  if (!f->detail.empty()) out += " (" + f->detail + ")";
  return out;
}

}  // namespace exdecomp
