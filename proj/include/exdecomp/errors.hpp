#ifndef EXDECOMP_ERRORS_HPP_
#define EXDECOMP_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exdecomp {

// Malformed or out-of-range input (bad vertex id, wrong side, bad JSON).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A numeric hypothesis of an operation does not hold. Carries the clause name
// so pipelines can report it.
class PreconditionError : public InputError {
 public:
  PreconditionError(std::string stage, std::string clause,
                    const std::string& message,
                    std::vector<int> witness_vertices = {})
      : InputError(message),
        stage_(std::move(stage)),
        clause_(std::move(clause)),
        witness_vertices_(std::move(witness_vertices)) {}
  const std::string& stage() const { return stage_; }
  const std::string& clause() const { return clause_; }
  const std::vector<int>& witness_vertices() const { return witness_vertices_; }

 private:
  std::string stage_;
  std::string clause_;
  std::vector<int> witness_vertices_;
};

// A caller broke an API contract, e.g. summing overlapping graphs.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// A construction step could not be carried out. `stage` and `clause` name
// the step and the inequality or condition that failed; `witness_vertices`
// and `witness_edges` carry the offending objects.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string stage, std::string clause,
                  const std::string& message,
                  std::vector<int> witness_vertices = {},
                  std::vector<std::pair<int, int>> witness_edges = {})
      : std::runtime_error(message),
        stage_(std::move(stage)),
        clause_(std::move(clause)),
        witness_vertices_(std::move(witness_vertices)),
        witness_edges_(std::move(witness_edges)) {}

  const std::string& stage() const { return stage_; }
  const std::string& clause() const { return clause_; }
  const std::vector<int>& witness_vertices() const { return witness_vertices_; }
  const std::vector<std::pair<int, int>>& witness_edges() const {
    return witness_edges_;
  }
  // Colour count reached by a failed edge colouring; -1 elsewhere.
  int achieved_colors = -1;
  // Cell the failure happened in, 1-based; 0 if not cell-specific.
  int cell_i = 0;
  int cell_j = 0;

 private:
  std::string stage_;
  std::string clause_;
  std::vector<int> witness_vertices_;
  std::vector<std::pair<int, int>> witness_edges_;
};

}  // namespace exdecomp

#endif  // EXDECOMP_ERRORS_HPP_
