#ifndef EXDECOMP_PARAMS_HPP_
#define EXDECOMP_PARAMS_HPP_

#include <cstdint>
#include <string>

#include "exdecomp/rational.hpp"

namespace exdecomp {

// Serial runs are the reference; parallel runs split independent work items
// (cells, systems, batch instances) across OpenMP threads and must agree.
enum class ExecutionPolicy { kSerial, kParallel };

const char* to_string(ExecutionPolicy p);

// Numeric parameters of a pipeline run. phi_n and lambda_n are the integers
// phi*n and lambda*n.
struct Params {
  int64_t D = 0;
  int64_t phi_n = 0;
  int64_t lambda_n = 0;
  int K = 1;
  Rational eps0{1, 100};
  Rational eps{1, 10};
  Rational eps_prime{3, 100};
  uint64_t seed = 1;
};

// alpha*n = (D - phi*n) / (2K^2) when divisible, -1 otherwise.
int64_t alpha_n(const Params& p);

}  // namespace exdecomp

#endif  // EXDECOMP_PARAMS_HPP_
