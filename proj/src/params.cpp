#include "exdecomp/params.hpp"

namespace exdecomp {

const char* to_string(ExecutionPolicy p) {
  return p == ExecutionPolicy::kSerial ? "serial" : "parallel";
}

int64_t alpha_n(const Params& p) {
  int64_t den = 2 * static_cast<int64_t>(p.K) * p.K;
  int64_t num = p.D - p.phi_n;
  if (num < 0 || num % den != 0) return -1;
  return num / den;
}

}  // namespace exdecomp
