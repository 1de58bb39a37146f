// Serial reference against the OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "exdecomp/assembly.hpp"
#include "exdecomp/generator.hpp"

using namespace exdecomp;

namespace {

const Instance& noncritical_instance() {
  static const Instance inst = generate({"noncritical", 2000, 3, 1});
  return inst;
}

const Certificate& noncritical_certificate() {
  static const Certificate cert = run_pipeline(noncritical_instance());
  return cert;
}

ExecutionPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecutionPolicy::kSerial
                             : ExecutionPolicy::kParallel;
}

void BM_Pipeline(benchmark::State& state) {
  const Instance& inst = noncritical_instance();
  const ExecutionPolicy policy = policy_of(state);
  for (auto _ : state) {
    Certificate c = run_pipeline(inst, policy);
    benchmark::DoNotOptimize(c.systems.data());
  }
  state.SetLabel(to_string(policy));
}

void BM_Verify(benchmark::State& state) {
  const Instance& inst = noncritical_instance();
  const Certificate& cert = noncritical_certificate();
  const ExecutionPolicy policy = policy_of(state);
  for (auto _ : state) {
    Report r = verify_certificate(inst, cert, policy);
    benchmark::DoNotOptimize(r.ok());
  }
  state.SetLabel(to_string(policy));
}

}  // namespace

BENCHMARK(BM_Pipeline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Verify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
