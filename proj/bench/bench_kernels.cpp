#include <benchmark/benchmark.h>

#include <cmath>
#include <thread>

#include "vband/coupling.hpp"
#include "vband/driver.hpp"
#include "vband/fluid.hpp"

namespace {

struct Setup {
  vband::Solver solver;
  vband::RunState state;
  double dt;

  Setup() : solver(make_config()), state(solver.initialize()), dt(solver.cfl_dt()) {}

  static vband::ScenarioConfig make_config() {
    vband::ScenarioConfig c = vband::find_scenario("strong_landau").defaults;
    return c;
  }
};

const Setup& setup() {
  static const Setup s;
  return s;
}

vband::ExecutionPolicy policy_for(int workers) {
  return workers == 0 ? vband::ExecutionPolicy::serial() : vband::ExecutionPolicy::openmp(workers);
}

void BM_CouplingStep(benchmark::State& st) {
  const Setup& s = setup();
  const vband::CouplingOptions opts{policy_for(static_cast<int>(st.range(0)))};
  vband::BandMomentField field = s.state.field;
  for (auto _ : st) {
    vband::coupling_step_in_place(field, s.state.e, 1e-3, s.solver.discretization(), opts);
    benchmark::DoNotOptimize(field.data().data());
  }
}

void BM_FluidStep(benchmark::State& st) {
  const Setup& s = setup();
  const vband::ExecutionPolicy policy = policy_for(static_cast<int>(st.range(0)));
  vband::BandMomentField field = s.state.field;
  vband::FieldState e = s.state.e;
  for (auto _ : st) {
    vband::fluid_step_in_place(field, e, nullptr, 0.0, s.dt, s.solver.discretization(), policy);
    benchmark::DoNotOptimize(field.data().data());
  }
}

void BM_StrangStep(benchmark::State& st) {
  const Setup& s = setup();
  vband::ScenarioConfig c = s.solver.config();
  c.workers = static_cast<int>(std::max<long>(1, st.range(0)));
  const vband::Solver solver(c);
  vband::RunState state = s.state;
  for (auto _ : st) solver.strang_step(state, s.dt);
}

// 0 selects the serial reference path; n > 0 runs the OpenMP kernels on n
// threads.
void worker_args(benchmark::internal::Benchmark* b) {
  b->Arg(0);
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int n = 1; n <= hw; n *= 2) b->Arg(n);
}

BENCHMARK(BM_CouplingStep)->Apply(worker_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FluidStep)->Apply(worker_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_StrangStep)->Apply(worker_args)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
