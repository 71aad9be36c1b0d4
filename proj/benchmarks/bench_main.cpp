/*
 * Copyright 2026 The esfts Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Throughput of the heavy pipeline stages on the reference examples.

#include <cmath>

#include <benchmark/benchmark.h>

#include "esfts/averaging.hpp"
#include "esfts/dlmi.hpp"
#include "esfts/examples.hpp"
#include "esfts/frequency.hpp"
#include "esfts/sim.hpp"

namespace {

using namespace esfts;

struct Prepared {
  FtsProblem problem;
  TimeGrid grid;
};

Prepared prepare(const char* name, int intervals = 0) {
  const BuiltinExample ex = builtin_example(name);
  const TimeGrid grid = TimeGrid::uniform(ex.problem.t0, ex.problem.T,
                                          intervals > 0 ? intervals : ex.grid_intervals);
  return {validate_problem(ex.problem, grid), grid};
}

void BM_DlmiSolve(benchmark::State& state) {
  const Prepared p = prepare("ex3", static_cast<int>(state.range(0)));
  const ShrunkSpec spec = shrunk_gamma(p.problem, p.grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_dlmi(p.problem, spec, 0.14, p.grid));
  }
  state.SetLabel("ex3, ka = 0.14");
}
BENCHMARK(BM_DlmiSolve)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_GainScan(benchmark::State& state) {
  const Prepared p = prepare("ex3");
  const ShrunkSpec spec = shrunk_gamma(p.problem, p.grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_gain(p.problem, spec, p.grid));
  }
}
BENCHMARK(BM_GainScan)->Unit(benchmark::kMillisecond);

void BM_AveragedClosedLoop(benchmark::State& state) {
  const Prepared p = prepare("ex3");
  for (auto _ : state) {
    benchmark::DoNotOptimize(averaged_closed_loop(p.problem, 0.14, p.grid));
  }
}
BENCHMARK(BM_AveragedClosedLoop)->Unit(benchmark::kMillisecond);

void BM_ComputeBound(benchmark::State& state) {
  const Prepared p = prepare("ex3");
  const double k = std::sqrt(0.14);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_bound(p.problem, 0.14, k, k, p.grid));
  }
}
BENCHMARK(BM_ComputeBound)->Unit(benchmark::kMillisecond);

void BM_ClosedLoopSimulation(benchmark::State& state) {
  const Prepared p = prepare("ex3");
  const double k = std::sqrt(0.14);
  const ControllerParams c{k, k, static_cast<double>(state.range(0)), 0.0};
  const Vector x0 = Vector::Constant(p.problem.n, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_closed_loop(p.problem, c, x0));
  }
  state.SetLabel("ex3, rad/s");
}
BENCHMARK(BM_ClosedLoopSimulation)->Arg(450)->Arg(1800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
