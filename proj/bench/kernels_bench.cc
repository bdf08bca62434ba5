// Copyright 2026 The rgs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference against the OpenMP kernels. Range argument 0 is serial,
// 1 parallel; results are bitwise identical (see parallel_test.cc).

#include <string>

#include <benchmark/benchmark.h>

#include "rgs/cli_io.h"
#include "rgs/conditions.h"
#include "rgs/scoring.h"
#include "rgs/setops.h"

namespace rgs {
namespace {

Exec ExecOf(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::kSerial : Exec::kParallel;
}

struct Loaded {
  Instance inst;
  Params params;
};

Loaded Load(const std::string& name) {
  GameDocument doc = LoadDocument(std::string(RGS_DATA_DIR) + "/" + name);
  doc.inst.game = NormalizeMinmax(doc.inst.game).game;
  return {doc.inst, doc.params};
}

void BoundingSetKernel(benchmark::State& state, const std::string& file, int grid_size) {
  const Loaded l = Load(file);
  const DirectionGrid grid = MakeGrid(l.inst.n(), grid_size);
  const PayoffGeometry geo = ComputePayoffGeometry(l.inst.game, grid);
  ScoringOptions so;
  so.eta = l.params.eta;
  so.exec = ExecOf(state);
  for (auto _ : state) {
    const Scorer scorer(l.inst, geo, so);
    benchmark::DoNotOptimize(ComputeBoundingSet(scorer, grid, Side::kLower, so.exec));
  }
}

void BM_BoundingSetPd(benchmark::State& state) { BoundingSetKernel(state, "pd_noisy.json", 180); }
void BM_BoundingSetPg3(benchmark::State& state) { BoundingSetKernel(state, "pg3.json", 60); }

void BM_SelfDecomposable(benchmark::State& state) {
  const Loaded l = Load("pd_noisy.json");
  const DirectionGrid grid = MakeGrid(2, 180);
  const PayoffGeometry geo = ComputePayoffGeometry(l.inst.game, grid);
  ScoringOptions so;
  so.eta = l.params.eta;
  const Scorer scorer(l.inst, geo, so);
  const BoundingSet q = ComputeBoundingSet(scorer, grid, Side::kLower, Exec::kParallel);
  const ConvexSetRep w = SmoothInner(q.Q, 0.1, 0.05, grid);
  MembershipOptions mo;
  mo.eta = l.params.eta;
  const BOperator op(l.inst, mo, ExecOf(state));
  for (auto _ : state)
    benchmark::DoNotOptimize(SelfDecomposable(op, w, grid, 0.99, 32, ExecOf(state)));
}

void BM_Identifiability(benchmark::State& state) {
  const Loaded l = Load("pg3.json");
  const DirectionGrid grid = MakeGrid(3, 60);
  const std::vector<Vec> dirs = IdentifiabilityDirections(grid);
  const RhoProfile& truthful = l.inst.messages.candidate_rhos[0];
  for (auto _ : state)
    for (std::size_t a = 0; a < l.inst.game.num_profiles(); ++a)
      benchmark::DoNotOptimize(
          Identifiability(l.inst, a, truthful, l.params.eta, dirs, ExecOf(state)));
}

BENCHMARK(BM_BoundingSetPd)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundingSetPg3)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelfDecomposable)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Identifiability)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace rgs

BENCHMARK_MAIN();
