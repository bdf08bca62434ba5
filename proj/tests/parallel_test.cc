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

#include <stdexcept>
#include <string>
#include <vector>

#ifdef RGS_HAVE_OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "rgs/cli_io.h"
#include "rgs/conditions.h"
#include "rgs/setops.h"
#include "test_util.h"

namespace rgs {
namespace {

// Forces several threads even on a single-core machine.
struct Threads {
  Threads() {
#ifdef RGS_HAVE_OPENMP
    omp_set_num_threads(4);
#endif
  }
};

BoundingSet Bound(const Instance& inst, const DirectionGrid& grid, const PayoffGeometry& geo,
                  double eta, Exec exec) {
  ScoringOptions so;
  so.eta = eta;
  so.exec = exec;
  const Scorer scorer(inst, geo, so);
  return ComputeBoundingSet(scorer, grid, Side::kLower, exec);
}

TEST_CASE("parallel bounding sets match the serial reference bit for bit") {
  Threads t;
  for (const char* name : {"pd_noisy.json", "pg3.json"}) {
    Params params;
    const Instance inst = testing::LoadNormalized(name, &params);
    const DirectionGrid grid = MakeGrid(inst.n(), 48, params.seed);
    const PayoffGeometry geo = ComputePayoffGeometry(inst.game, grid);
    const BoundingSet s = Bound(inst, grid, geo, params.eta, Exec::kSerial);
    const BoundingSet p = Bound(inst, grid, geo, params.eta, Exec::kParallel);
    REQUIRE(s.brackets.size() == p.brackets.size());
    for (std::size_t k = 0; k < s.brackets.size(); ++k) {
      CHECK(s.brackets[k].k_lower == p.brackets[k].k_lower);
      CHECK(s.brackets[k].k_upper == p.brackets[k].k_upper);
      CHECK(s.support[k] == p.support[k]);
    }
  }
}

TEST_CASE("parallel identifiability and self-decomposability match serial") {
  Threads t;
  Params params;
  const Instance inst = testing::LoadNormalized("pd_noisy.json", &params);
  const DirectionGrid grid = MakeGrid(2, 48);
  const std::vector<Vec> dirs = IdentifiabilityDirections(grid);
  const RhoProfile& truthful = inst.messages.candidate_rhos[0];
  for (std::size_t a = 0; a < inst.game.num_profiles(); ++a) {
    const IdentifiabilityReport s = Identifiability(inst, a, truthful, 0.1, dirs, Exec::kSerial);
    const IdentifiabilityReport p = Identifiability(inst, a, truthful, 0.1, dirs, Exec::kParallel);
    CHECK(s.mode == p.mode);
    CHECK(s.lambda == p.lambda);
    CHECK(s.dual_objective == p.dual_objective);
  }

  const PayoffGeometry geo = ComputePayoffGeometry(inst.game, grid);
  const BoundingSet q = Bound(inst, grid, geo, 0.1, Exec::kSerial);
  const ConvexSetRep w = SmoothInner(q.Q, 0.1, 0.05, grid);
  MembershipOptions mo;
  mo.eta = 0.1;
  const BOperator ops(inst, mo, Exec::kSerial), opp(inst, mo, Exec::kParallel);
  const SelfDecomposition s = SelfDecomposable(ops, w, grid, 0.9, 16, Exec::kSerial);
  const SelfDecomposition p = SelfDecomposable(opp, w, grid, 0.9, 16, Exec::kParallel);
  CHECK(s.certified == p.certified);
  REQUIRE(s.results.size() == p.results.size());
  for (std::size_t k = 0; k < s.results.size(); ++k) {
    CHECK(s.results[k].decomposable == p.results[k].decomposable);
    CHECK(s.results[k].scheme.w == p.results[k].scheme.w);
  }
}

TEST_CASE("parallel loops rethrow the lowest failing index") {
  Threads t;
  for (Exec exec : {Exec::kSerial, Exec::kParallel}) {
    std::vector<int> hit(64, 0);
    try {
      ParallelFor(64, exec, [&](std::size_t k) {
        hit[k] = 1;
        if (k % 10 == 7) throw std::runtime_error(std::to_string(k));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "7");
    }
    int count = 0;
    for (int h : hit) count += h;
    CHECK(count == 64);
  }
}

}  // namespace
}  // namespace rgs
