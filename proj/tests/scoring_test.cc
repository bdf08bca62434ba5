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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "rgs/conditions.h"
#include "rgs/scoring.h"
#include "test_util.h"

namespace rgs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double MaxScore(const StageGame& g, const Vec& l) {
  double best = -kInf;
  for (const Vec& p : g.payoff) best = std::max(best, Dot(l, p));
  return best;
}

TEST_CASE("efficient score at mutual cooperation with a revealing signal") {
  const Instance inst = testing::NoisyPd(0.01);
  const Vec l = {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
  const RhoProfile& truthful = inst.messages.candidate_rhos[0];
  for (Closure c : {Closure::kConservative, Closure::kRelaxed}) {
    const DirectionalValue dv = SolveDirectional(inst, l, 0.0, 0, truthful, 0, c);
    REQUIRE(dv.feasible);
    CHECK(dv.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    if (c == Closure::kConservative)
      CHECK(oracle::ReplayScoring(inst, 0, truthful, 0, l, 0.0, dv.x.x, dv.v) <= 1e-8);
  }
}

TEST_CASE("no deviations: the score is the stage payoff") {
  const Instance inst = testing::Build({1, 1}, {{0.5, -0.25}}, {2, 2},
                                       {0.1, 0.2, 0.3, 0.4}, {1, 1});
  const RhoProfile rho{"pool", {{0, 0}, {0, 0}}};
  const DeviationSet devs = EnumerateDeviations(inst, 0, rho, Closure::kConservative);
  CHECK(devs.by_player[0].empty());
  CHECK(devs.by_player[1].empty());
  for (double th = 0.0; th < 6.28; th += 0.7) {
    const Vec l = {std::cos(th), std::sin(th)};
    const DirectionalValue dv = SolveDirectional(inst.game, devs, l, 0.3, 0);
    REQUIRE(dv.feasible);
    CHECK(dv.value == doctest::Approx(Dot(l, inst.game.payoff[0])));
  }
}

TEST_CASE("minus-coordinate scores respect the strict minmax bound") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 15; ++t) {
    const int n = 2 + t % 2;
    const Instance inst = testing::RandomInstance(rng, n, 2, 2);
    const std::vector<RhoProfile> rhos = RhoSet(inst);
    for (double eta : {0.0, 0.1, 0.5}) {
      for (int i = 0; i < n; ++i) {
        Vec l(n, 0.0);
        l[i] = -1.0;
        for (std::size_t a = 0; a < inst.game.num_profiles(); a += 3) {
          double dev = -kInf;
          for (int ai = 0; ai < 2; ++ai)
            if (ai != inst.game.space.Coord(a, i))
              dev = std::max(dev, inst.game.g(inst.game.space.With(a, i, ai), i));
          const double bound = -std::max(inst.game.g(a, i), dev + eta);
          const DirectionalValue dv =
              SolveDirectional(inst, l, eta, a, rhos[t % rhos.size()], 0, Closure::kRelaxed);
          if (dv.feasible) CHECK(dv.value <= bound + 1e-7);
        }
      }
    }
  }
}

TEST_CASE("uninformative messages and a large wedge leave nothing feasible") {
  // One message per player: transfers are constants and cannot deter.
  const Instance inst = testing::Build({2, 2}, testing::PdPayoffs(true), {2, 2},
                                       testing::PrivateFlipKernel(0.1), {1, 1});
  const DirectionGrid grid = MakeGrid(2, 36);
  const PayoffGeometry geo = ComputePayoffGeometry(inst.game, grid);
  ScoringOptions so;
  so.eta = 3.0;
  const Scorer scorer(inst, geo, so);
  for (const Direction& d : grid.dirs) {
    const ScoreBracket b = scorer.KEta(d);
    CHECK(b.k_lower == -kInf);
    CHECK(b.k_upper == -kInf);
  }
  const BoundingSet bs = ComputeBoundingSet(scorer, grid, Side::kLower, Exec::kSerial);
  CHECK(bs.Q.empty);
}

struct Fixture {
  Instance inst;
  DirectionGrid grid;
  PayoffGeometry geo;
};

Fixture RandomFixture(std::mt19937_64& rng, int n) {
  Fixture f;
  f.inst = testing::RandomInstance(rng, n, 2, 2);
  f.grid = MakeGrid(n, n == 2 ? 24 : 30, 3);
  f.geo = ComputePayoffGeometry(f.inst.game, f.grid);
  return f;
}

TEST_CASE("bracket ordering, caps and witness replay on random games") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 6; ++t) {
    const Fixture f = RandomFixture(rng, 2 + t % 2);
    for (double eta : {0.0, 0.2}) {
      ScoringOptions so;
      so.eta = eta;
      const Scorer scorer(f.inst, f.geo, so);
      for (const Direction& d : f.grid.dirs) {
        const ScoreBracket b = scorer.KEta(d);
        CHECK(scorer.KUpper(d) == b.k_upper);
        CHECK(b.k_lower <= b.k_upper + 1e-7);
        const double cap = MaxScore(f.inst.game, d.lambda);
        CHECK(b.k_upper <= cap + 1e-7);
        if (b.k_lower > -kInf) {
          REQUIRE(b.witness.has_value());
          const ScoreWitness& w = *b.witness;
          CHECK(WitnessResidual(f.inst, scorer.rhos(), d.lambda, eta, w) <= 1e-8);
          CHECK(oracle::ReplayScoring(f.inst, w.a, scorer.rhos()[w.rho_index], w.silenced,
                                      d.lambda, eta, w.x.x, w.v) <= 1e-8);
          CHECK(Dot(d.lambda, w.v) == doctest::Approx(b.k_lower).epsilon(1e-9).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("scores only fall as the wedge grows") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 4; ++t) {
    const Fixture f = RandomFixture(rng, 2);
    std::vector<Vec> lower, upper;
    for (double eta : {0.0, 0.1, 0.3, 0.8}) {
      ScoringOptions so;
      so.eta = eta;
      const Scorer scorer(f.inst, f.geo, so);
      Vec lo, up;
      for (const Direction& d : f.grid.dirs) {
        const ScoreBracket b = scorer.KEta(d);
        lo.push_back(b.k_lower);
        up.push_back(b.k_upper);
      }
      lower.push_back(lo);
      upper.push_back(up);
    }
    for (std::size_t e = 1; e < lower.size(); ++e)
      for (std::size_t k = 0; k < f.grid.size(); ++k) {
        CHECK(lower[e][k] <= lower[e - 1][k] + 1e-7);
        CHECK(upper[e][k] <= upper[e - 1][k] + 1e-7);
      }
  }
}

TEST_CASE("upper score at minus e_i is at most minus the strict minmax value") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 8; ++t) {
    const int n = 2 + t % 2;
    const Fixture f = RandomFixture(rng, n);
    for (double eta : {0.0, 0.1, 0.5}) {
      ScoringOptions so;
      so.eta = eta;
      const Scorer scorer(f.inst, f.geo, so);
      const MinmaxProfileReport mm = VUnderbar(f.inst.game, eta);
      for (int i = 0; i < n; ++i) {
        Vec l(n, 0.0);
        l[i] = -1.0;
        CHECK(scorer.KEta(MakeDirection(l)).k_upper <= -mm.v_underbar[i] + 1e-7);
      }
    }
  }
}

TEST_CASE("permuting the grid permutes the support table") {
  std::mt19937_64 rng(15);
  const Fixture f = RandomFixture(rng, 2);
  ScoringOptions so;
  so.eta = 0.1;
  const Scorer scorer(f.inst, f.geo, so);
  const BoundingSet a = ComputeBoundingSet(scorer, f.grid, Side::kLower, Exec::kSerial);
  DirectionGrid shuffled = f.grid;
  std::vector<std::size_t> perm(f.grid.size());
  for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = (k * 7 + 3) % perm.size();
  for (std::size_t k = 0; k < perm.size(); ++k) shuffled.dirs[k] = f.grid.dirs[perm[k]];
  const BoundingSet b = ComputeBoundingSet(scorer, shuffled, Side::kLower, Exec::kSerial);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    CHECK(b.brackets[k].k_lower == a.brackets[perm[k]].k_lower);
    CHECK(b.brackets[k].k_upper == a.brackets[perm[k]].k_upper);
  }
}

TEST_CASE("a strict static equilibrium payoff lies in the lower bounding set") {
  // (D,D) in the normalized dilemma loses 1 on every own deviation.
  const Instance inst = testing::PrivatePd(0.1);
  const DirectionGrid grid = MakeGrid(2, 72);
  const PayoffGeometry geo = ComputePayoffGeometry(inst.game, grid);
  ScoringOptions so;
  so.eta = 0.5;
  const Scorer scorer(inst, geo, so);
  const BoundingSet bs = ComputeBoundingSet(scorer, grid, Side::kLower, Exec::kSerial);
  REQUIRE_FALSE(bs.Q.empty);
  CHECK(bs.Q.Contains({0.0, 0.0}, -1e-9));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(bs.support[k] <= geo.V.grid_support[k] + 1e-7);
    CHECK(bs.Q.grid_support[k] <= bs.support[k] + 1e-9);
  }
}

TEST_CASE("support CSV schema") {
  const Instance inst = testing::PrivatePd(0.1);
  const DirectionGrid grid = MakeGrid(2, 8);
  const PayoffGeometry geo = ComputePayoffGeometry(inst.game, grid);
  const Scorer scorer(inst, geo, ScoringOptions{});
  const BoundingSet bs = ComputeBoundingSet(scorer, grid, Side::kLower, Exec::kSerial);
  std::ostringstream os;
  WriteSupportCsv(os, scorer, bs);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# rgs support v1");
  std::getline(is, line);
  CHECK(line == "lambda_1,lambda_2,k_lower,k_upper,witness");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 8);
  CHECK(FormatDouble(0.1) == "0.10000000000000001");
}

}  // namespace
}  // namespace rgs
