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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "rgs/deviation.h"
#include "test_util.h"

namespace rgs {
namespace {

// Groups brute-force columns by (action, column) and counts the classes the
// closure keeps, independently of the library's enumeration.
std::size_t OracleCount(const Instance& inst, std::size_t a, const RhoProfile& rho, int i,
                        Closure closure) {
  const int own = inst.game.space.Coord(a, i);
  const Vec on = oracle::BruteForceColumn(inst, a, rho, -1, 0, {});
  const int ns = inst.monitoring.space.size(i), nm = inst.messages.space.size(i);
  std::size_t total = 1;
  for (int k = 0; k < ns; ++k) total *= nm;
  std::vector<std::pair<int, Vec>> classes;
  for (int ai = 0; ai < inst.game.space.size(i); ++ai) {
    if (closure == Closure::kRelaxed && ai == own) continue;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<int> map(ns);
      std::size_t c = code;
      for (int k = ns - 1; k >= 0; --k) {
        map[k] = static_cast<int>(c % nm);
        c /= nm;
      }
      if (ai == own && map == rho.maps[i]) continue;
      const Vec col = oracle::BruteForceColumn(inst, a, rho, i, ai, map);
      if (closure == Closure::kConservative && ai == own && SupDistance(col, on) <= 1e-12) continue;
      bool seen = false;
      for (const auto& [act, other] : classes)
        if (act == ai && SupDistance(other, col) <= 1e-12) seen = true;
      if (!seen) classes.push_back({ai, col});
    }
  }
  return classes.size();
}

TEST_CASE("seven raw deviations with four message maps and two actions") {
  std::mt19937_64 rng(1);
  const Instance inst = testing::RandomInstance(rng, 2, 2, 2);
  const RhoProfile& rho = inst.messages.candidate_rhos[0];
  const InducedKernel k = ComputeInducedKernel(inst, 0, rho);
  int player0 = 0;
  for (const KernelColumn& c : k.by_deviation) player0 += c.player == 0;
  CHECK(player0 == 7);
  const DeviationSet all = EnumerateDeviations(inst, 0, rho, Closure::kAll);
  CHECK(all.by_player[0].size() == 7);  // generic kernel: no equal columns
  const DeviationSet relaxed = EnumerateDeviations(inst, 0, rho, Closure::kRelaxed);
  CHECK(relaxed.by_player[0].size() == 4);
}

TEST_CASE("message-only deviations vanish when they cannot move the column") {
  std::mt19937_64 rng(2);
  // Player 1 has a single message: every rho_1' is the on-path map.
  const Instance inst = [&] {
    Instance base = testing::RandomInstance(rng, 2, 2, 2);
    return testing::Build({2, 2}, base.game.payoff, {2, 2}, base.monitoring.kernel, {1, 2});
  }();
  RhoProfile rho{"pool", {{0, 0}, {0, 1}}};
  const DeviationSet cons = EnumerateDeviations(inst, 0, rho, Closure::kConservative);
  for (const DeviationEntry& e : cons.by_player[0]) CHECK(e.action != 0);

  // Silencing player 2 pools all of player 2's message deviations.
  const Instance two = testing::PrivatePd(0.1);
  const RhoProfile constant{"constant", {{0, 0}, {1, 1}}};
  const DeviationSet silenced = EnumerateDeviations(two, 0, constant, Closure::kConservative, 0b10);
  for (const DeviationEntry& e : silenced.by_player[1]) CHECK(e.action != 0);
  CHECK(silenced.by_player[1].size() == 1);
}

TEST_CASE("deduplication matches pairwise column comparison on the noisy dilemma") {
  const Instance inst = testing::NoisyPd(0.05);
  const RhoProfile& truthful = inst.messages.candidate_rhos[0];
  for (std::size_t a = 0; a < 4; ++a) {
    for (Closure c : {Closure::kAll, Closure::kConservative, Closure::kRelaxed}) {
      const DeviationSet set = EnumerateDeviations(inst, a, truthful, c);
      for (int i = 0; i < 2; ++i) {
        CAPTURE(a);
        CAPTURE(ToString(c));
        CHECK(set.by_player[i].size() == OracleCount(inst, a, truthful, i, c));
      }
    }
  }
}

TEST_CASE("closure invariants on random instances") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    const Instance inst = testing::RandomInstance(rng, n, 2, 2, t % 2 ? 3 : 0);
    const std::vector<RhoProfile> rhos = RhoSet(inst);
    const RhoProfile& rho = rhos[t % rhos.size()];
    const std::size_t a = t % inst.game.num_profiles();
    const DeviationSet cons = EnumerateDeviations(inst, a, rho, Closure::kConservative);
    const DeviationSet rel = EnumerateDeviations(inst, a, rho, Closure::kRelaxed);
    for (int i = 0; i < n; ++i) {
      const int own = inst.game.space.Coord(a, i);
      for (const DeviationEntry& e : rel.by_player[i]) {
        CHECK(e.action != own);
        bool in = false;
        for (const DeviationEntry& f : cons.by_player[i])
          if (f.action == e.action && f.rho_map == e.rho_map) in = true;
        CHECK(in);
      }
      const auto& list = cons.by_player[i];
      for (std::size_t p = 0; p < list.size(); ++p) {
        CHECK_FALSE((list[p].action == own && list[p].rho_map == rho.maps[i]));
        double sum = 0.0;
        for (double v : list[p].column) {
          CHECK(v >= 0.0);
          sum += v;
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
        CHECK(list[p].stage_payoff == inst.game.g(inst.game.space.With(a, i, list[p].action), i));
        for (std::size_t q = p + 1; q < list.size(); ++q)
          CHECK((list[p].action != list[q].action ||
                 SupDistance(list[p].column, list[q].column) > 1e-12));
      }
      CHECK(list.size() == OracleCount(inst, a, rho, i, Closure::kConservative));
    }
  }
}

}  // namespace
}  // namespace rgs
