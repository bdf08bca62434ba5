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

#include "rgs/deviation.h"

namespace rgs {
namespace {

constexpr double kColumnTol = 1e-12;

bool SameColumn(const Vec& a, const Vec& b) { return SupDistance(a, b) <= kColumnTol; }

}  // namespace

const char* ToString(Closure closure) {
  switch (closure) {
    case Closure::kConservative: return "conservative";
    case Closure::kRelaxed: return "relaxed";
    case Closure::kAll: return "all";
  }
  return "?";
}

std::vector<DeviationEntry> EnumeratePlayerDeviations(const Instance& inst, std::size_t a,
                                                      const RhoProfile& rho, int player,
                                                      Closure closure, const CellSpace& cells,
                                                      const Vec& on_path) {
  const int own = inst.game.space.Coord(a, player);
  const std::vector<std::vector<int>> maps = EnumerateRhoMaps(inst, player);
  std::vector<DeviationEntry> out;
  for (int ai = 0; ai < inst.game.space.size(player); ++ai) {
    if (closure == Closure::kRelaxed && ai == own) continue;
    const DeviationTable t = BuildDeviationTable(inst, a, rho, player, ai, cells);
    const double payoff = inst.game.g(inst.game.space.With(a, player, ai), player);
    const std::size_t first_of_action = out.size();
    for (const std::vector<int>& m : maps) {
      if (ai == own && m == rho.maps[player]) continue;
      Vec col = t.Column(m, cells);
      if (closure == Closure::kConservative && ai == own && SameColumn(col, on_path)) continue;
      bool dup = false;
      for (std::size_t k = first_of_action; k < out.size() && !dup; ++k)
        dup = SameColumn(out[k].column, col);
      if (dup) continue;
      out.push_back({ai, m, std::move(col), payoff});
    }
  }
  return out;
}

DeviationSet EnumerateDeviations(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                 Closure closure, std::uint32_t silenced) {
  DeviationSet set;
  set.closure = closure;
  set.cells = CellSpace(inst.messages.space, silenced);
  set.on_path = MessageDistribution(inst, a, rho, set.cells);
  for (int i = 0; i < inst.n(); ++i)
    set.by_player.push_back(
        EnumeratePlayerDeviations(inst, a, rho, i, closure, set.cells, set.on_path));
  return set;
}

}  // namespace rgs
