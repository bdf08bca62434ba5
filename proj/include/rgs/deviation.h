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

// Unilateral one-shot deviations (a_i', rho_i') and their closures.

#ifndef RGS_DEVIATION_H_
#define RGS_DEVIATION_H_

#include <cstdint>
#include <vector>

#include "rgs/game_model.h"

namespace rgs {

// kConservative: every action deviation plus message-only deviations whose
//   column differs from on-path play (treats any change as nontrivial).
// kRelaxed: action deviations only.
// kAll: every deviation, including message-only ones that leave the column
//   unchanged; used by the detectability conditions.
enum class Closure { kConservative, kRelaxed, kAll };

struct DeviationEntry {
  int action = 0;
  std::vector<int> rho_map;
  Vec column;           // distribution over cells
  double stage_payoff;  // g_i(a_i', a_-i)
};

struct DeviationSet {
  Closure closure = Closure::kConservative;
  CellSpace cells;
  Vec on_path;
  std::vector<std::vector<DeviationEntry>> by_player;
};

// Columns are marginalized to the cells of `silenced` (bit i set drops
// player i's message), so the closure rules are evaluated on what a transfer
// indexed by those cells can see. Entries with equal (a_i', column) are
// merged; the first in lexicographic (a_i', rho_i') order is kept.
DeviationSet EnumerateDeviations(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                 Closure closure, std::uint32_t silenced = 0);

// Per-player variant for a single player.
std::vector<DeviationEntry> EnumeratePlayerDeviations(const Instance& inst, std::size_t a,
                                                      const RhoProfile& rho, int player,
                                                      Closure closure, const CellSpace& cells,
                                                      const Vec& on_path);

const char* ToString(Closure closure);

}  // namespace rgs

#endif  // RGS_DEVIATION_H_
