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

// Stage game, private monitoring, public messages and the derived static
// objects (induced message kernels, pure minmax, feasible payoff geometry).

#ifndef RGS_GAME_MODEL_H_
#define RGS_GAME_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rgs/common.h"
#include "rgs/geometry.h"

namespace rgs {

// Mixed-radix index over profiles; the last coordinate varies fastest.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<int> sizes);

  int dims() const { return static_cast<int>(sizes_.size()); }
  int size(int i) const { return sizes_[i]; }
  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t count() const { return count_; }
  std::size_t stride(int i) const { return stride_[i]; }

  std::size_t Encode(const std::vector<int>& p) const;
  std::vector<int> Decode(std::size_t index) const;
  int Coord(std::size_t index, int i) const {
    return static_cast<int>((index / stride_[i]) % sizes_[i]);
  }
  std::size_t With(std::size_t index, int i, int value) const {
    return index - Coord(index, i) * stride_[i] + value * stride_[i];
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> stride_;
  std::size_t count_ = 1;
};

struct StageGame {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> actions;
  ProfileSpace space;
  std::vector<Vec> payoff;  // payoff[a][i]
  bool normalized = false;

  int n() const { return space.dims(); }
  std::size_t num_profiles() const { return space.count(); }
  double g(std::size_t a, int i) const { return payoff[a][i]; }
};

struct MonitoringStructure {
  std::vector<std::vector<std::string>> signals;
  ProfileSpace space;
  Vec kernel;  // kernel[a * |S| + s] = p(s|a)

  double p(std::size_t a, std::size_t s) const { return kernel[a * space.count() + s]; }
};

// maps[i][s_i] is the message player i sends after observing signal s_i.
struct RhoProfile {
  std::string name;
  std::vector<std::vector<int>> maps;
};

struct MessageModel {
  std::vector<std::vector<std::string>> messages;
  ProfileSpace space;
  std::vector<RhoProfile> candidate_rhos;
  std::size_t enumeration_cap = 10000;
};

struct Instance {
  StageGame game;
  MonitoringStructure monitoring;
  MessageModel messages;

  int n() const { return game.n(); }
};

// Checks every type invariant; throws ValidationError naming the offending
// tensor index.
void ValidateInstance(const Instance& inst);

// When every M_i equals S_i (same labels), prepends the identity profile
// named "truthful" unless an identical profile is already listed.
void EnsureTruthful(Instance* inst);

bool IsTruthful(const Instance& inst, const RhoProfile& rho);

// Pure-strategy minmax min_{a_-i} max_{a_i} g_i(a) per player.
Vec PureMinmax(const StageGame& game);

struct NormalizeResult {
  StageGame game;
  Vec subtracted;
};

NormalizeResult NormalizeMinmax(const StageGame& game);

// Message cells with the coordinates of silenced players dropped. Transfer
// schemes indexed by cells ignore the silenced players' messages.
class CellSpace {
 public:
  CellSpace() = default;
  CellSpace(const ProfileSpace& messages, std::uint32_t silenced);

  std::uint32_t silenced() const { return silenced_; }
  bool Silenced(int i) const { return (silenced_ >> i) & 1u; }
  std::size_t count() const { return cells_.count(); }
  std::size_t CellOf(std::size_t m) const { return cell_of_[m]; }
  // Stride of player i's message inside the cell index; 0 when silenced.
  std::size_t stride(int i) const { return stride_[i]; }
  const ProfileSpace& cells() const { return cells_; }

 private:
  std::uint32_t silenced_ = 0;
  ProfileSpace cells_;
  std::vector<std::size_t> stride_;
  std::vector<std::size_t> cell_of_;
};

// Distribution of message profiles (marginalized to the cells) for (a, rho).
Vec MessageDistribution(const Instance& inst, std::size_t a, const RhoProfile& rho,
                        const CellSpace& cells);

// For a deviation of player i to action `action` (others keep a_-i, rho_-i):
// table[s_i * cells + c] = probability of own signal s_i together with cell c
// whose player-i coordinate is zero. Columns for any rho_i' follow by
// shifting each s_i slice by rho_i'(s_i) * stride(i).
struct DeviationTable {
  int player = 0;
  int action = 0;
  std::size_t cells = 0;
  int num_signals = 0;
  Vec table;

  Vec Column(const std::vector<int>& rho_map, const CellSpace& space) const;
};

DeviationTable BuildDeviationTable(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                   int player, int action, const CellSpace& cells);

// All maps S_i -> M_i in lexicographic order. Throws ValidationError when
// |M_i|^|S_i| exceeds the enumeration cap.
std::vector<std::vector<int>> EnumerateRhoMaps(const Instance& inst, int player);

// The on-path profile set: every profile when prod_i |M_i|^|S_i| is within
// the cap (truthful and listed candidates first, in file order), otherwise
// the listed candidates only.
std::vector<RhoProfile> RhoSet(const Instance& inst);

struct KernelColumn {
  int player;
  int action;
  std::vector<int> rho_map;
  Vec column;
};

struct InducedKernel {
  Vec on_path;
  std::vector<KernelColumn> by_deviation;
};

// Full message space, every unilateral deviation (a_i', rho_i') != (a_i, rho_i).
InducedKernel ComputeInducedKernel(const Instance& inst, std::size_t a, const RhoProfile& rho);

struct PayoffGeometry {
  ConvexSetRep V;
  ConvexSetRep V_star;
  std::vector<std::size_t> A_extreme;
  bool degenerate = false;  // V has dimension < n
};

PayoffGeometry ComputePayoffGeometry(const StageGame& game, const DirectionGrid& grid);

// True when g(a) is not a convex combination of the other distinct payoff
// vectors (LP separation, tolerance 1e-9).
bool IsExtremePayoff(const StageGame& game, std::size_t a);

}  // namespace rgs

#endif  // RGS_GAME_MODEL_H_
