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

// Directional scoring programs and the bounding set they define.
//
// For a fixed profile (a, rho) the program maximizes lambda . v over
// transfers x_i(c), c ranging over message cells, subject to
//   sum_c x_i(c) (p_on(c) - p_dev(c)) >= g_i(dev) - g_i(a) + eta
//   sum_i lambda_i x_i(c) <= 0
// with v = g(a) + E_on[x]. The lower side uses the conservative deviation
// closure and also tries transfers that ignore a subset T of the players'
// messages (message-only deviations of players in T then leave x unchanged
// and are trivial); the upper side uses the relaxed closure on full cells.

#ifndef RGS_SCORING_H_
#define RGS_SCORING_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rgs/deviation.h"
#include "rgs/game_model.h"
#include "rgs/geometry.h"

namespace rgs {

enum class Side { kLower, kUpper };

struct TransferScheme {
  CellSpace cells;
  int n = 0;
  Vec x;  // x[i * cells + c]

  double at(int i, std::size_t c) const { return x[i * cells.count() + c]; }
};

struct DirectionalValue {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
  TransferScheme x;
  Vec v;
};

// One program for fixed (a, rho, silenced set, closure).
DirectionalValue SolveDirectional(const Instance& inst, const Vec& lambda, double eta,
                                  std::size_t a, const RhoProfile& rho, std::uint32_t silenced,
                                  Closure closure);

// Same program from a precomputed deviation set.
DirectionalValue SolveDirectional(const StageGame& game, const DeviationSet& devs,
                                  const Vec& lambda, double eta, std::size_t a);

struct ScoreWitness {
  std::size_t a = 0;
  int rho_index = 0;
  std::uint32_t silenced = 0;
  TransferScheme x;
  Vec v;
};

struct ScoreBracket {
  Direction dir;
  double k_lower = -std::numeric_limits<double>::infinity();
  double k_upper = -std::numeric_limits<double>::infinity();
  std::optional<ScoreWitness> witness;  // attains k_lower
};

struct ScoringOptions {
  double eta = 0.0;
  bool all_profiles = false;  // regular directions: search all of A
  // Silenced sets tried on the lower side; empty selects every subset for
  // n <= 3, else the empty set, singletons and everyone.
  std::vector<std::uint32_t> silenced_sets;
  Exec exec = Exec::kParallel;
};

std::vector<std::uint32_t> DefaultSilencedSets(int n);

// Precomputes deviation sets for every candidate and answers direction
// queries. Immutable after construction; queries are thread-safe.
class Scorer {
 public:
  Scorer(const Instance& inst, const PayoffGeometry& geometry, const ScoringOptions& options);

  ScoreBracket KEta(const Direction& dir) const;
  // The upper score alone; equals KEta(dir).k_upper.
  double KUpper(const Direction& dir) const;
  const std::vector<RhoProfile>& rhos() const { return rhos_; }
  const Instance& instance() const { return *inst_; }
  double eta() const { return options_.eta; }
  std::string WitnessId(const ScoreWitness& w) const;

 private:
  struct Candidate {
    std::size_t a;
    int rho_index;
    std::uint32_t silenced;
    DeviationSet devs;
  };
  double Search(const Vec& lambda, std::vector<std::size_t> profiles,
                const std::vector<std::vector<Candidate>>& table,
                std::optional<ScoreWitness>* witness) const;

  const Instance* inst_;
  const PayoffGeometry* geometry_;
  ScoringOptions options_;
  std::vector<RhoProfile> rhos_;
  // lower_[a] and upper_[a] list candidates in (rho, silenced) order.
  std::vector<std::vector<Candidate>> lower_, upper_;
};

struct BoundingSet {
  DirectionGrid grid;
  Side side = Side::kLower;
  std::vector<ScoreBracket> brackets;
  Vec support;
  ConvexSetRep Q;
};

BoundingSet ComputeBoundingSet(const Scorer& scorer, const DirectionGrid& grid, Side side,
                               Exec exec);

// Largest violation of the conservative program's rows by a stored witness,
// recomputed from raw inputs (including the identity v = g(a) + E[x]).
double WitnessResidual(const Instance& inst, const std::vector<RhoProfile>& rhos,
                       const Vec& lambda, double eta, const ScoreWitness& w);

// Header "# rgs support v1" then lambda_1..n,k_lower,k_upper,witness.
void WriteSupportCsv(std::ostream& os, const Scorer& scorer, const BoundingSet& set);

}  // namespace rgs

#endif  // RGS_SCORING_H_
