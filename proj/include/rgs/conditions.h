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

// Static conditions on the stage game and the monitoring structure:
// strict minmax bounds, the strict best-response property, detectability by
// transfers, identifiability along regular directions, and the combined
// folk-theorem verdict.

#ifndef RGS_CONDITIONS_H_
#define RGS_CONDITIONS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rgs/deviation.h"
#include "rgs/game_model.h"
#include "rgs/geometry.h"
#include "rgs/scoring.h"

namespace rgs {

// v_i = min_a max{g_i(a), max_{a_i' != a_i} g_i(a_i', a_-i) + eta}; the inner
// max over an empty deviation set is -inf.
struct MinmaxProfileReport {
  Vec v_underbar;
  std::vector<std::size_t> minimizer;
  std::vector<bool> has_minmax_profile;  // pure minmax 0 with eta-strict own deviations
  std::vector<bool> has_best_profile;    // max g_i with eta-strict own deviations
};

MinmaxProfileReport VUnderbar(const StageGame& game, double eta);

struct BestResponseReport {
  bool holds = false;
  std::vector<std::vector<std::size_t>> best_profiles;    // all qualifying, per player
  std::vector<std::vector<std::size_t>> minmax_profiles;
  int failing_player = -1;
  std::string failing_condition;
};

BestResponseReport BestResponseProperty(const StageGame& game, double eta);

struct PlayerDetectability {
  int player = 0;
  bool holds = false;
  Vec transfer;  // over cells, when holds
  std::vector<DeviationEntry> deviations;
  // When infeasible: mixture weights q over `deviations` (sum 1) with
  // sum_k q_k (p_on - p_k) = 0 and sum_k q_k (gain_k + eta) > 0.
  Vec mixture;
  double certificate_value = 0.0;
  double certificate_residual = 0.0;
};

struct DetectabilityReport {
  bool holds = false;
  CellSpace cells;
  std::vector<PlayerDetectability> players;
};

DetectabilityReport Detectability(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                  double eta);

// Detectability for every j != i with transfers that ignore player i's message.
DetectabilityReport EtaStarDetectability(const Instance& inst, std::size_t a,
                                         const RhoProfile& rho, int i, double eta);

enum class IdentifiabilityMode { kRankSufficient, kDualCertified, kFails };

const char* ToString(IdentifiabilityMode mode);

struct IdentifiabilityReport {
  IdentifiabilityMode mode = IdentifiabilityMode::kFails;
  std::size_t directions_tested = 0;
  // Failure certificate for the equality-budget program at `lambda`:
  // q[i] >= 0 over player i's deviations and d over messages with
  // sum_k q[i][k] (p_on - p_k)(m) = lambda_i d(m) and objective > 0.
  Vec lambda;
  std::vector<Vec> q;
  std::vector<std::vector<DeviationEntry>> deviations;
  Vec d;
  double dual_objective = 0.0;
  double certificate_residual = 0.0;
};

// Regular grid directions with at least two nonzero coordinates plus
// `per_plane` directions in every coordinate plane.
std::vector<Vec> IdentifiabilityDirections(const DirectionGrid& grid, int per_plane = 12);

// Pairwise rank test.
bool PairwiseFullRank(const Instance& inst, std::size_t a, const RhoProfile& rho);

IdentifiabilityReport Identifiability(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                      double eta, const std::vector<Vec>& lambdas, Exec exec);

struct ProfileCheck {
  std::size_t a = 0;
  bool holds = false;
  std::string rho_name;  // passing profile, or the first one tried
  DetectabilityReport detectability;
  std::optional<IdentifiabilityReport> identifiability;
};

struct EtaStarCheck {
  int player = 0;
  bool best = false;  // true: payoff-maximizing profile; false: minmax profile
  bool holds = false;
  std::size_t profile = 0;
  std::string rho_name;
};

struct FolkOptions {
  double eta = 0.0;
  int per_plane = 12;
  bool compute_hausdorff = true;
  ScoringOptions scoring;
  Exec exec = Exec::kParallel;
};

struct ConditionReport {
  double eta = 0.0;
  bool interior_nonempty = false;
  MinmaxProfileReport minmax;
  BestResponseReport best_response;
  std::vector<ProfileCheck> profiles;
  std::vector<EtaStarCheck> eta_star;
  bool folk_verdict = false;
  std::vector<std::string> reasons;
  std::optional<double> hausdorff;  // grid Hausdorff distance of the lower bounding set to V*
  std::optional<BoundingSet> bounding;
};

// Rho search order for the shared-profile checks: truthful, then listed
// candidates in file order, then the remaining enumerated profiles.
std::vector<RhoProfile> RhoSearchOrder(const Instance& inst);

ConditionReport FolkVerdict(const Instance& inst, const PayoffGeometry& geometry,
                            const DirectionGrid& grid, const FolkOptions& options);

void WriteConditionReport(std::ostream& os, const Instance& inst, const ConditionReport& r);

}  // namespace rgs

#endif  // RGS_CONDITIONS_H_
