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

#include "rgs/scoring.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "rgs/lp_core.h"

namespace rgs {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string ProfileLabel(const StageGame& game, std::size_t a) {
  std::string s = "(";
  for (int i = 0; i < game.n(); ++i) {
    if (i) s += ",";
    s += game.actions[i][game.space.Coord(a, i)];
  }
  return s + ")";
}

std::vector<Constraint> IncentiveRows(const StageGame& game, const DeviationSet& devs,
                                      double eta, std::size_t a, double scale_lhs,
                                      double scale_rhs) {
  const int n = game.n();
  const std::size_t nc = devs.cells.count();
  std::vector<Constraint> rows;
  for (int i = 0; i < n; ++i) {
    for (const DeviationEntry& e : devs.by_player[i]) {
      Constraint row;
      row.a.assign(n * nc, 0.0);
      for (std::size_t c = 0; c < nc; ++c)
        row.a[i * nc + c] = scale_lhs * (devs.on_path[c] - e.column[c]);
      row.rel = Relation::kGreaterEq;
      row.b = scale_rhs * (e.stage_payoff - game.g(a, i) + eta);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<std::uint32_t> DefaultSilencedSets(int n) {
  std::vector<std::uint32_t> out;
  if (n <= 3) {
    for (std::uint32_t m = 0; m < (1u << n); ++m) out.push_back(m);
    return out;
  }
  out.push_back(0);
  for (int i = 0; i < n; ++i) out.push_back(1u << i);
  out.push_back((1u << n) - 1);
  return out;
}

DirectionalValue SolveDirectional(const StageGame& game, const DeviationSet& devs,
                                  const Vec& lambda, double eta, std::size_t a) {
  const int n = game.n();
  const std::size_t nc = devs.cells.count();
  LinearProgram core;
  core.objective.assign(n * nc, 0.0);
  for (int i = 0; i < n; ++i)
    for (std::size_t c = 0; c < nc; ++c) core.objective[i * nc + c] = lambda[i] * devs.on_path[c];
  for (std::size_t c = 0; c < nc; ++c) {
    Vec row(n * nc, 0.0);
    for (int i = 0; i < n; ++i) row[i * nc + c] = lambda[i];
    core.Add(std::move(row), Relation::kLessEq, 0.0);
  }
  const std::vector<Constraint> pool = IncentiveRows(game, devs, eta, a, 1.0, 1.0);
  const LpResult r = SolveLazy(core, pool);
  DirectionalValue out;
  out.x.cells = devs.cells;
  out.x.n = n;
  if (r.status == LpStatus::kInfeasible) return out;
  if (r.status != LpStatus::kOptimal)
    throw NumericalError("scoring LP " + ToString(r.status) + " at profile " +
                         ProfileLabel(game, a));
  out.feasible = true;
  out.x.x = r.primal;
  out.v = game.payoff[a];
  for (int i = 0; i < n; ++i)
    for (std::size_t c = 0; c < nc; ++c) out.v[i] += devs.on_path[c] * r.primal[i * nc + c];
  // The LP value is bounded by zero; clamp roundoff so value <= lambda.g(a).
  out.value = Dot(lambda, game.payoff[a]) + std::min(r.value, 0.0);
  return out;
}

DirectionalValue SolveDirectional(const Instance& inst, const Vec& lambda, double eta,
                                  std::size_t a, const RhoProfile& rho, std::uint32_t silenced,
                                  Closure closure) {
  const DeviationSet devs = EnumerateDeviations(inst, a, rho, closure, silenced);
  return SolveDirectional(inst.game, devs, lambda, eta, a);
}

Scorer::Scorer(const Instance& inst, const PayoffGeometry& geometry, const ScoringOptions& options)
    : inst_(&inst), geometry_(&geometry), options_(options), rhos_(RhoSet(inst)) {
  if (options_.silenced_sets.empty()) options_.silenced_sets = DefaultSilencedSets(inst.n());
  if (options_.eta < 0) throw ValidationError("eta must be nonnegative");
  const std::size_t na = inst.game.num_profiles();
  lower_.resize(na);
  upper_.resize(na);
  ParallelFor(na, options_.exec, [&](std::size_t a) {
    for (std::size_t r = 0; r < rhos_.size(); ++r) {
      for (std::uint32_t t : options_.silenced_sets)
        lower_[a].push_back({a, static_cast<int>(r), t,
                             EnumerateDeviations(inst, a, rhos_[r], Closure::kConservative, t)});
      upper_[a].push_back(
          {a, static_cast<int>(r), 0u, EnumerateDeviations(inst, a, rhos_[r], Closure::kRelaxed)});
    }
  });
}

ScoreBracket Scorer::KEta(const Direction& dir) const {
  const StageGame& game = inst_->game;
  const Vec& l = dir.lambda;
  const std::size_t na = game.num_profiles();
  ScoreBracket out;
  out.dir = dir;

  double cap = kNegInf;
  for (std::size_t a = 0; a < na; ++a) cap = std::max(cap, Dot(l, game.payoff[a]));

  std::vector<std::size_t> lower_profiles;
  if (dir.kind != DirectionKind::kRegular || options_.all_profiles) {
    lower_profiles.resize(na);
    std::iota(lower_profiles.begin(), lower_profiles.end(), 0);
  } else {
    lower_profiles = geometry_->A_extreme;
    for (std::size_t a = 0; a < na; ++a)
      if (Dot(l, game.payoff[a]) >= cap - 1e-12 &&
          std::find(lower_profiles.begin(), lower_profiles.end(), a) == lower_profiles.end())
        lower_profiles.push_back(a);
  }
  std::vector<std::size_t> all(na);
  std::iota(all.begin(), all.end(), 0);

  out.k_lower = Search(l, lower_profiles, lower_, &out.witness);
  out.k_upper = Search(l, all, upper_, nullptr);
  return out;
}

double Scorer::KUpper(const Direction& dir) const {
  std::vector<std::size_t> all(inst_->game.num_profiles());
  std::iota(all.begin(), all.end(), 0);
  return Search(dir.lambda, std::move(all), upper_, nullptr);
}

// Profiles in decreasing lambda.g(a); a profile can never score above
// lambda.g(a), which prunes the search. Ties keep the first candidate.
double Scorer::Search(const Vec& l, std::vector<std::size_t> profiles,
                      const std::vector<std::vector<Candidate>>& table,
                      std::optional<ScoreWitness>* witness) const {
  const StageGame& game = inst_->game;
  std::stable_sort(profiles.begin(), profiles.end(), [&](std::size_t x, std::size_t y) {
    return Dot(l, game.payoff[x]) > Dot(l, game.payoff[y]);
  });
  double best = kNegInf;
  for (std::size_t a : profiles) {
    const double bound = Dot(l, game.payoff[a]);
    if (bound <= best + 1e-12) break;
    for (const Candidate& c : table[a]) {
      const DirectionalValue dv = SolveDirectional(game, c.devs, l, options_.eta, a);
      if (!dv.feasible || dv.value <= best + 1e-12) continue;
      best = dv.value;
      if (witness) *witness = ScoreWitness{a, c.rho_index, c.silenced, dv.x, dv.v};
      if (best >= bound - 1e-12) break;
    }
  }
  return best;
}

std::string Scorer::WitnessId(const ScoreWitness& w) const {
  return "a=" + ProfileLabel(inst_->game, w.a) + ";rho=" + rhos_[w.rho_index].name +
         ";silenced=" + std::to_string(w.silenced);
}

BoundingSet ComputeBoundingSet(const Scorer& scorer, const DirectionGrid& grid, Side side,
                               Exec exec) {
  BoundingSet out;
  out.grid = grid;
  out.side = side;
  out.brackets.resize(grid.size());
  ParallelFor(grid.size(), exec, [&](std::size_t k) { out.brackets[k] = scorer.KEta(grid.dirs[k]); });
  out.support.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    out.support[k] = side == Side::kLower ? out.brackets[k].k_lower : out.brackets[k].k_upper;
  out.Q = FromGridSupport(grid, out.support);
  return out;
}

double WitnessResidual(const Instance& inst, const std::vector<RhoProfile>& rhos,
                       const Vec& lambda, double eta, const ScoreWitness& w) {
  const StageGame& game = inst.game;
  const DeviationSet devs =
      EnumerateDeviations(inst, w.a, rhos[w.rho_index], Closure::kConservative, w.silenced);
  const int n = game.n();
  const std::size_t nc = devs.cells.count();
  double worst = 0.0;
  for (const Constraint& row : IncentiveRows(game, devs, eta, w.a, 1.0, 1.0))
    worst = std::max(worst, RowViolation(row, w.x.x));
  for (std::size_t c = 0; c < nc; ++c) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += lambda[i] * w.x.at(i, c);
    worst = std::max(worst, s);
  }
  for (int i = 0; i < n; ++i) {
    double v = game.g(w.a, i);
    for (std::size_t c = 0; c < nc; ++c) v += devs.on_path[c] * w.x.at(i, c);
    worst = std::max(worst, std::fabs(v - w.v[i]));
  }
  return worst;
}

void WriteSupportCsv(std::ostream& os, const Scorer& scorer, const BoundingSet& set) {
  const int n = set.grid.n;
  os << "# rgs support v1\n";
  for (int i = 0; i < n; ++i) os << "lambda_" << (i + 1) << ",";
  os << "k_lower,k_upper,witness\n";
  for (const ScoreBracket& b : set.brackets) {
    for (int i = 0; i < n; ++i) os << FormatDouble(b.dir.lambda[i]) << ",";
    os << FormatDouble(b.k_lower) << "," << FormatDouble(b.k_upper) << ",";
    os << (b.witness ? scorer.WitnessId(*b.witness) : "none") << "\n";
  }
}

}  // namespace rgs
