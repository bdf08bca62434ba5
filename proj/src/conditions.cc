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

#include "rgs/conditions.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rgs/lp_core.h"

namespace rgs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

std::string ProfileLabel(const StageGame& game, std::size_t a) {
  std::string s = "(";
  for (int i = 0; i < game.n(); ++i) {
    if (i) s += ",";
    s += game.actions[i][game.space.Coord(a, i)];
  }
  return s + ")";
}

// Smallest own-deviation loss g_i(a) - g_i(a_i', a_-i); +inf with no
// alternative actions.
double OwnGap(const StageGame& game, std::size_t a, int i) {
  double gap = kInf;
  const int own = game.space.Coord(a, i);
  for (int ai = 0; ai < game.space.size(i); ++ai)
    if (ai != own) gap = std::min(gap, game.g(a, i) - game.g(game.space.With(a, i, ai), i));
  return gap;
}

PlayerDetectability CheckPlayer(const StageGame& game, std::size_t a, int i,
                                std::vector<DeviationEntry> devs, const Vec& on_path,
                                double eta) {
  PlayerDetectability out;
  out.player = i;
  const std::size_t nc = on_path.size();
  LinearProgram core;
  core.objective.assign(nc, 0.0);
  std::vector<Constraint> pool;
  for (const DeviationEntry& e : devs) {
    Constraint row;
    row.a.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) row.a[c] = on_path[c] - e.column[c];
    row.rel = Relation::kGreaterEq;
    row.b = e.stage_payoff - game.g(a, i) + eta;
    pool.push_back(std::move(row));
  }
  out.deviations = std::move(devs);
  if (pool.empty()) {
    out.holds = true;
    out.transfer.assign(nc, 0.0);
    return out;
  }
  const FeasibilityResult f = FeasibleLazy(core, pool);
  if (f.status == LpStatus::kNumericalFailure)
    throw NumericalError("detectability LP failed at profile " + ProfileLabel(game, a));
  if (f.feasible()) {
    out.holds = true;
    out.transfer = f.point;
    return out;
  }
  out.mixture.assign(pool.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    out.mixture[k] = std::max(0.0, -f.certificate[k]);
    total += out.mixture[k];
  }
  for (double& q : out.mixture) q /= total;
  Vec comb(nc, 0.0);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    out.certificate_value += out.mixture[k] * pool[k].b;
    for (std::size_t c = 0; c < nc; ++c) comb[c] += out.mixture[k] * pool[k].a[c];
  }
  for (double v : comb) out.certificate_residual = std::max(out.certificate_residual, std::fabs(v));
  return out;
}

}  // namespace

MinmaxProfileReport VUnderbar(const StageGame& game, double eta) {
  const int n = game.n();
  const Vec minmax = PureMinmax(game);
  MinmaxProfileReport r;
  r.v_underbar.assign(n, kInf);
  r.minimizer.assign(n, 0);
  r.has_minmax_profile.assign(n, false);
  r.has_best_profile.assign(n, false);
  for (int i = 0; i < n; ++i) {
    double best_payoff = -kInf;
    for (std::size_t a = 0; a < game.num_profiles(); ++a) best_payoff = std::max(best_payoff, game.g(a, i));
    for (std::size_t a = 0; a < game.num_profiles(); ++a) {
      const double gap = OwnGap(game, a, i);
      const double dev = std::isinf(gap) ? -kInf : game.g(a, i) - gap + eta;
      const double val = std::max(game.g(a, i), dev);
      if (val < r.v_underbar[i]) {
        r.v_underbar[i] = val;
        r.minimizer[i] = a;
      }
      if (gap >= eta - kTieTol) {
        if (std::fabs(game.g(a, i) - minmax[i]) <= kTieTol) r.has_minmax_profile[i] = true;
        if (game.g(a, i) >= best_payoff - kTieTol) r.has_best_profile[i] = true;
      }
    }
  }
  return r;
}

BestResponseReport BestResponseProperty(const StageGame& game, double eta) {
  const int n = game.n();
  const Vec minmax = PureMinmax(game);
  BestResponseReport r;
  r.best_profiles.resize(n);
  r.minmax_profiles.resize(n);
  r.holds = true;
  for (int i = 0; i < n; ++i) {
    double best_payoff = -kInf;
    for (std::size_t a = 0; a < game.num_profiles(); ++a) best_payoff = std::max(best_payoff, game.g(a, i));
    for (std::size_t a = 0; a < game.num_profiles(); ++a) {
      if (OwnGap(game, a, i) < eta - kTieTol) continue;
      if (game.g(a, i) >= best_payoff - kTieTol) r.best_profiles[i].push_back(a);
      if (std::fabs(game.g(a, i) - minmax[i]) <= kTieTol) r.minmax_profiles[i].push_back(a);
    }
    if (r.holds && r.best_profiles[i].empty()) {
      r.holds = false;
      r.failing_player = i;
      r.failing_condition = "no payoff-maximizing profile with strict own deviations";
    } else if (r.holds && r.minmax_profiles[i].empty()) {
      r.holds = false;
      r.failing_player = i;
      r.failing_condition = "no minmax profile with strict own deviations";
    }
  }
  return r;
}

DetectabilityReport Detectability(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                  double eta) {
  DetectabilityReport r;
  r.cells = CellSpace(inst.messages.space, 0);
  const Vec on_path = MessageDistribution(inst, a, rho, r.cells);
  r.holds = true;
  for (int i = 0; i < inst.n(); ++i) {
    r.players.push_back(CheckPlayer(
        inst.game, a, i, EnumeratePlayerDeviations(inst, a, rho, i, Closure::kAll, r.cells, on_path),
        on_path, eta));
    r.holds = r.holds && r.players.back().holds;
  }
  return r;
}

DetectabilityReport EtaStarDetectability(const Instance& inst, std::size_t a,
                                         const RhoProfile& rho, int i, double eta) {
  DetectabilityReport r;
  r.cells = CellSpace(inst.messages.space, 1u << i);
  const Vec on_path = MessageDistribution(inst, a, rho, r.cells);
  r.holds = true;
  for (int j = 0; j < inst.n(); ++j) {
    if (j == i) continue;
    r.players.push_back(CheckPlayer(
        inst.game, a, j, EnumeratePlayerDeviations(inst, a, rho, j, Closure::kAll, r.cells, on_path),
        on_path, eta));
    r.holds = r.holds && r.players.back().holds;
  }
  return r;
}

const char* ToString(IdentifiabilityMode mode) {
  switch (mode) {
    case IdentifiabilityMode::kRankSufficient: return "RankSufficient";
    case IdentifiabilityMode::kDualCertified: return "DualCertified";
    case IdentifiabilityMode::kFails: return "Fails";
  }
  return "?";
}

std::vector<Vec> IdentifiabilityDirections(const DirectionGrid& grid, int per_plane) {
  std::vector<Vec> out;
  for (const Direction& d : grid.dirs) {
    int nonzero = 0;
    for (double x : d.lambda) nonzero += std::fabs(x) > kTieTol;
    if (nonzero >= 2) out.push_back(d.lambda);
  }
  if (grid.n >= 3)
    for (Vec& l : PlaneDirections(grid.n, per_plane)) out.push_back(std::move(l));
  return out;
}

bool PairwiseFullRank(const Instance& inst, std::size_t a, const RhoProfile& rho) {
  const CellSpace cells(inst.messages.space, 0);
  const Vec on_path = MessageDistribution(inst, a, rho, cells);
  const int n = inst.n();
  std::vector<std::vector<DeviationEntry>> devs(n);
  for (int i = 0; i < n; ++i)
    devs[i] = EnumeratePlayerDeviations(inst, a, rho, i, Closure::kAll, cells, on_path);
  const std::size_t nc = cells.count();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::size_t rows = devs[i].size() + devs[j].size();
      if (rows > nc) return false;
      if (rows == 0) continue;
      Eigen::MatrixXd m(rows, nc);
      std::size_t r = 0;
      for (int p : {i, j})
        for (const DeviationEntry& e : devs[p]) {
          for (std::size_t c = 0; c < nc; ++c) m(r, c) = e.column[c] - on_path[c];
          ++r;
        }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      const Eigen::VectorXd sv = svd.singularValues();
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) <= 1e-8) return false;
    }
  }
  return true;
}

namespace {

// Equality-budget program for one lambda; fills the failure certificate.
bool EqualityBudgetFeasible(const StageGame& game, std::size_t a, const Vec& on_path,
                            const std::vector<std::vector<DeviationEntry>>& devs,
                            const Vec& lambda, double eta, IdentifiabilityReport* fail) {
  const int n = game.n();
  const std::size_t nc = on_path.size();
  LinearProgram core;
  core.objective.assign(n * nc, 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    Vec row(n * nc, 0.0);
    for (int i = 0; i < n; ++i) row[i * nc + c] = lambda[i];
    core.Add(std::move(row), Relation::kEqual, 0.0);
  }
  std::vector<Constraint> pool;
  std::vector<std::pair<int, std::size_t>> owner;
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < devs[i].size(); ++k) {
      const DeviationEntry& e = devs[i][k];
      Constraint row;
      row.a.assign(n * nc, 0.0);
      for (std::size_t c = 0; c < nc; ++c) row.a[i * nc + c] = on_path[c] - e.column[c];
      row.rel = Relation::kGreaterEq;
      row.b = e.stage_payoff - game.g(a, i) + eta;
      pool.push_back(std::move(row));
      owner.push_back({i, k});
    }
  }
  const FeasibilityResult f = FeasibleLazy(core, pool);
  if (f.status == LpStatus::kNumericalFailure)
    throw NumericalError("identifiability LP failed at profile " + ProfileLabel(game, a));
  if (f.feasible()) return true;
  if (!fail) return false;
  fail->lambda = lambda;
  fail->q.assign(n, Vec());
  for (int i = 0; i < n; ++i) fail->q[i].assign(devs[i].size(), 0.0);
  fail->d.assign(nc, 0.0);
  for (std::size_t c = 0; c < nc; ++c) fail->d[c] = f.certificate[c];
  fail->dual_objective = 0.0;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const double q = std::max(0.0, -f.certificate[nc + k]);
    fail->q[owner[k].first][owner[k].second] = q;
    fail->dual_objective += q * pool[k].b;
  }
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < nc; ++c) {
      double s = -lambda[i] * fail->d[c];
      for (std::size_t k = 0; k < devs[i].size(); ++k)
        s += fail->q[i][k] * (on_path[c] - devs[i][k].column[c]);
      res = std::max(res, std::fabs(s));
    }
  }
  fail->certificate_residual = res;
  fail->deviations = devs;
  return false;
}

}  // namespace

IdentifiabilityReport Identifiability(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                      double eta, const std::vector<Vec>& lambdas, Exec exec) {
  IdentifiabilityReport r;
  if (PairwiseFullRank(inst, a, rho)) {
    r.mode = IdentifiabilityMode::kRankSufficient;
    return r;
  }
  const CellSpace cells(inst.messages.space, 0);
  const Vec on_path = MessageDistribution(inst, a, rho, cells);
  const int n = inst.n();
  std::vector<std::vector<DeviationEntry>> devs(n);
  for (int i = 0; i < n; ++i)
    devs[i] = EnumeratePlayerDeviations(inst, a, rho, i, Closure::kAll, cells, on_path);
  // Blocks are evaluated in order so the reported failure is always the
  // lowest-index failing direction regardless of the execution mode.
  constexpr std::size_t kBlock = 32;
  for (std::size_t start = 0; start < lambdas.size(); start += kBlock) {
    const std::size_t len = std::min(kBlock, lambdas.size() - start);
    std::vector<char> ok(len, 1);
    ParallelFor(len, exec, [&](std::size_t k) {
      ok[k] = EqualityBudgetFeasible(inst.game, a, on_path, devs, lambdas[start + k], eta, nullptr);
    });
    for (std::size_t k = 0; k < len; ++k) {
      if (ok[k]) continue;
      r.mode = IdentifiabilityMode::kFails;
      r.directions_tested = start + k + 1;
      EqualityBudgetFeasible(inst.game, a, on_path, devs, lambdas[start + k], eta, &r);
      return r;
    }
  }
  r.mode = IdentifiabilityMode::kDualCertified;
  r.directions_tested = lambdas.size();
  return r;
}

std::vector<RhoProfile> RhoSearchOrder(const Instance& inst) {
  std::vector<RhoProfile> all = RhoSet(inst);
  std::stable_partition(all.begin(), all.end(),
                        [&](const RhoProfile& r) { return IsTruthful(inst, r); });
  return all;
}

ConditionReport FolkVerdict(const Instance& inst, const PayoffGeometry& geometry,
                            const DirectionGrid& grid, const FolkOptions& options) {
  const StageGame& game = inst.game;
  if (!game.normalized) throw ValidationError("folk verdict needs a normalized game");
  const double eta = options.eta;
  ConditionReport r;
  r.eta = eta;
  r.interior_nonempty = !geometry.V_star.empty && ChebyshevCenter(geometry.V_star).radius > 1e-9;
  if (!r.interior_nonempty) r.reasons.push_back("int V*(G) empty");
  r.minmax = VUnderbar(game, eta);
  r.best_response = BestResponseProperty(game, eta);
  if (!r.best_response.holds)
    r.reasons.push_back("best-response property fails for player " +
                        std::to_string(r.best_response.failing_player) + ": " +
                        r.best_response.failing_condition);

  const std::vector<RhoProfile> order = RhoSearchOrder(inst);
  const std::vector<Vec> lambdas = IdentifiabilityDirections(grid, options.per_plane);
  bool profiles_ok = true;
  for (std::size_t a : geometry.A_extreme) {
    ProfileCheck pc;
    pc.a = a;
    bool recorded = false;
    for (const RhoProfile& rho : order) {
      DetectabilityReport det = Detectability(inst, a, rho, eta);
      std::optional<IdentifiabilityReport> id;
      if (det.holds) id = Identifiability(inst, a, rho, eta, lambdas, options.exec);
      const bool pass = det.holds && id->mode != IdentifiabilityMode::kFails;
      if (pass || !recorded) {
        pc.rho_name = rho.name;
        pc.detectability = std::move(det);
        pc.identifiability = std::move(id);
        pc.holds = pass;
        recorded = true;
      }
      if (pass) break;
    }
    if (!pc.holds) {
      profiles_ok = false;
      r.reasons.push_back("no shared message strategy passes detectability and "
                          "identifiability at " + ProfileLabel(game, a));
    }
    r.profiles.push_back(std::move(pc));
  }

  bool star_ok = r.best_response.holds;
  if (r.best_response.holds) {
    for (int i = 0; i < inst.n(); ++i) {
      for (bool best : {true, false}) {
        EtaStarCheck ec;
        ec.player = i;
        ec.best = best;
        const auto& cands = best ? r.best_response.best_profiles[i] : r.best_response.minmax_profiles[i];
        ec.profile = cands.front();
        ec.rho_name = order.front().name;
        for (std::size_t a : cands) {
          for (const RhoProfile& rho : order) {
            if (EtaStarDetectability(inst, a, rho, i, eta).holds) {
              ec.holds = true;
              ec.profile = a;
              ec.rho_name = rho.name;
              break;
            }
          }
          if (ec.holds) break;
        }
        if (!ec.holds) {
          star_ok = false;
          r.reasons.push_back(std::string("eta*-detectability fails for player ") +
                              std::to_string(i) + " at every " +
                              (best ? "payoff-maximizing" : "minmax") + " profile");
        }
        r.eta_star.push_back(ec);
      }
    }
  }
  r.folk_verdict = r.interior_nonempty && r.best_response.holds && profiles_ok && star_ok;

  if (options.compute_hausdorff && !geometry.V_star.empty) {
    ScoringOptions so = options.scoring;
    so.eta = eta;
    so.exec = options.exec;
    const Scorer scorer(inst, geometry, so);
    r.bounding = ComputeBoundingSet(scorer, grid, Side::kLower, options.exec);
    r.hausdorff = GridHausdorff(r.bounding->Q, geometry.V_star);
  }
  return r;
}

void WriteConditionReport(std::ostream& os, const Instance& inst, const ConditionReport& r) {
  const StageGame& game = inst.game;
  const int n = game.n();
  os << "[summary]\n";
  os << "eta," << FormatDouble(r.eta) << "\n";
  os << "folk_verdict," << (r.folk_verdict ? "true" : "false") << "\n";
  os << "interior_nonempty," << (r.interior_nonempty ? "true" : "false") << "\n";
  if (r.hausdorff) os << "hausdorff_lower_vs_vstar," << FormatDouble(*r.hausdorff) << "\n";
  for (const std::string& reason : r.reasons) os << "reason," << reason << "\n";
  os << "\n[minmax]\nplayer,v_underbar,minimizer,strict_minmax_profile,strict_best_profile\n";
  for (int i = 0; i < n; ++i)
    os << i << "," << FormatDouble(r.minmax.v_underbar[i]) << ","
       << ProfileLabel(game, r.minmax.minimizer[i]) << ","
       << (r.minmax.has_minmax_profile[i] ? "true" : "false") << ","
       << (r.minmax.has_best_profile[i] ? "true" : "false") << "\n";
  os << "\n[best_response]\nholds," << (r.best_response.holds ? "true" : "false") << "\n";
  for (int i = 0; i < n; ++i) {
    os << "best_profiles_" << i;
    for (std::size_t a : r.best_response.best_profiles[i]) os << "," << ProfileLabel(game, a);
    os << "\nminmax_profiles_" << i;
    for (std::size_t a : r.best_response.minmax_profiles[i]) os << "," << ProfileLabel(game, a);
    os << "\n";
  }
  os << "\n[profiles]\nprofile,holds,rho,detectability,identifiability\n";
  for (const ProfileCheck& pc : r.profiles)
    os << ProfileLabel(game, pc.a) << "," << (pc.holds ? "true" : "false") << "," << pc.rho_name
       << "," << (pc.detectability.holds ? "true" : "false") << ","
       << (pc.identifiability ? ToString(pc.identifiability->mode) : "skipped") << "\n";
  os << "\n[detectability_certificates]\nprofile,player,certificate_value,residual,mixture\n";
  for (const ProfileCheck& pc : r.profiles) {
    for (const PlayerDetectability& pd : pc.detectability.players) {
      if (pd.holds) continue;
      os << ProfileLabel(game, pc.a) << "," << pd.player << "," << FormatDouble(pd.certificate_value)
         << "," << FormatDouble(pd.certificate_residual) << ",";
      bool first = true;
      for (std::size_t k = 0; k < pd.mixture.size(); ++k) {
        if (pd.mixture[k] <= 1e-12) continue;
        os << (first ? "" : " ") << game.actions[pd.player][pd.deviations[k].action] << "/";
        for (int m : pd.deviations[k].rho_map) os << m;
        os << ":" << FormatDouble(pd.mixture[k]);
        first = false;
      }
      os << "\n";
    }
  }
  os << "\n[identifiability_certificates]\nprofile,lambda,dual_objective,residual\n";
  for (const ProfileCheck& pc : r.profiles) {
    if (!pc.identifiability || pc.identifiability->mode != IdentifiabilityMode::kFails) continue;
    const IdentifiabilityReport& id = *pc.identifiability;
    os << ProfileLabel(game, pc.a) << ",";
    for (std::size_t i = 0; i < id.lambda.size(); ++i)
      os << (i ? " " : "") << FormatDouble(id.lambda[i]);
    os << "," << FormatDouble(id.dual_objective) << "," << FormatDouble(id.certificate_residual)
       << "\n";
  }
  os << "\n[eta_star]\nplayer,target,holds,profile,rho\n";
  for (const EtaStarCheck& ec : r.eta_star)
    os << ec.player << "," << (ec.best ? "best" : "minmax") << "," << (ec.holds ? "true" : "false")
       << "," << ProfileLabel(game, ec.profile) << "," << ec.rho_name << "\n";
}

}  // namespace rgs
