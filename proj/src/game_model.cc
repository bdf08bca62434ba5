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

#include "rgs/game_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rgs/lp_core.h"

namespace rgs {

ProfileSpace::ProfileSpace(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  stride_.assign(sizes_.size(), 1);
  count_ = 1;
  for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
    if (sizes_[i] <= 0) throw ValidationError("profile coordinate with empty set");
    stride_[i] = count_;
    count_ *= static_cast<std::size_t>(sizes_[i]);
  }
}

std::size_t ProfileSpace::Encode(const std::vector<int>& p) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) idx += p[i] * stride_[i];
  return idx;
}

std::vector<int> ProfileSpace::Decode(std::size_t index) const {
  std::vector<int> p(sizes_.size());
  for (int i = 0; i < dims(); ++i) p[i] = Coord(index, i);
  return p;
}

namespace {

std::string ProfileName(const ProfileSpace& space, std::size_t idx) {
  std::string s = "(";
  const std::vector<int> p = space.Decode(idx);
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

}  // namespace

void ValidateInstance(const Instance& inst) {
  const StageGame& g = inst.game;
  const int n = g.n();
  if (n < 1) throw ValidationError("game has no players");
  if (static_cast<int>(g.actions.size()) != n || g.payoff.size() != g.num_profiles())
    throw ValidationError("dimension mismatch: payoff tensor");
  for (std::size_t a = 0; a < g.num_profiles(); ++a) {
    if (static_cast<int>(g.payoff[a].size()) != n)
      throw ValidationError("dimension mismatch: payoff at profile " + ProfileName(g.space, a));
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(g.payoff[a][i]))
        throw ValidationError("payoff not finite at profile " + ProfileName(g.space, a) +
                              " player " + std::to_string(i));
  }
  const MonitoringStructure& mon = inst.monitoring;
  if (mon.space.dims() != n) throw ValidationError("dimension mismatch: signals");
  const std::size_t ns = mon.space.count();
  if (mon.kernel.size() != g.num_profiles() * ns)
    throw ValidationError("dimension mismatch: kernel has " + std::to_string(mon.kernel.size()) +
                          " entries, expected " + std::to_string(g.num_profiles() * ns));
  for (std::size_t a = 0; a < g.num_profiles(); ++a) {
    double sum = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      const double p = mon.p(a, s);
      if (!(p >= 0.0) || !std::isfinite(p))
        throw ValidationError("kernel row not a distribution: negative entry at action profile " +
                              ProfileName(g.space, a) + " signal profile " +
                              ProfileName(mon.space, s));
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw ValidationError("kernel row not a distribution at action profile " +
                            ProfileName(g.space, a) + " (sum " + FormatDouble(sum) + ")");
    for (int i = 0; i < n; ++i) {
      Vec marginal(mon.space.size(i), 0.0);
      for (std::size_t s = 0; s < ns; ++s) marginal[mon.space.Coord(s, i)] += mon.p(a, s);
      for (int si = 0; si < mon.space.size(i); ++si)
        if (!(marginal[si] > 0.0))
          throw ValidationError("full-support violation: player " + std::to_string(i) +
                                " signal " + std::to_string(si) + " at action profile " +
                                ProfileName(g.space, a));
    }
  }
  const MessageModel& msg = inst.messages;
  if (msg.space.dims() != n) throw ValidationError("dimension mismatch: messages");
  if (msg.enumeration_cap == 0) throw ValidationError("enumeration_cap must be positive");
  for (const RhoProfile& rho : msg.candidate_rhos) {
    if (static_cast<int>(rho.maps.size()) != n)
      throw ValidationError("message strategy '" + rho.name + "' has wrong player count");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rho.maps[i].size()) != mon.space.size(i))
        throw ValidationError("message strategy '" + rho.name + "' not total for player " +
                              std::to_string(i));
      for (int m : rho.maps[i])
        if (m < 0 || m >= msg.space.size(i))
          throw ValidationError("message strategy '" + rho.name + "' uses unknown message");
    }
  }
  bool same = true;
  for (int i = 0; i < n; ++i)
    if (msg.messages[i] != mon.signals[i]) same = false;
  if (same) {
    bool found = false;
    for (const RhoProfile& rho : msg.candidate_rhos)
      if (IsTruthful(inst, rho)) found = true;
    if (!found) throw ValidationError("messages equal signals but the truthful profile is absent");
  }
}

bool IsTruthful(const Instance& inst, const RhoProfile& rho) {
  for (int i = 0; i < inst.n(); ++i) {
    if (inst.messages.messages[i] != inst.monitoring.signals[i]) return false;
    for (std::size_t s = 0; s < rho.maps[i].size(); ++s)
      if (rho.maps[i][s] != static_cast<int>(s)) return false;
  }
  return true;
}

void EnsureTruthful(Instance* inst) {
  const int n = inst->n();
  for (int i = 0; i < n; ++i)
    if (inst->messages.messages[i] != inst->monitoring.signals[i]) return;
  for (const RhoProfile& rho : inst->messages.candidate_rhos)
    if (rho.maps.size() == static_cast<std::size_t>(n) && IsTruthful(*inst, rho)) return;
  RhoProfile truthful;
  truthful.name = "truthful";
  for (int i = 0; i < n; ++i) {
    std::vector<int> id(inst->monitoring.signals[i].size());
    for (std::size_t s = 0; s < id.size(); ++s) id[s] = static_cast<int>(s);
    truthful.maps.push_back(std::move(id));
  }
  inst->messages.candidate_rhos.insert(inst->messages.candidate_rhos.begin(), truthful);
}

Vec PureMinmax(const StageGame& game) {
  const int n = game.n();
  Vec out(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < game.num_profiles(); ++a) {
      if (game.space.Coord(a, i) != 0) continue;  // one representative per a_-i
      double best = -std::numeric_limits<double>::infinity();
      for (int ai = 0; ai < game.space.size(i); ++ai)
        best = std::max(best, game.g(game.space.With(a, i, ai), i));
      out[i] = std::min(out[i], best);
    }
  }
  return out;
}

NormalizeResult NormalizeMinmax(const StageGame& game) {
  NormalizeResult r;
  r.subtracted = PureMinmax(game);
  r.game = game;
  for (Vec& g : r.game.payoff)
    for (int i = 0; i < game.n(); ++i) g[i] -= r.subtracted[i];
  r.game.normalized = true;
  return r;
}

CellSpace::CellSpace(const ProfileSpace& messages, std::uint32_t silenced) : silenced_(silenced) {
  const int n = messages.dims();
  std::vector<int> sizes;
  for (int i = 0; i < n; ++i) sizes.push_back(Silenced(i) ? 1 : messages.size(i));
  cells_ = ProfileSpace(sizes);
  stride_.assign(n, 0);
  for (int i = 0; i < n; ++i) stride_[i] = Silenced(i) ? 0 : cells_.stride(i);
  cell_of_.resize(messages.count());
  for (std::size_t m = 0; m < messages.count(); ++m) {
    std::size_t c = 0;
    for (int i = 0; i < n; ++i) c += messages.Coord(m, i) * stride_[i];
    cell_of_[m] = c;
  }
}

Vec MessageDistribution(const Instance& inst, std::size_t a, const RhoProfile& rho,
                        const CellSpace& cells) {
  const MonitoringStructure& mon = inst.monitoring;
  const int n = inst.n();
  Vec out(cells.count(), 0.0);
  for (std::size_t s = 0; s < mon.space.count(); ++s) {
    const double p = mon.p(a, s);
    if (p == 0.0) continue;
    std::size_t c = 0;
    for (int i = 0; i < n; ++i) c += rho.maps[i][mon.space.Coord(s, i)] * cells.stride(i);
    out[c] += p;
  }
  return out;
}

DeviationTable BuildDeviationTable(const Instance& inst, std::size_t a, const RhoProfile& rho,
                                   int player, int action, const CellSpace& cells) {
  const MonitoringStructure& mon = inst.monitoring;
  const int n = inst.n();
  DeviationTable t;
  t.player = player;
  t.action = action;
  t.cells = cells.count();
  t.num_signals = mon.space.size(player);
  t.table.assign(t.num_signals * t.cells, 0.0);
  const std::size_t dev = inst.game.space.With(a, player, action);
  for (std::size_t s = 0; s < mon.space.count(); ++s) {
    const double p = mon.p(dev, s);
    if (p == 0.0) continue;
    std::size_t c = 0;
    for (int j = 0; j < n; ++j)
      if (j != player) c += rho.maps[j][mon.space.Coord(s, j)] * cells.stride(j);
    t.table[mon.space.Coord(s, player) * t.cells + c] += p;
  }
  return t;
}

Vec DeviationTable::Column(const std::vector<int>& rho_map, const CellSpace& space) const {
  Vec col(cells, 0.0);
  const std::size_t st = space.stride(player);
  for (int si = 0; si < num_signals; ++si) {
    const double* row = &table[si * cells];
    const std::size_t shift = rho_map[si] * st;
    for (std::size_t c = 0; c < cells; ++c)
      if (row[c] != 0.0) col[c + shift] += row[c];
  }
  return col;
}

std::vector<std::vector<int>> EnumerateRhoMaps(const Instance& inst, int player) {
  const int ns = inst.monitoring.space.size(player);
  const int nm = inst.messages.space.size(player);
  double count = std::pow(static_cast<double>(nm), ns);
  if (count > static_cast<double>(inst.messages.enumeration_cap))
    throw ValidationError("message strategies of player " + std::to_string(player) + " number " +
                          FormatDouble(count) + " > enumeration_cap " +
                          std::to_string(inst.messages.enumeration_cap) +
                          "; supply candidate_rhos or raise the cap");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(ns, 0);
  for (;;) {
    out.push_back(cur);
    int k = ns - 1;
    while (k >= 0 && ++cur[k] == nm) cur[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<RhoProfile> RhoSet(const Instance& inst) {
  const int n = inst.n();
  double total = 1.0;
  for (int i = 0; i < n; ++i)
    total *= std::pow(static_cast<double>(inst.messages.space.size(i)),
                      inst.monitoring.space.size(i));
  std::vector<RhoProfile> out = inst.messages.candidate_rhos;
  if (total > static_cast<double>(inst.messages.enumeration_cap)) {
    if (out.empty())
      throw ValidationError("message-strategy profiles exceed enumeration_cap and no "
                            "candidate_rhos were supplied");
    return out;
  }
  std::vector<std::vector<std::vector<int>>> per(n);
  for (int i = 0; i < n; ++i) per[i] = EnumerateRhoMaps(inst, i);
  std::vector<int> idx(n, 0);
  for (;;) {
    RhoProfile rho;
    rho.name = "r";
    for (int i = 0; i < n; ++i) {
      rho.maps.push_back(per[i][idx[i]]);
      rho.name += (i ? "." : "") + std::to_string(idx[i]);
    }
    bool listed = false;
    for (const RhoProfile& c : inst.messages.candidate_rhos)
      if (c.maps == rho.maps) listed = true;
    if (!listed) out.push_back(std::move(rho));
    int k = n - 1;
    while (k >= 0 && ++idx[k] == static_cast<int>(per[k].size())) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

InducedKernel ComputeInducedKernel(const Instance& inst, std::size_t a, const RhoProfile& rho) {
  const CellSpace full(inst.messages.space, 0);
  InducedKernel k;
  k.on_path = MessageDistribution(inst, a, rho, full);
  for (int i = 0; i < inst.n(); ++i) {
    const std::vector<std::vector<int>> maps = EnumerateRhoMaps(inst, i);
    const int own = inst.game.space.Coord(a, i);
    for (int ai = 0; ai < inst.game.space.size(i); ++ai) {
      const DeviationTable t = BuildDeviationTable(inst, a, rho, i, ai, full);
      for (const std::vector<int>& m : maps) {
        if (ai == own && m == rho.maps[i]) continue;
        k.by_deviation.push_back({i, ai, m, t.Column(m, full)});
      }
    }
  }
  return k;
}

bool IsExtremePayoff(const StageGame& game, std::size_t a) {
  const int n = game.n();
  std::vector<Vec> others;
  for (std::size_t b = 0; b < game.num_profiles(); ++b) {
    if (game.payoff[b] == game.payoff[a]) continue;
    if (std::find(others.begin(), others.end(), game.payoff[b]) == others.end())
      others.push_back(game.payoff[b]);
  }
  if (others.empty()) return true;
  // minimize t s.t. |sum_b mu_b g(b) - g(a)| <= t, mu in the simplex.
  const int nb = static_cast<int>(others.size());
  LinearProgram lp;
  lp.objective.assign(nb + 1, 0.0);
  lp.objective[nb] = -1.0;
  for (int i = 0; i < n; ++i) {
    for (int sign : {+1, -1}) {
      Vec row(nb + 1, 0.0);
      for (int b = 0; b < nb; ++b) row[b] = sign * others[b][i];
      row[nb] = -1.0;
      lp.Add(std::move(row), Relation::kLessEq, sign * game.payoff[a][i]);
    }
  }
  Vec ones(nb + 1, 1.0);
  ones[nb] = 0.0;
  lp.Add(ones, Relation::kEqual, 1.0);
  for (int b = 0; b <= nb; ++b) lp.SetLower(b, 0.0);
  const LpResult r = Solve(lp);
  if (r.status != LpStatus::kOptimal) throw NumericalError("extremity LP failed");
  return -r.value > 1e-9;
}

PayoffGeometry ComputePayoffGeometry(const StageGame& game, const DirectionGrid& grid) {
  PayoffGeometry geo;
  std::vector<Vec> points(game.payoff.begin(), game.payoff.end());
  geo.V = HullOfPoints(points, grid);
  const int n = game.n();
  std::vector<Halfspace> hs = geo.V.halfspaces;
  for (int i = 0; i < n; ++i) {
    Vec normal(n, 0.0);
    normal[i] = -1.0;
    hs.push_back({normal, 0.0});
  }
  geo.V_star = FromHalfspaces(n, std::move(hs), grid);
  for (std::size_t a = 0; a < game.num_profiles(); ++a)
    if (IsExtremePayoff(game, a)) geo.A_extreme.push_back(a);
  geo.degenerate = ChebyshevCenter(geo.V).radius <= 1e-9;
  return geo;
}

}  // namespace rgs
