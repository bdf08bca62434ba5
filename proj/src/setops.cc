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

#include "rgs/setops.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rgs/lp_core.h"

namespace rgs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Hausdorff2D(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double d = 0.0;
  for (const Vec& p : a) d = std::max(d, PointPolygonDistance(p, b));
  for (const Vec& p : b) d = std::max(d, PointPolygonDistance(p, a));
  return d;
}

}  // namespace

HausdorffResult Hausdorff(const ConvexSetRep& a, const ConvexSetRep& b) {
  HausdorffResult r;
  r.grid = GridHausdorff(a, b);
  if (a.n == 2 && !a.empty && !b.empty && !a.vertices.empty() && !b.vertices.empty())
    r.vertex = Hausdorff2D(a.vertices, b.vertices);
  return r;
}

ConvexSetRep SmoothInner(const ConvexSetRep& w, double eps_in, double eps_prime,
                         const DirectionGrid& grid) {
  if (!(eps_prime > 0.0) || !(eps_prime < eps_in))
    throw ValidationError("smoothing needs 0 < ball radius < shrink");
  if (w.empty) throw InfeasibleError("empty interior");
  const Chebyshev cheb = ChebyshevCenter(w);
  if (!(cheb.radius > eps_in + eps_prime)) throw InfeasibleError("empty interior");
  std::vector<Halfspace> inner;
  for (const Halfspace& h : w.halfspaces)
    inner.push_back({h.normal, h.offset - eps_in * Norm(h.normal)});
  const ConvexSetRep core = FromHalfspaces(w.n, inner, grid);
  if (core.empty) throw InfeasibleError("empty interior");
  SmoothPart part;
  part.inner = inner;
  part.inner_vertices = core.vertices;
  part.radius = eps_prime;
  Vec support = core.grid_support;
  for (double& h : support) h += eps_prime;
  ConvexSetRep out = FromGridSupport(grid, support);
  out.smooth = std::move(part);
  return out;
}

BOperator::BOperator(const Instance& inst, const MembershipOptions& options, Exec exec)
    : inst_(&inst), options_(options), rhos_(RhoSet(inst)) {
  if (options_.silenced_sets.empty()) options_.silenced_sets = DefaultSilencedSets(inst.n());
  for (std::size_t a = 0; a < inst.game.num_profiles(); ++a)
    for (std::size_t r = 0; r < rhos_.size(); ++r)
      for (std::uint32_t t : options_.silenced_sets)
        entries_.push_back({{a, static_cast<int>(r), t}, DeviationSet()});
  ParallelFor(entries_.size(), exec, [&](std::size_t k) {
    const BCandidate& c = entries_[k].cand;
    entries_[k].devs =
        EnumerateDeviations(inst, c.a, rhos_[c.rho_index], Closure::kConservative, c.silenced);
  });
}

const BOperator::Entry& BOperator::Find(const BCandidate& c) const {
  for (const Entry& e : entries_)
    if (e.cand.a == c.a && e.cand.rho_index == c.rho_index && e.cand.silenced == c.silenced)
      return e;
  throw ValidationError("unknown decomposition candidate");
}

double BOperator::Margin(const ConvexSetRep& w) const {
  return options_.margin_factor * Diameter(w);
}

namespace {

struct MembershipProgram {
  LinearProgram core;
  std::vector<Constraint> pool;
};

MembershipProgram BuildMembership(const StageGame& game, const DeviationSet& devs,
                                  const Vec& v, const ConvexSetRep& w, double delta, double eta,
                                  std::size_t a, double margin, const DirectionGrid* grid_dirs) {
  const int n = game.n();
  const std::size_t nc = devs.cells.count();
  MembershipProgram p;
  p.core.objective.assign(n * nc, 0.0);
  for (int i = 0; i < n; ++i) {
    Vec row(n * nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) row[i * nc + c] = delta * devs.on_path[c];
    p.core.Add(std::move(row), Relation::kEqual, v[i] - (1.0 - delta) * game.g(a, i));
  }
  for (int i = 0; i < n; ++i) {
    for (const DeviationEntry& e : devs.by_player[i]) {
      Constraint row;
      row.a.assign(n * nc, 0.0);
      for (std::size_t c = 0; c < nc; ++c)
        row.a[i * nc + c] = delta * (devs.on_path[c] - e.column[c]);
      row.rel = Relation::kGreaterEq;
      row.b = (1.0 - delta) * (e.stage_payoff - game.g(a, i) + eta);
      p.pool.push_back(std::move(row));
    }
  }
  (void)grid_dirs;
  for (std::size_t c = 0; c < nc; ++c) {
    for (const Halfspace& h : w.halfspaces) {
      Constraint row;
      row.a.assign(n * nc, 0.0);
      for (int i = 0; i < n; ++i) row.a[i * nc + c] = h.normal[i];
      row.rel = Relation::kLessEq;
      row.b = h.offset - margin;
      p.pool.push_back(std::move(row));
    }
  }
  return p;
}

}  // namespace

MembershipResult BOperator::MembershipWith(const Vec& v, const ConvexSetRep& w, double delta,
                                           const BCandidate& cand) const {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const Entry& e = Find(cand);
  const double margin = Margin(w);
  const StageGame& game = inst_->game;
  const int n = game.n();
  MembershipResult out;
  out.witness = cand;
  out.candidates_tried = 1;
  const MembershipProgram prog =
      BuildMembership(game, e.devs, v, w, delta, options_.eta, cand.a, margin, nullptr);
  LazyOptions lo;
  lo.initial_rows = 0;
  const LpResult r = SolveLazy(prog.core, prog.pool, lo);
  if (r.status != LpStatus::kOptimal) {
    out.refusal = ToString(r.status);
    return out;
  }
  out.residual = r.primal_residual;
  if (out.residual > 1e-8) {
    out.refusal = "residual";
    return out;
  }
  out.decomposable = true;
  const std::size_t nc = e.devs.cells.count();
  out.scheme.cells = e.devs.cells;
  out.scheme.delta = delta;
  out.scheme.w.assign(nc, Vec(n, 0.0));
  for (std::size_t c = 0; c < nc; ++c)
    for (int i = 0; i < n; ++i) out.scheme.w[c][i] = r.primal[i * nc + c];
  return out;
}

MembershipResult BOperator::Membership(const Vec& v, const ConvexSetRep& w, double delta) const {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const double margin = Margin(w);
  const StageGame& game = inst_->game;
  const int n = game.n();
  MembershipResult last;
  int tried = 0;
  std::size_t skip_profile = static_cast<std::size_t>(-1);
  for (const Entry& e : entries_) {
    if (e.cand.a == skip_profile) continue;
    // E[w] = (v - (1 - delta) g(a)) / delta must itself lie in W.
    Vec mean(n);
    for (int i = 0; i < n; ++i) mean[i] = (v[i] - (1.0 - delta) * game.g(e.cand.a, i)) / delta;
    if (!w.Contains(mean, margin)) {
      skip_profile = e.cand.a;
      continue;
    }
    ++tried;
    MembershipResult r = MembershipWith(v, w, delta, e.cand);
    if (r.decomposable) {
      r.candidates_tried = tried;
      return r;
    }
    last = std::move(r);
  }
  last.decomposable = false;
  last.candidates_tried = tried;
  if (tried == 0) last.refusal = "promise keeping infeasible for every profile";
  return last;
}

double BOperator::SchemeResidual(const Vec& v, const ConvexSetRep& w, double delta,
                                 const BCandidate& cand, const ContinuationScheme& scheme) const {
  const Entry& e = Find(cand);
  const StageGame& game = inst_->game;
  const int n = game.n();
  const std::size_t nc = e.devs.cells.count();
  const MembershipProgram prog =
      BuildMembership(game, e.devs, v, w, delta, options_.eta, cand.a, Margin(w), nullptr);
  Vec x(n * nc);
  for (std::size_t c = 0; c < nc; ++c)
    for (int i = 0; i < n; ++i) x[i * nc + c] = scheme.w[c][i];
  double worst = 0.0;
  for (const Constraint& row : prog.core.constraints) worst = std::max(worst, RowViolation(row, x));
  for (const Constraint& row : prog.pool) worst = std::max(worst, RowViolation(row, x));
  return worst;
}

ContinuationScheme RescaleScheme(const Vec& v, const ContinuationScheme& s, double dp) {
  const double d = s.delta;
  if (!(dp > d && dp < 1.0)) throw ValidationError("rescaling needs delta < delta' < 1");
  const double alpha = (dp - d) / (dp * (1.0 - d));
  const double beta = d * (1.0 - dp) / (dp * (1.0 - d));
  ContinuationScheme out = s;
  out.delta = dp;
  for (Vec& w : out.w)
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = alpha * v[i] + beta * w[i];
  return out;
}

bool InInterior(const ConvexSetRep& w, const Vec& p) {
  if (w.empty) return false;
  if (w.smooth && w.n == 2 && !w.smooth->inner_vertices.empty()) {
    const double r = w.smooth->radius;
    return PointPolygonDistance(p, w.smooth->inner_vertices) < r - 1e-12 * (1.0 + r);
  }
  for (const Halfspace& h : w.halfspaces)
    if (Dot(h.normal, p) >= h.offset - 1e-12 * (1.0 + std::fabs(h.offset))) return false;
  return true;
}

ContinuationScheme SchemeAt(const Vec& w_star, const TransferScheme& xp, double delta) {
  ContinuationScheme s;
  s.cells = xp.cells;
  s.delta = delta;
  const double t = (1.0 - delta) / delta;
  const std::size_t nc = xp.cells.count();
  s.w.assign(nc, w_star);
  for (std::size_t c = 0; c < nc; ++c)
    for (int i = 0; i < xp.n; ++i) s.w[c][i] += t * xp.at(i, c);
  return s;
}

BoundaryDecomposition DecomposeBoundary(const Instance& inst, const std::vector<RhoProfile>& rhos,
                                        const ConvexSetRep& w, const Vec& w_star,
                                        const Vec& normal, const ScoreWitness& wit, double delta,
                                        double eta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (!(Dot(normal, wit.v) > Dot(normal, w_star)))
    throw InfeasibleError("witness not strictly improving at the boundary point");
  const StageGame& game = inst.game;
  const int n = game.n();
  const DeviationSet devs = EnumerateDeviations(inst, wit.a, rhos[wit.rho_index],
                                                Closure::kConservative, wit.silenced);
  const std::size_t nc = devs.cells.count();
  BoundaryDecomposition out;
  out.normal = normal;
  out.x_prime = wit.x;
  out.max_budget = -kInf;
  for (std::size_t c = 0; c < nc; ++c) {
    double b = 0.0;
    for (int i = 0; i < n; ++i) {
      out.x_prime.x[i * nc + c] -= wit.v[i] - w_star[i];
      b += normal[i] * out.x_prime.x[i * nc + c];
    }
    out.max_budget = std::max(out.max_budget, b);
  }
  out.scheme = SchemeAt(w_star, out.x_prime, delta);
  for (int i = 0; i < n; ++i) {
    double s = (1.0 - delta) * game.g(wit.a, i);
    for (std::size_t c = 0; c < nc; ++c) s += delta * devs.on_path[c] * out.scheme.w[c][i];
    out.replay_residual = std::max(out.replay_residual, std::fabs(s - w_star[i]));
  }
  for (int i = 0; i < n; ++i) {
    for (const DeviationEntry& e : devs.by_player[i]) {
      double lhs = 0.0;
      for (std::size_t c = 0; c < nc; ++c)
        lhs += delta * out.scheme.w[c][i] * (devs.on_path[c] - e.column[c]);
      const double rhs = (1.0 - delta) * (e.stage_payoff - game.g(wit.a, i) + eta);
      out.incentive_residual = std::max(out.incentive_residual, rhs - lhs);
    }
  }
  // Along each ray w* + t x'(c) the interior is an interval (0, t_c); the
  // scheme is interior exactly when (1 - delta) / delta < min_c t_c.
  double t_min = kInf;
  for (std::size_t c = 0; c < nc; ++c) {
    Vec dir(n);
    for (int i = 0; i < n; ++i) dir[i] = out.x_prime.at(i, c);
    auto inside = [&](double t) {
      Vec p = w_star;
      for (int i = 0; i < n; ++i) p[i] += t * dir[i];
      return InInterior(w, p);
    };
    double hi = 1.0;
    while (inside(hi) && hi < 1e8) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? lo : hi) = mid;
    }
    t_min = std::min(t_min, lo);
  }
  out.delta_threshold = t_min > 0.0 ? 1.0 / (1.0 + t_min) : 1.0;
  return out;
}

std::vector<Vec> BoundaryMesh(const ConvexSetRep& w, const DirectionGrid& grid, int size) {
  if (w.empty) throw InfeasibleError("mesh of an empty set");
  std::vector<Vec> out;
  const Chebyshev cheb = ChebyshevCenter(w);
  const int count = std::min<int>(size, static_cast<int>(grid.size()));
  for (int k = 0; k < count; ++k) {
    const Vec& l = grid.dirs[static_cast<std::size_t>(k) * grid.size() / count].lambda;
    if (w.smooth) {
      out.push_back(w.SupportPoint(l));
      continue;
    }
    double t = kInf;
    for (const Halfspace& h : w.halfspaces) {
      const double s = Dot(h.normal, l);
      if (s > 1e-15) t = std::min(t, (h.offset - Dot(h.normal, cheb.center)) / s);
    }
    if (!std::isfinite(t)) t = 0.0;
    t = std::max(t, 0.0);
    Vec p = cheb.center;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * l[i];
    out.push_back(std::move(p));
  }
  out.push_back(cheb.center);
  return out;
}

SelfDecomposition SelfDecomposable(const BOperator& op, const ConvexSetRep& w,
                                   const DirectionGrid& grid, double delta, int mesh_size,
                                   Exec exec) {
  SelfDecomposition out;
  out.mesh = BoundaryMesh(w, grid, mesh_size);
  out.results.resize(out.mesh.size());
  ParallelFor(out.mesh.size(), exec,
              [&](std::size_t k) { out.results[k] = op.Membership(out.mesh[k], w, delta); });
  out.certified = true;
  for (std::size_t k = 0; k < out.results.size(); ++k) {
    if (!out.results[k].decomposable) {
      out.certified = false;
      out.first_failing = static_cast<int>(k);
      break;
    }
  }
  return out;
}

std::vector<double> DefaultDeltaMesh() {
  std::vector<double> out;
  for (int k = 1; k <= 20; ++k) out.push_back(1.0 - std::ldexp(1.0, -k));
  return out;
}

DeltaBar FindDeltaBar(const BOperator& op, const ConvexSetRep& w, const DirectionGrid& grid,
                      int mesh_size, Exec exec, const std::vector<double>& deltas) {
  DeltaBar out;
  out.deltas = deltas;
  std::sort(out.deltas.begin(), out.deltas.end());
  out.certified_at.assign(out.deltas.size(), 0);
  for (std::size_t k = 0; k < out.deltas.size(); ++k)
    out.certified_at[k] = SelfDecomposable(op, w, grid, out.deltas[k], mesh_size, exec).certified;
  bool seen = false;
  for (std::size_t k = 0; k < out.deltas.size(); ++k) {
    if (out.certified_at[k] && !seen) {
      seen = true;
      out.certified = true;
      out.delta_bar = out.deltas[k];
    }
    if (seen && !out.certified_at[k]) out.monotone = false;
  }
  return out;
}

void WriteSetCsv(std::ostream& os, const ConvexSetRep& set, const DirectionGrid& grid) {
  os << "# rgs set v1\n";
  for (int i = 0; i < grid.n; ++i) os << "lambda_" << (i + 1) << ",";
  os << "support\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (int i = 0; i < grid.n; ++i) os << FormatDouble(grid.dirs[k].lambda[i]) << ",";
    os << FormatDouble(set.grid_support[k]) << "\n";
  }
}

ConvexSetRep ReadSetCsv(std::istream& is, DirectionGrid* grid) {
  std::string line;
  bool header = false;
  int n = 0;
  DirectionGrid g;
  Vec support;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header) {
      if (cells.empty() || cells.back() != "support")
        throw ValidationError("set CSV: missing header");
      n = static_cast<int>(cells.size()) - 1;
      header = true;
      continue;
    }
    if (static_cast<int>(cells.size()) != n + 1)
      throw ValidationError("set CSV: wrong column count at line " + std::to_string(lineno));
    Vec l(n);
    try {
      for (int i = 0; i < n; ++i) l[i] = std::stod(cells[i]);
      support.push_back(std::stod(cells[n]));
    } catch (const std::exception&) {
      throw ValidationError("set CSV: malformed number at line " + std::to_string(lineno));
    }
    const double norm = Norm(l);
    for (double& x : l) x /= norm;
    g.dirs.push_back(MakeDirection(std::move(l)));
  }
  if (!header || g.dirs.empty()) throw ValidationError("set CSV: no rows");
  g.n = n;
  if (n == 2) {
    std::vector<double> angles;
    for (const Direction& d : g.dirs) angles.push_back(std::atan2(d.lambda[1], d.lambda[0]));
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
    for (std::size_t k = 1; k < angles.size(); ++k) gap = std::max(gap, angles[k] - angles[k - 1]);
    g.resolution = gap;
  }
  *grid = g;
  return FromGridSupport(*grid, support);
}

void WriteSvg(std::ostream& os, const std::vector<SvgLayer>& layers,
              const std::vector<Vec>& points) {
  double lo[2] = {kInf, kInf}, hi[2] = {-kInf, -kInf};
  auto grow = [&](const Vec& p) {
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  };
  for (const SvgLayer& l : layers)
    for (const Vec& p : l.set->vertices) grow(p);
  for (const Vec& p : points) grow(p);
  if (!std::isfinite(lo[0])) lo[0] = lo[1] = -1, hi[0] = hi[1] = 1;
  const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-9});
  // Center the shorter (possibly degenerate) axis.
  for (int i = 0; i < 2; ++i) {
    const double slack = span - (hi[i] - lo[i]);
    lo[i] -= 0.5 * slack;
  }
  const double size = 400.0, pad = 20.0;
  auto sx = [&](double x) { return pad + (x - lo[0]) / span * (size - 2 * pad); };
  auto sy = [&](double y) { return size - pad - (y - lo[1]) / span * (size - 2 * pad); };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  for (const SvgLayer& l : layers) {
    const std::vector<Vec>& v = l.set->vertices;
    if (v.empty()) continue;
    os << "  <!-- " << l.label << " -->\n";
    if (v.size() == 1) {
      os << "  <circle cx=\"" << sx(v[0][0]) << "\" cy=\"" << sy(v[0][1])
         << "\" r=\"3\" fill=\"" << l.color << "\"/>\n";
      continue;
    }
    os << "  <polygon fill=\"" << l.color << "\" fill-opacity=\"0.3\" stroke=\"" << l.color
       << "\" points=\"";
    for (const Vec& p : v) os << sx(p[0]) << "," << sy(p[1]) << " ";
    os << "\"/>\n";
  }
  for (const Vec& p : points)
    os << "  <circle cx=\"" << sx(p[0]) << "\" cy=\"" << sy(p[1]) << "\" r=\"2\" fill=\"black\"/>\n";
  os << "</svg>\n";
}

}  // namespace rgs
