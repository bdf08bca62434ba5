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

// Independent reference computations used by the unit tests and the
// acceptance binary. Nothing here calls into the simplex code.

#ifndef RGS_TESTS_ORACLES_H_
#define RGS_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "rgs/game_model.h"
#include "rgs/lp_core.h"

namespace rgs::oracle {

// Solves the square system M x = r by Gaussian elimination with partial
// pivoting; nullopt when singular.
inline std::optional<Vec> SolveSquare(std::vector<Vec> m, Vec r) {
  const int n = static_cast<int>(r.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int i = c + 1; i < n; ++i)
      if (std::fabs(m[i][c]) > std::fabs(m[p][c])) p = i;
    if (std::fabs(m[p][c]) < 1e-10) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(r[p], r[c]);
    for (int i = c + 1; i < n; ++i) {
      const double f = m[i][c] / m[c][c];
      for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = r[i];
    for (int j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

struct Row {
  Vec a;
  double b;     // a.x <= b, or a.x == b when eq
  bool eq;
};

// Best objective over the vertices of {rows} ∩ box; nullopt when empty.
inline std::optional<double> BestVertex(const Vec& c, const std::vector<Row>& rows,
                                        double tol) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());
  std::optional<double> best;
  std::vector<int> pick;
  auto feasible = [&](const Vec& x) {
    for (const Row& r : rows) {
      double s = 0.0, mag = 0.0;
      for (int j = 0; j < n; ++j) {
        s += r.a[j] * x[j];
        mag += std::fabs(r.a[j] * x[j]);
      }
      // Relative to the magnitude of the terms: large boxes cancel.
      const double scale = 1.0 + std::fabs(r.b) + mag;
      if (r.eq ? std::fabs(s - r.b) > tol * scale : s - r.b > tol * scale) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(pick.size()) == n) {
      for (int k = 0; k < m; ++k)
        if (rows[k].eq && std::find(pick.begin(), pick.end(), k) == pick.end()) return;
      std::vector<Vec> mm;
      Vec rr;
      for (int k : pick) {
        mm.push_back(rows[k].a);
        rr.push_back(rows[k].b);
      }
      const auto x = SolveSquare(mm, rr);
      if (!x || !feasible(*x)) return;
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += c[j] * (*x)[j];
      if (!best || v > *best) best = v;
      return;
    }
    for (int k = start; k < m; ++k) {
      if (m - k < n - static_cast<int>(pick.size())) break;
      pick.push_back(k);
      self(self, k + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

struct LpAnswer {
  LpStatus status;
  double value;
};

// Vertex enumeration inside the boxes |x_j| <= 1e6 and |x_j| <= 1e7 (unless a
// tighter bound is given); the optimum moving with the box means unbounded.
inline LpAnswer VertexEnumeration(const LinearProgram& lp) {
  const int n = lp.num_vars();
  auto build = [&](double box) {
    std::vector<Row> rows;
    for (const Constraint& c : lp.constraints) {
      if (c.rel == Relation::kEqual) {
        rows.push_back({c.a, c.b, true});
        continue;
      }
      const double s = c.rel == Relation::kLessEq ? 1.0 : -1.0;
      Vec a = c.a;
      for (double& v : a) v *= s;
      rows.push_back({a, s * c.b, false});
    }
    for (int j = 0; j < n; ++j) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      const double up = !lp.upper.empty() && lp.upper[j] ? *lp.upper[j] : box;
      rows.push_back({e, up, false});
      e[j] = -1.0;
      const double lo = !lp.lower.empty() && lp.lower[j] ? *lp.lower[j] : -box;
      rows.push_back({e, -lo, false});
    }
    return rows;
  };
  const auto v1 = BestVertex(lp.objective, build(1e6), 1e-9);
  if (!v1) return {LpStatus::kInfeasible, 0.0};
  const auto v2 = BestVertex(lp.objective, build(1e7), 1e-9);
  if (*v2 > *v1 + 1e-6 * (1.0 + std::fabs(*v1)))
    return {LpStatus::kUnbounded, std::numeric_limits<double>::infinity()};
  return {LpStatus::kOptimal, *v1};
}

// Small random LP with integer data: at most 6 variables and 10 rows, a mix
// of relations and optional bounds.
inline LinearProgram RandomLp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv_d(1, 6), m_d(1, 10), coef(-5, 5), rhs(-10, 10),
      rel(0, 5), flip(0, 9);
  LinearProgram lp;
  const int n = nv_d(rng);
  const int m = m_d(rng);
  for (int j = 0; j < n; ++j) lp.objective.push_back(coef(rng));
  for (int k = 0; k < m; ++k) {
    Vec a(n);
    for (double& v : a) v = coef(rng);
    const int r = rel(rng);
    const Relation relation =
        r == 0 ? Relation::kEqual : (r <= 3 ? Relation::kLessEq : Relation::kGreaterEq);
    lp.Add(a, relation, rhs(rng));
  }
  for (int j = 0; j < n; ++j) {
    const int f = flip(rng);
    if (f < 4) lp.SetLower(j, 0.0);
    if (f == 4) lp.SetUpper(j, 3.0);
    if (f == 5) {
      lp.SetLower(j, -2.0);
      lp.SetUpper(j, 4.0);
    }
  }
  return lp;
}

// Dual objective recomputed from the reported multipliers.
inline double DualValue(const LinearProgram& lp, const LpResult& r) {
  double v = 0.0;
  for (std::size_t k = 0; k < lp.constraints.size(); ++k) v += r.dual[k] * lp.constraints[k].b;
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double y = r.bound_dual[j];
    if (y > 0) v += y * *lp.upper[j];
    if (y < 0) v += y * *lp.lower[j];
  }
  return v;
}

// p~(m | a', rho') by direct summation over every signal profile, with
// player i (if i >= 0) switching to action `action` and map `map`.
inline Vec BruteForceColumn(const Instance& inst, std::size_t a, const RhoProfile& rho, int i,
                            int action, const std::vector<int>& map) {
  const ProfileSpace& as = inst.game.space;
  const ProfileSpace& ss = inst.monitoring.space;
  const ProfileSpace& ms = inst.messages.space;
  std::vector<int> prof = as.Decode(a);
  if (i >= 0) prof[i] = action;
  const std::size_t ad = as.Encode(prof);
  Vec out(ms.count(), 0.0);
  for (std::size_t s = 0; s < ss.count(); ++s) {
    const std::vector<int> sig = ss.Decode(s);
    std::vector<int> msg(sig.size());
    for (std::size_t j = 0; j < sig.size(); ++j)
      msg[j] = (static_cast<int>(j) == i ? map : rho.maps[j])[sig[j]];
    out[ms.Encode(msg)] += inst.monitoring.kernel[ad * ss.count() + s];
  }
  return out;
}

// Pure minmax by enumeration.
inline Vec BruteForceMinmax(const StageGame& g) {
  const int n = g.n();
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < g.num_profiles(); ++a) {
      if (g.space.Coord(a, i) != 0) continue;
      double br = -std::numeric_limits<double>::infinity();
      for (int ai = 0; ai < g.space.size(i); ++ai) br = std::max(br, g.g(g.space.With(a, i, ai), i));
      best = std::min(best, br);
    }
    out[i] = best;
  }
  return out;
}

// Planar extreme points: p is extreme iff some direction in a fine fan makes
// it the unique maximizer among the distinct points.
inline bool ExtremeByDirections(const std::vector<Vec>& pts, std::size_t k) {
  for (int t = 0; t < 7200; ++t) {
    const double th = 2.0 * M_PI * t / 7200.0;
    const double c = std::cos(th), s = std::sin(th);
    const double mine = c * pts[k][0] + s * pts[k][1];
    bool unique = true;
    for (std::size_t j = 0; j < pts.size() && unique; ++j) {
      if (pts[j] == pts[k]) continue;
      if (c * pts[j][0] + s * pts[j][1] >= mine - 1e-12) unique = false;
    }
    if (unique) return true;
  }
  return false;
}

// Vertices of {x : A x <= b} in the plane from all pairwise line
// intersections that satisfy every row.
inline std::vector<Vec> PlanarVertices(const std::vector<Row>& rows) {
  std::vector<Vec> out;
  for (std::size_t p = 0; p < rows.size(); ++p)
    for (std::size_t q = p + 1; q < rows.size(); ++q) {
      const auto x = SolveSquare({rows[p].a, rows[q].a}, {rows[p].b, rows[q].b});
      if (!x) continue;
      bool ok = true;
      for (const Row& r : rows)
        if (r.a[0] * (*x)[0] + r.a[1] * (*x)[1] > r.b + 1e-9) ok = false;
      if (!ok) continue;
      bool dup = false;
      for (const Vec& v : out)
        if (std::hypot(v[0] - (*x)[0], v[1] - (*x)[1]) < 1e-9) dup = true;
      if (!dup) out.push_back(*x);
    }
  return out;
}

// Sums a full message distribution into cells that ignore the players in
// `silenced`.
inline Vec Marginalize(const ProfileSpace& ms, const Vec& full, std::uint32_t silenced) {
  std::vector<int> sizes;
  for (int i = 0; i < ms.dims(); ++i) sizes.push_back((silenced >> i) & 1u ? 1 : ms.size(i));
  const ProfileSpace cells(sizes);
  Vec out(cells.count(), 0.0);
  for (std::size_t m = 0; m < ms.count(); ++m) {
    std::vector<int> p = ms.Decode(m);
    for (int i = 0; i < ms.dims(); ++i)
      if ((silenced >> i) & 1u) p[i] = 0;
    out[cells.Encode(p)] += full[m];
  }
  return out;
}

// Every map S_i -> M_i, lexicographic.
inline std::vector<std::vector<int>> AllMaps(int ns, int nm) {
  std::vector<std::vector<int>> out;
  std::size_t total = 1;
  for (int k = 0; k < ns; ++k) total *= nm;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> map(ns);
    std::size_t c = code;
    for (int k = ns - 1; k >= 0; --k) {
      map[k] = static_cast<int>(c % nm);
      c /= nm;
    }
    out.push_back(map);
  }
  return out;
}

// Largest violation of the conservative scoring rows by transfers x indexed
// by the cells of `silenced` (x[i * cells + c]), rebuilt from brute-force
// columns; also checks the budget and v = g(a) + E[x].
inline double ReplayScoring(const Instance& inst, std::size_t a, const RhoProfile& rho,
                            std::uint32_t silenced, const Vec& lambda, double eta, const Vec& x,
                            const Vec& v) {
  const int n = inst.n();
  const ProfileSpace& ms = inst.messages.space;
  const Vec on = Marginalize(ms, BruteForceColumn(inst, a, rho, -1, 0, {}), silenced);
  const std::size_t nc = on.size();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const int own = inst.game.space.Coord(a, i);
    for (int ai = 0; ai < inst.game.space.size(i); ++ai) {
      const double gain = inst.game.g(inst.game.space.With(a, i, ai), i) - inst.game.g(a, i);
      for (const auto& map : AllMaps(inst.monitoring.space.size(i), ms.size(i))) {
        if (ai == own && map == rho.maps[i]) continue;
        const Vec col = Marginalize(ms, BruteForceColumn(inst, a, rho, i, ai, map), silenced);
        double diff = 0.0;
        for (std::size_t c = 0; c < nc; ++c) diff = std::max(diff, std::fabs(col[c] - on[c]));
        if (ai == own && diff <= 1e-12) continue;
        double lhs = 0.0;
        for (std::size_t c = 0; c < nc; ++c) lhs += x[i * nc + c] * (on[c] - col[c]);
        worst = std::max(worst, gain + eta - lhs);
      }
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += lambda[i] * x[i * nc + c];
    worst = std::max(worst, s);
  }
  for (int i = 0; i < n; ++i) {
    double vi = inst.game.g(a, i);
    for (std::size_t c = 0; c < nc; ++c) vi += on[c] * x[i * nc + c];
    worst = std::max(worst, std::fabs(vi - v[i]));
  }
  return worst;
}

}  // namespace rgs::oracle

#endif  // RGS_TESTS_ORACLES_H_
