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

#include "rgs/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rgs/lp_core.h"

namespace rgs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

std::vector<Vec> Dedupe(const std::vector<Vec>& poly) {
  std::vector<Vec> out;
  for (const Vec& p : poly) {
    const double scale = 1.0 + std::fabs(p[0]) + std::fabs(p[1]);
    if (!out.empty() && SupDistance(out.back(), p) <= 1e-12 * scale) continue;
    out.push_back(p);
  }
  while (out.size() > 1) {
    const Vec& p = out.back();
    const double scale = 1.0 + std::fabs(p[0]) + std::fabs(p[1]);
    if (SupDistance(out.front(), p) > 1e-12 * scale) break;
    out.pop_back();
  }
  return out;
}

Vec GridSupportFromVertices(const DirectionGrid& grid, const std::vector<Vec>& vertices) {
  Vec h(grid.size(), -kInf);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (const Vec& v : vertices) h[k] = std::max(h[k], Dot(grid.dirs[k].lambda, v));
  return h;
}

}  // namespace

Direction MakeDirection(Vec lambda) {
  const double norm = Norm(lambda);
  if (std::fabs(norm - 1.0) > 1e-12) throw ValidationError("direction is not a unit vector");
  Direction d;
  d.lambda = std::move(lambda);
  const int n = static_cast<int>(d.lambda.size());
  for (int i = 0; i < n; ++i) {
    for (int sign : {+1, -1}) {
      bool match = true;
      for (int j = 0; j < n && match; ++j) {
        const double target = (j == i) ? sign : 0.0;
        if (std::fabs(d.lambda[j] - target) > 1e-12) match = false;
      }
      if (match) {
        d.kind = sign > 0 ? DirectionKind::kPlusCoordinate : DirectionKind::kMinusCoordinate;
        d.axis = i;
        return d;
      }
    }
  }
  return d;
}

namespace {

Vec Normalized(Vec v) {
  const double norm = Norm(v);
  for (double& x : v) {
    x /= norm;
    if (std::fabs(x) < 1e-15) x = 0.0;
  }
  return v;
}

double MaxNearestAngle(const std::vector<Direction>& dirs) {
  double worst = 0.0;
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    double best = std::numbers::pi;
    for (std::size_t b = 0; b < dirs.size(); ++b) {
      if (a == b) continue;
      const double c = std::clamp(Dot(dirs[a].lambda, dirs[b].lambda), -1.0, 1.0);
      best = std::min(best, std::acos(c));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

DirectionGrid MakeGrid(int n, int size, std::uint64_t seed) {
  if (n < 1) throw ValidationError("grid dimension must be positive");
  if (size < 1) throw ValidationError("grid size must be positive");
  DirectionGrid grid;
  grid.n = n;
  if (n == 1) {
    grid.dirs = {MakeDirection({1.0}), MakeDirection({-1.0})};
    grid.resolution = std::numbers::pi;
    return grid;
  }
  if (n == 2) {
    for (int k = 0; k < size; ++k) {
      Vec l;
      if ((4 * k) % size == 0) {
        const int q = (4 * k) / size;
        const double c[4] = {1, 0, -1, 0}, s[4] = {0, 1, 0, -1};
        l = {c[q], s[q]};
      } else {
        const double t = 2.0 * std::numbers::pi * k / size;
        l = Normalized({std::cos(t), std::sin(t)});
      }
      grid.dirs.push_back(MakeDirection(std::move(l)));
    }
    grid.resolution = 2.0 * std::numbers::pi / size;
    return grid;
  }
  std::mt19937_64 rng(seed);
  if (n == 3) {
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    const double offset = seed == 0 ? 0.0 : unif(rng);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < size; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / size;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = offset + golden * k;
      grid.dirs.push_back(MakeDirection(Normalized({r * std::cos(phi), r * std::sin(phi), z})));
    }
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < size; ++k) {
      Vec v(n);
      for (double& x : v) x = normal(rng);
      grid.dirs.push_back(MakeDirection(Normalized(std::move(v))));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec e(n, 0.0);
      e[i] = sign;
      grid.dirs.push_back(MakeDirection(std::move(e)));
    }
  }
  grid.resolution = MaxNearestAngle(grid.dirs);
  return grid;
}

std::vector<Vec> PlaneDirections(int n, int per_plane) {
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < per_plane; ++k) {
        const double t = std::numbers::pi * (2.0 * k + 1.0) / per_plane;
        const double c = std::cos(t), s = std::sin(t);
        if (std::fabs(c) < 1e-9 || std::fabs(s) < 1e-9) continue;
        Vec l(n, 0.0);
        l[i] = c;
        l[j] = s;
        out.push_back(Normalized(std::move(l)));
      }
    }
  }
  return out;
}

std::vector<Vec> ConvexHull2D(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return pts;
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Vec> ClipPolygon(const std::vector<Vec>& poly, const Halfspace& h) {
  const double tol = 1e-12 * (1.0 + std::fabs(h.offset));
  auto side = [&](const Vec& p) { return Dot(h.normal, p) - h.offset; };
  if (poly.size() == 1) return side(poly[0]) <= tol ? poly : std::vector<Vec>{};
  std::vector<Vec> out;
  const std::size_t m = poly.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Vec& p = poly[k];
    const Vec& q = poly[(k + 1) % m];
    const double sp = side(p), sq = side(q);
    const bool pin = sp <= tol, qin = sq <= tol;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = sp / (sp - sq);
      out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  return Dedupe(out);
}

double PointPolygonDistance(const Vec& p, const std::vector<Vec>& poly) {
  if (poly.empty()) return kInf;
  if (poly.size() == 1) return std::hypot(p[0] - poly[0][0], p[1] - poly[0][1]);
  if (poly.size() >= 3) {
    bool inside = true;
    for (std::size_t k = 0; k < poly.size() && inside; ++k)
      if (Cross(poly[k], poly[(k + 1) % poly.size()], p) < 0) inside = false;
    if (inside) return 0.0;
  }
  double best = kInf;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec& a = poly[k];
    const Vec& b = poly[(k + 1) % poly.size()];
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy));
  }
  return best;
}

double PolytopeSupport(const std::vector<Halfspace>& hs, const Vec& lambda, Vec* argmax) {
  LinearProgram lp;
  lp.objective = lambda;
  for (const Halfspace& h : hs) lp.Add(h.normal, Relation::kLessEq, h.offset);
  const LpResult r = Solve(lp);
  if (r.status == LpStatus::kInfeasible) return -kInf;
  if (r.status == LpStatus::kUnbounded) return kInf;
  if (r.status != LpStatus::kOptimal) throw NumericalError("support LP failed");
  if (argmax) *argmax = r.primal;
  return r.value;
}

double ConvexSetRep::Support(const Vec& lambda) const {
  if (empty) return -kInf;
  if (smooth) {
    double base;
    if (n == 2 && !smooth->inner_vertices.empty()) {
      base = -kInf;
      for (const Vec& v : smooth->inner_vertices) base = std::max(base, Dot(lambda, v));
    } else {
      base = PolytopeSupport(smooth->inner, lambda);
    }
    return base + smooth->radius * Norm(lambda);
  }
  if (n == 2) {
    double best = -kInf;
    for (const Vec& v : vertices) best = std::max(best, Dot(lambda, v));
    return best;
  }
  return PolytopeSupport(halfspaces, lambda);
}

Vec ConvexSetRep::SupportPoint(const Vec& lambda) const {
  if (empty) throw InfeasibleError("support point of an empty set");
  auto polygon_argmax = [&](const std::vector<Vec>& verts) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < verts.size(); ++k)
      if (Dot(lambda, verts[k]) > Dot(lambda, verts[best]) + 1e-15) best = k;
    return verts[best];
  };
  if (smooth) {
    Vec base;
    if (n == 2 && !smooth->inner_vertices.empty()) {
      base = polygon_argmax(smooth->inner_vertices);
    } else {
      PolytopeSupport(smooth->inner, lambda, &base);
    }
    const double norm = Norm(lambda);
    for (int i = 0; i < n; ++i) base[i] += smooth->radius * lambda[i] / norm;
    return base;
  }
  if (n == 2) return polygon_argmax(vertices);
  Vec arg;
  PolytopeSupport(halfspaces, lambda, &arg);
  return arg;
}

bool ConvexSetRep::Contains(const Vec& v, double margin) const {
  if (empty) return false;
  for (const Halfspace& h : halfspaces) {
    const double tol = 1e-12 * (1.0 + std::fabs(h.offset));
    if (Dot(h.normal, v) > h.offset - margin + tol) return false;
  }
  return true;
}

ConvexSetRep FromHalfspaces(int n, std::vector<Halfspace> hs, const DirectionGrid& grid) {
  if (grid.n != n) throw ValidationError("grid dimension mismatch");
  ConvexSetRep set;
  set.n = n;
  for (const Halfspace& h : hs) {
    if (std::isinf(h.offset) && h.offset < 0) {
      set.empty = true;
      set.grid_support.assign(grid.size(), -kInf);
      set.halfspaces = std::move(hs);
      return set;
    }
  }
  hs.erase(std::remove_if(hs.begin(), hs.end(),
                          [](const Halfspace& h) { return std::isinf(h.offset); }),
           hs.end());
  set.halfspaces = std::move(hs);
  if (n == 2) {
    double box[4];
    const Vec axes[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int q = 0; q < 4; ++q) {
      box[q] = PolytopeSupport(set.halfspaces, axes[q]);
      if (box[q] == -kInf) {
        set.empty = true;
        set.grid_support.assign(grid.size(), -kInf);
        return set;
      }
      if (box[q] == kInf) throw ValidationError("unbounded half-space intersection");
    }
    std::vector<Vec> poly = Dedupe(
        {{-box[2], -box[3]}, {box[0], -box[3]}, {box[0], box[1]}, {-box[2], box[1]}});
    for (const Halfspace& h : set.halfspaces) {
      poly = ClipPolygon(poly, h);
      if (poly.empty()) break;
    }
    if (poly.empty()) {
      set.empty = true;
      set.grid_support.assign(grid.size(), -kInf);
      return set;
    }
    set.vertices = ConvexHull2D(poly);
    set.grid_support = GridSupportFromVertices(grid, set.vertices);
    return set;
  }
  set.grid_support.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    set.grid_support[k] = PolytopeSupport(set.halfspaces, grid.dirs[k].lambda);
    if (set.grid_support[k] == kInf) throw ValidationError("unbounded half-space intersection");
    if (set.grid_support[k] == -kInf) {
      set.empty = true;
      set.grid_support.assign(grid.size(), -kInf);
      return set;
    }
  }
  return set;
}

ConvexSetRep FromGridSupport(const DirectionGrid& grid, const Vec& support) {
  if (support.size() != grid.size()) throw ValidationError("support table size mismatch");
  std::vector<Halfspace> hs;
  for (std::size_t k = 0; k < grid.size(); ++k) hs.push_back({grid.dirs[k].lambda, support[k]});
  return FromHalfspaces(grid.n, std::move(hs), grid);
}

ConvexSetRep HullOfPoints(const std::vector<Vec>& points, const DirectionGrid& grid) {
  if (points.empty()) throw ValidationError("hull of no points");
  const int n = static_cast<int>(points[0].size());
  if (grid.n != n) throw ValidationError("grid dimension mismatch");
  ConvexSetRep set;
  set.n = n;
  set.grid_support.assign(grid.size(), -kInf);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (const Vec& p : points)
      set.grid_support[k] = std::max(set.grid_support[k], Dot(grid.dirs[k].lambda, p));
  if (n == 2) {
    set.vertices = ConvexHull2D(points);
    if (set.vertices.size() >= 3) {
      for (std::size_t k = 0; k < set.vertices.size(); ++k) {
        const Vec& a = set.vertices[k];
        const Vec& b = set.vertices[(k + 1) % set.vertices.size()];
        Vec normal = Normalized({b[1] - a[1], a[0] - b[0]});
        set.halfspaces.push_back({normal, std::max(Dot(normal, a), Dot(normal, b))});
      }
      return set;
    }
  }
  for (std::size_t k = 0; k < grid.size(); ++k)
    set.halfspaces.push_back({grid.dirs[k].lambda, set.grid_support[k]});
  return set;
}

Chebyshev ChebyshevCenter(const ConvexSetRep& set) {
  Chebyshev out;
  if (set.empty) {
    out.radius = -1.0;
    return out;
  }
  const int n = set.n;
  const std::vector<Halfspace>& hs = set.smooth ? set.smooth->inner : set.halfspaces;
  const double extra = set.smooth ? set.smooth->radius : 0.0;
  LinearProgram lp;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;
  for (const Halfspace& h : hs) {
    Vec a = h.normal;
    a.push_back(Norm(h.normal));
    lp.Add(std::move(a), Relation::kLessEq, h.offset);
  }
  lp.SetLower(n, 0.0);
  const LpResult r = Solve(lp);
  if (r.status == LpStatus::kInfeasible) {
    out.radius = -1.0;
    return out;
  }
  if (r.status != LpStatus::kOptimal) throw NumericalError("Chebyshev-center LP failed");
  out.center.assign(r.primal.begin(), r.primal.begin() + n);
  out.radius = r.primal[n] + extra;
  return out;
}

double Diameter(const ConvexSetRep& set) {
  if (set.empty) return 0.0;
  if (set.n == 2 && !set.smooth) {
    double d = 0.0;
    for (const Vec& a : set.vertices)
      for (const Vec& b : set.vertices) d = std::max(d, std::hypot(a[0] - b[0], a[1] - b[1]));
    return d;
  }
  double d = 0.0;
  const std::vector<Vec> axes = [&] {
    std::vector<Vec> out;
    for (int i = 0; i < set.n; ++i) {
      Vec e(set.n, 0.0);
      e[i] = 1.0;
      out.push_back(e);
    }
    return out;
  }();
  std::vector<Vec> dirs = axes;
  if (set.n == 2) {
    for (int k = 0; k < 180; ++k) {
      const double t = std::numbers::pi * k / 180.0;
      dirs.push_back({std::cos(t), std::sin(t)});
    }
  } else {
    const DirectionGrid g = MakeGrid(set.n, 200, 0);
    for (const Direction& dir : g.dirs) dirs.push_back(dir.lambda);
  }
  for (const Vec& l : dirs) {
    Vec m = l;
    for (double& x : m) x = -x;
    d = std::max(d, set.Support(l) + set.Support(m));
  }
  return d;
}

double GridHausdorff(const ConvexSetRep& a, const ConvexSetRep& b) {
  if (a.n != b.n || a.grid_support.size() != b.grid_support.size())
    throw ValidationError("Hausdorff distance needs sets on the same grid");
  if (a.empty && b.empty) return 0.0;
  if (a.empty || b.empty) return kInf;
  double d = 0.0;
  for (std::size_t k = 0; k < a.grid_support.size(); ++k)
    d = std::max(d, std::fabs(a.grid_support[k] - b.grid_support[k]));
  return d;
}

}  // namespace rgs
