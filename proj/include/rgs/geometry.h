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

// Direction grids and convex payoff sets described by half-spaces plus
// support values on a shared grid (exact polygons in the plane).

#ifndef RGS_GEOMETRY_H_
#define RGS_GEOMETRY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "rgs/common.h"

namespace rgs {

enum class DirectionKind { kPlusCoordinate, kMinusCoordinate, kRegular };

struct Direction {
  Vec lambda;
  DirectionKind kind = DirectionKind::kRegular;
  int axis = -1;  // coordinate index for coordinate directions
};

// Classifies a unit vector; throws ValidationError if it is not unit length.
Direction MakeDirection(Vec lambda);

struct DirectionGrid {
  int n = 0;
  std::vector<Direction> dirs;
  double resolution = 0.0;  // angular spacing in radians

  std::size_t size() const { return dirs.size(); }
};

// n = 2: `size` evenly spaced angles starting at e^1. n = 3: Fibonacci
// sphere. n >= 4: seeded Gaussian sample. For n >= 3 the 2n coordinate
// directions are always appended.
DirectionGrid MakeGrid(int n, int size, std::uint64_t seed = 1);

// Extra directions in every coordinate plane (i, j): `per_plane` evenly
// spaced angles with both coordinates nonzero.
std::vector<Vec> PlaneDirections(int n, int per_plane);

struct Halfspace {
  Vec normal;
  double offset;  // normal . v <= offset
};

// Ball-sum description used for smoothed sets: the set is
// {v : dist(v, inner) <= radius} with `inner` an H-polytope.
struct SmoothPart {
  std::vector<Halfspace> inner;
  std::vector<Vec> inner_vertices;  // n = 2
  double radius = 0.0;
};

struct ConvexSetRep {
  int n = 0;
  std::vector<Halfspace> halfspaces;
  Vec grid_support;
  std::vector<Vec> vertices;  // n = 2, counter-clockwise
  bool empty = false;
  std::optional<SmoothPart> smooth;

  // Exact support value h(lambda): vertices for n = 2, LP otherwise, plus the
  // ball radius for smoothed sets.
  double Support(const Vec& lambda) const;
  // A maximizer of lambda . v over the set.
  Vec SupportPoint(const Vec& lambda) const;
  // Membership in the outer grid description with margin `margin`.
  bool Contains(const Vec& v, double margin = 0.0) const;
};

ConvexSetRep HullOfPoints(const std::vector<Vec>& points, const DirectionGrid& grid);
ConvexSetRep FromHalfspaces(int n, std::vector<Halfspace> halfspaces, const DirectionGrid& grid);
// Intersection of the grid half-spaces lambda_k . v <= h_k.
ConvexSetRep FromGridSupport(const DirectionGrid& grid, const Vec& support);

// n = 2 helpers.
std::vector<Vec> ConvexHull2D(std::vector<Vec> points);
std::vector<Vec> ClipPolygon(const std::vector<Vec>& poly, const Halfspace& h);
double PointPolygonDistance(const Vec& p, const std::vector<Vec>& poly);

// Support of an H-polytope by LP; -inf when empty, +inf when unbounded.
double PolytopeSupport(const std::vector<Halfspace>& hs, const Vec& lambda, Vec* argmax = nullptr);

struct Chebyshev {
  Vec center;
  double radius = 0.0;
};

Chebyshev ChebyshevCenter(const ConvexSetRep& set);

double Diameter(const ConvexSetRep& set);

// max_k |h_A(lambda_k) - h_B(lambda_k)| over the shared grid; +inf when
// exactly one of the sets is empty.
double GridHausdorff(const ConvexSetRep& a, const ConvexSetRep& b);

}  // namespace rgs

#endif  // RGS_GEOMETRY_H_
