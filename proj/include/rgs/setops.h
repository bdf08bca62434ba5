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

// Set operations for the strict decomposability operator B(delta, W, eta):
// Hausdorff distances, smoothed inner sets, membership certificates,
// boundary decompositions built from scoring witnesses, self-decomposability
// on a mesh and the discount-factor search.

#ifndef RGS_SETOPS_H_
#define RGS_SETOPS_H_

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

struct HausdorffResult {
  double grid = 0.0;
  std::optional<double> vertex;  // n = 2: vertex-to-polygon distances
};

HausdorffResult Hausdorff(const ConvexSetRep& a, const ConvexSetRep& b);

// (W shrunk by eps_in) plus a ball of radius eps_prime. The shrink moves
// every half-space of W inward; the true support of the shrunken polytope is
// then recomputed so the result is contained in W. Requires
// 0 < eps_prime < eps_in and a Chebyshev radius above eps_in + eps_prime.
ConvexSetRep SmoothInner(const ConvexSetRep& w, double eps_in, double eps_prime,
                         const DirectionGrid& grid);

struct ContinuationScheme {
  CellSpace cells;
  double delta = 0.0;
  std::vector<Vec> w;  // w[c] in R^n
};

struct BCandidate {
  std::size_t a = 0;
  int rho_index = 0;
  std::uint32_t silenced = 0;
};

struct MembershipResult {
  bool decomposable = false;
  BCandidate witness;
  ContinuationScheme scheme;
  double residual = 0.0;
  int candidates_tried = 0;
  std::string refusal;
};

struct MembershipOptions {
  double eta = 0.0;
  std::vector<std::uint32_t> silenced_sets;  // empty: DefaultSilencedSets
  double margin_factor = 1e-6;               // membership margin per unit diameter
};

// Precomputes conservative deviation sets for all (a, rho, silenced) and
// tests v in B(delta, W, eta) by one LP per candidate: continuation values
// w(c) in W (grid rows with a safety margin), promise keeping
// v = (1 - delta) g(a) + delta E[w], and incentive rows with wedge
// (1 - delta) eta.
class BOperator {
 public:
  BOperator(const Instance& inst, const MembershipOptions& options, Exec exec = Exec::kParallel);

  MembershipResult Membership(const Vec& v, const ConvexSetRep& w, double delta) const;
  MembershipResult MembershipWith(const Vec& v, const ConvexSetRep& w, double delta,
                                  const BCandidate& candidate) const;
  // Largest violation of any row of the candidate's program by `scheme`.
  double SchemeResidual(const Vec& v, const ConvexSetRep& w, double delta,
                        const BCandidate& candidate, const ContinuationScheme& scheme) const;

  const Instance& instance() const { return *inst_; }
  const std::vector<RhoProfile>& rhos() const { return rhos_; }
  double eta() const { return options_.eta; }
  double Margin(const ConvexSetRep& w) const;

 private:
  struct Entry {
    BCandidate cand;
    DeviationSet devs;
  };
  const Entry& Find(const BCandidate& c) const;

  const Instance* inst_;
  MembershipOptions options_;
  std::vector<RhoProfile> rhos_;
  std::vector<Entry> entries_;
};

// Rescales a scheme certified at delta to delta_prime > delta by mixing the
// continuation values toward v.
ContinuationScheme RescaleScheme(const Vec& v, const ContinuationScheme& scheme,
                                 double delta_prime);

// Strict interior test: exact distance test for smoothed planar sets, grid
// half-spaces otherwise.
bool InInterior(const ConvexSetRep& w, const Vec& p);

struct BoundaryDecomposition {
  Vec normal;
  TransferScheme x_prime;  // x(c) - (v - w*)
  ContinuationScheme scheme;
  double replay_residual = 0.0;     // |(1-delta) g(a) + delta E[w] - w*|
  double incentive_residual = 0.0;  // strict incentive rows at delta
  double max_budget = 0.0;          // max_c normal . x'(c), negative when strict
  double delta_threshold = 1.0;     // every w(c) is interior for delta above it
};

ContinuationScheme SchemeAt(const Vec& w_star, const TransferScheme& x_prime, double delta);

BoundaryDecomposition DecomposeBoundary(const Instance& inst, const std::vector<RhoProfile>& rhos,
                                        const ConvexSetRep& w, const Vec& w_star,
                                        const Vec& normal, const ScoreWitness& witness,
                                        double delta, double eta);

// Boundary points: support points of smoothed sets at evenly spaced grid
// directions, otherwise rays from the Chebyshev center. The center is last.
std::vector<Vec> BoundaryMesh(const ConvexSetRep& w, const DirectionGrid& grid, int size);

struct SelfDecomposition {
  bool certified = false;
  std::vector<Vec> mesh;
  std::vector<MembershipResult> results;
  int first_failing = -1;
};

SelfDecomposition SelfDecomposable(const BOperator& op, const ConvexSetRep& w,
                                   const DirectionGrid& grid, double delta, int mesh_size,
                                   Exec exec);

std::vector<double> DefaultDeltaMesh();  // 1 - 2^-k, k = 1..20

struct DeltaBar {
  bool certified = false;
  double delta_bar = 1.0;
  std::vector<double> deltas;
  std::vector<char> certified_at;
  bool monotone = true;  // no certified delta followed by a failing larger one
};

DeltaBar FindDeltaBar(const BOperator& op, const ConvexSetRep& w, const DirectionGrid& grid,
                      int mesh_size, Exec exec,
                      const std::vector<double>& deltas = DefaultDeltaMesh());

// "# rgs set v1" then lambda_1..n,support.
void WriteSetCsv(std::ostream& os, const ConvexSetRep& set, const DirectionGrid& grid);
// Reads a set CSV; the directions found define `grid`.
ConvexSetRep ReadSetCsv(std::istream& is, DirectionGrid* grid);

struct SvgLayer {
  const ConvexSetRep* set;
  std::string color;
  std::string label;
};

void WriteSvg(std::ostream& os, const std::vector<SvgLayer>& layers,
              const std::vector<Vec>& points = {});

}  // namespace rgs

#endif  // RGS_SETOPS_H_
