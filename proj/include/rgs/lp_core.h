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

// Dense simplex solver with dual multipliers and infeasibility certificates.

#ifndef RGS_LP_CORE_H_
#define RGS_LP_CORE_H_

#include <optional>
#include <string>
#include <vector>

#include "rgs/common.h"

namespace rgs {

enum class Relation { kLessEq, kEqual, kGreaterEq };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string ToString(LpStatus status);

struct Constraint {
  Vec a;
  Relation rel = Relation::kLessEq;
  double b = 0.0;
};

// maximize c.x subject to the constraints and optional per-variable bounds.
// Variables without bounds are free.
struct LinearProgram {
  Vec objective;
  std::vector<Constraint> constraints;
  std::vector<std::optional<double>> lower;  // empty or one entry per variable
  std::vector<std::optional<double>> upper;

  int num_vars() const { return static_cast<int>(objective.size()); }
  void Add(Vec a, Relation rel, double b);
  void SetLower(int j, double value);
  void SetUpper(int j, double value);
  void Validate() const;
};

// Multiplier signs follow the maximization convention: y >= 0 on <= rows,
// y <= 0 on >= rows, free on = rows, and c = A^T y + bound_dual at optimum.
struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  Vec primal;
  Vec dual;
  Vec bound_dual;
  double value = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

struct SolveOptions {
  double eps = 1e-9;
  int max_iterations = 0;  // 0: 50 * (rows + cols)
};

LpResult Solve(const LinearProgram& lp, const SolveOptions& options = {});

// Farkas certificate y (same sign convention as LpResult::dual) with
// sum_k y_k a_k + bound terms = 0 and y.b < 0.
struct FeasibilityResult {
  LpStatus status = LpStatus::kNumericalFailure;  // kOptimal means feasible
  Vec point;
  Vec certificate;
  Vec bound_certificate;
  double certificate_value = 0.0;  // y.b, negative when infeasible
  double residual = 0.0;
  bool feasible() const { return status == LpStatus::kOptimal; }
};

FeasibilityResult Feasible(const LinearProgram& lp, const SolveOptions& options = {});

// Row generation. `core` rows are always present; rows of `pool` are added
// in batches of the most violated ones until the relaxation optimum
// satisfies every pool row. The returned dual covers core rows followed by
// pool rows (zero for rows never added).
struct LazyOptions {
  SolveOptions solve;
  double violation_tol = 1e-9;
  int batch = 32;
  int initial_rows = 0;  // first pool rows added up front
};

LpResult SolveLazy(const LinearProgram& core, const std::vector<Constraint>& pool,
                   const LazyOptions& options = {});
FeasibilityResult FeasibleLazy(const LinearProgram& core,
                               const std::vector<Constraint>& pool,
                               const LazyOptions& options = {});

// Largest violation of the constraints and bounds at x.
double PrimalResidual(const LinearProgram& lp, const Vec& x);
double RowViolation(const Constraint& row, const Vec& x);

// Checks a Farkas certificate against the system; returns the residual of
// sum_k y_k a_k (plus bound terms) and writes y.b to `value`.
double CertificateResidual(const LinearProgram& lp, const Vec& y, const Vec& bound_y,
                           double* value);

}  // namespace rgs

#endif  // RGS_LP_CORE_H_
