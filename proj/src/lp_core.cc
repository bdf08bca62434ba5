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

#include "rgs/lp_core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <Eigen/Dense>

namespace rgs {
namespace {

// Internal standard form: maximize c.z, D z <= r, z >= 0 with every original
// variable split into z+ - z-.
struct RowOrigin {
  int index;    // constraint index, or variable index for bound rows
  int sign;     // +1 or -1 applied to the original row
  bool bound;   // true for variable-bound rows
  double scale; // the row was divided by this (its largest |coefficient|)
};

constexpr double kHarrisTol = 1e-9;
constexpr double kPivotTol = 1e-7;
constexpr double kDropTol = 1e-12;
constexpr double kMinRowScale = 1e-6;

class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), w_(n + 2), d_((m + 2) * (n + 2), 0.0),
                          basis_(m), nonbasis_(n + 1) {}

  double& at(int i, int j) { return d_[static_cast<std::size_t>(i) * w_ + j]; }
  double at(int i, int j) const { return d_[static_cast<std::size_t>(i) * w_ + j]; }

  void Init() {
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      at(i, n_) = -1.0;
    }
    for (int j = 0; j < n_; ++j) nonbasis_[j] = j;
    nonbasis_[n_] = -1;
    at(m_ + 1, n_) = 1.0;
  }

  void Pivot(int r, int s) {
    double* pr = &at(r, 0);
    const double inv = 1.0 / pr[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* pi = &at(i, 0);
      if (std::fabs(pi[s]) <= 1e-300) continue;
      const double f = pi[s] * inv;
      for (int j = 0; j < n_ + 2; ++j) pi[j] -= pr[j] * f;
      pi[s] = -f;
    }
    for (int j = 0; j < n_ + 2; ++j) pr[j] *= inv;
    pr[s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Dantzig pricing, switching to Bland's rule (smallest variable index
  // enters, ratio ties to the smallest basic index) after a run of
  // degenerate pivots; Bland stays on until the objective moves again, which
  // keeps the anti-cycling guarantee.
  enum class Outcome { kOptimal, kUnbounded, kIterationLimit };
  Outcome Run(int phase, double eps, int* iterations, int limit) {
    const int x = m_ + phase - 1;
    constexpr int kDegenerateRun = 50;
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate >= kDegenerateRun;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == -phase) continue;
        const double c = at(x, j);
        if (c >= -eps) continue;
        if (s == -1) {
          s = j;
        } else if (bland ? nonbasis_[j] < nonbasis_[s]
                         : (c < at(x, s) || (c == at(x, s) && nonbasis_[j] < nonbasis_[s]))) {
          s = j;
        }
      }
      if (s == -1) return Outcome::kOptimal;
      double best = 0.0;
      const int r = RatioRow(s, eps, bland, &best);
      if (r == -1) return Outcome::kUnbounded;
      if (++*iterations > limit) return Outcome::kIterationLimit;
      if (best <= eps) {
        ++degenerate;
      } else {
        degenerate = 0;
      }
      Pivot(r, s);
    }
  }

  // Harris two-pass ratio test. Pass one bounds the step by every row with a
  // positive entry, each relaxed by kHarrisTol; pass two picks among the rows
  // within the bound, preferring pivot elements of at least kPivotTol. Dantzig
  // mode takes the largest pivot element, Bland mode the smallest basic index.
  int RatioRow(int s, double eps, bool bland, double* best) const {
    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      const double a = at(i, s);
      if (a > eps) bound = std::min(bound, (at(i, n_ + 1) + kHarrisTol) / a);
    }
    int r = -1;
    bool r_large = false;
    for (int i = 0; i < m_; ++i) {
      const double a = at(i, s);
      if (a <= eps) continue;
      const double ratio = at(i, n_ + 1) / a;
      if (ratio > bound) continue;
      const bool large = a >= kPivotTol;
      bool take = r == -1 || (large && !r_large);
      if (!take && large == r_large) {
        const double ar = at(r, s);
        take = bland ? basis_[i] < basis_[r]
                     : (a > ar || (a == ar && basis_[i] < basis_[r]));
      }
      if (take) {
        r = i;
        r_large = large;
        *best = ratio;
      }
    }
    return r;
  }

  // Recomputes every entry from the original data for the current basis:
  // column v of [D | I] is D's column v (v < n), unit vector e_{v-n} (v >= n)
  // or the phase-one column (all -1 until ResetPhaseOne moves it). A singular
  // basis is repaired by swapping its dependent columns for slacks of the
  // rows they leave uncovered. `cost` holds the phase-two objective.
  bool Rebuild(const std::vector<Vec>& rows, const Vec& rhs, const Vec& cost) {
    if (art_.size() != m_) art_ = Eigen::VectorXd::Constant(m_, -1.0);
    auto column = [&](int v, Eigen::VectorXd* out) {
      if (v == -1) {
        *out = art_;
        return;
      }
      out->setZero(m_);
      if (v >= n_) {
        (*out)(v - n_) = 1.0;
        return;
      }
      // Free variables are split: column 2j is +x_j, 2j+1 is -x_j.
      for (int i = 0; i < m_; ++i) (*out)(i) = v % 2 == 0 ? rows[i][v / 2] : -rows[i][v / 2];
    };
    Eigen::MatrixXd b(m_, m_);
    Eigen::VectorXd col;
    for (int i = 0; i < m_; ++i) {
      column(basis_[i], &col);
      b.col(i) = col;
    }
    if (m_ > 0 && !RepairBasis(&b)) return false;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    if (m_ > 0 && !(lu.rcond() > 1e-14)) return false;
    Eigen::MatrixXd rhs_cols(m_, n_ + 2);
    for (int j = 0; j <= n_; ++j) {
      column(nonbasis_[j], &col);
      rhs_cols.col(j) = col;
    }
    for (int i = 0; i < m_; ++i) rhs_cols(i, n_ + 1) = rhs[i];
    const Eigen::MatrixXd x = lu.solve(rhs_cols);
    if (!x.allFinite()) return false;
    basis_matrix_ = b;
    cost_ = cost;
    auto c = [&](int v) { return v >= 0 && v < n_ ? cost[v] : 0.0; };
    auto c1 = [](int v) { return v == -1 ? -1.0 : 0.0; };
    for (int j = 0; j < n_ + 2; ++j) {
      double z = 0.0, z1 = 0.0;
      for (int i = 0; i < m_; ++i) {
        at(i, j) = x(i, j);
        z += c(basis_[i]) * x(i, j);
        z1 += c1(basis_[i]) * x(i, j);
      }
      at(m_, j) = j <= n_ ? z - c(nonbasis_[j]) : z;
      at(m_ + 1, j) = j <= n_ ? z1 - c1(nonbasis_[j]) : z1;
    }
    return true;
  }

  // Swaps the dependent columns of a rank-deficient basis for the slacks of
  // the rows the independent columns leave uncovered.
  bool RepairBasis(Eigen::MatrixXd* b) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(*b);
    qr.setThreshold(1e-11);
    const int r = static_cast<int>(qr.rank());
    if (r == m_) return true;
    const auto& perm = qr.colsPermutation().indices();
    Eigen::MatrixXd ind(m_, r);
    for (int k = 0; k < r; ++k) ind.col(k) = b->col(perm[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rows_qr(ind.transpose());
    rows_qr.setThreshold(1e-11);
    if (rows_qr.rank() != r) return false;
    const auto& row_perm = rows_qr.colsPermutation().indices();
    std::vector<int> removed, added;
    for (int k = r; k < m_; ++k) {
      const int p = perm[k];
      const int row = row_perm[k];
      const int slack = n_ + row;
      if (basis_[p] != slack) {
        removed.push_back(basis_[p]);
        added.push_back(slack);
      }
      basis_[p] = slack;
      b->col(p).setZero();
      (*b)(row, p) = 1.0;
    }
    // Vars that only changed position cancel out of the swap lists.
    for (std::size_t k = 0; k < added.size();) {
      auto it = std::find(removed.begin(), removed.end(), added[k]);
      if (it != removed.end()) {
        removed.erase(it);
        added.erase(added.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        ++k;
      }
    }
    for (std::size_t k = 0; k < added.size(); ++k) {
      auto it = std::find(nonbasis_.begin(), nonbasis_.end(), added[k]);
      if (it == nonbasis_.end()) return false;
      *it = removed[k];
    }
    return true;
  }

  // Redefines the (nonbasic) phase-one column as -1 in every row of the
  // current tableau, so pivoting it into the most negative row restores
  // primal feasibility. Needs a preceding successful Rebuild.
  bool ResetPhaseOne() {
    int s = -1;
    for (int j = 0; j <= n_; ++j)
      if (nonbasis_[j] == -1) s = j;
    if (s == -1 || basis_matrix_.rows() != m_) return false;
    art_ = -basis_matrix_ * Eigen::VectorXd::Ones(m_);
    double z = 0.0;
    for (int i = 0; i < m_; ++i) {
      at(i, s) = -1.0;
      if (basis_[i] < n_) z -= cost_[basis_[i]];
    }
    at(m_, s) = z;
    at(m_ + 1, s) = 1.0;
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) at(m_ + 1, j) = 0.0;
    return true;
  }

  int ArtificialColumn() const {
    for (int j = 0; j <= n_; ++j)
      if (nonbasis_[j] == -1) return j;
    return -1;
  }

  // Dual simplex on the phase-two objective: drives negative basic values
  // out while keeping reduced costs nonnegative. Returns false when a row
  // proves the current constraints infeasible.
  enum class DualOutcome { kFeasible, kInfeasible, kIterationLimit };
  DualOutcome RunDual(double eps, int* iterations, int limit) {
    for (;;) {
      int r = -1;
      for (int i = 0; i < m_; ++i)
        if (at(i, n_ + 1) < -eps && (r == -1 || at(i, n_ + 1) < at(r, n_ + 1))) r = i;
      if (r == -1) return DualOutcome::kFeasible;
      int s = -1;
      double best = 0.0;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == -1) continue;
        const double a = at(r, j);
        if (a >= -kPivotTol) continue;
        const double ratio = std::max(0.0, at(m_, j)) / -a;
        if (s == -1 || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && std::fabs(a) > std::fabs(at(r, s)))) {
          s = j;
          best = ratio;
        }
      }
      if (s == -1) return DualOutcome::kInfeasible;
      if (++*iterations > limit) return DualOutcome::kIterationLimit;
      Pivot(r, s);
    }
  }

  int m() const { return m_; }
  int n() const { return n_; }
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<int>& nonbasis() const { return nonbasis_; }

 private:
  int m_, n_;
  std::size_t w_;
  std::vector<double> d_;
  std::vector<int> basis_, nonbasis_;
  Eigen::VectorXd art_;
  Eigen::MatrixXd basis_matrix_;
  Vec cost_;
};

struct StandardForm {
  std::vector<Vec> rows;  // over original variables
  Vec rhs;
  std::vector<RowOrigin> origin;
};

StandardForm ToStandardForm(const LinearProgram& lp) {
  StandardForm sf;
  const int nv = lp.num_vars();
  auto push = [&](const Vec& a, double b, int sign, int index, bool bound) {
    // Coefficients at roundoff level are dropped; rows are equilibrated to a
    // unit largest coefficient, amplifying by at most 1/kMinRowScale.
    double scale = kMinRowScale;
    for (int j = 0; j < nv; ++j)
      if (std::fabs(a[j]) > kDropTol) scale = std::max(scale, std::fabs(a[j]));
    Vec row(nv, 0.0);
    for (int j = 0; j < nv; ++j)
      if (std::fabs(a[j]) > kDropTol) row[j] = sign * a[j] / scale;
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(sign * b / scale);
    sf.origin.push_back({index, sign, bound, scale});
  };
  for (std::size_t k = 0; k < lp.constraints.size(); ++k) {
    const Constraint& c = lp.constraints[k];
    const int idx = static_cast<int>(k);
    if (c.rel != Relation::kGreaterEq) push(c.a, c.b, +1, idx, false);
    if (c.rel != Relation::kLessEq) push(c.a, c.b, -1, idx, false);
  }
  for (int j = 0; j < nv; ++j) {
    Vec e(nv, 0.0);
    e[j] = 1.0;
    if (!lp.lower.empty() && lp.lower[j]) push(e, *lp.lower[j], -1, j, true);
    if (!lp.upper.empty() && lp.upper[j]) push(e, *lp.upper[j], +1, j, true);
  }
  return sf;
}

void FillCertificates(const LinearProgram& lp, const LpResult& res, double* dual_residual,
                      double* gap) {
  const int nv = lp.num_vars();
  Vec reduced = lp.objective;
  double dual_value = 0.0;
  double sign_violation = 0.0;
  for (std::size_t k = 0; k < lp.constraints.size(); ++k) {
    const Constraint& c = lp.constraints[k];
    const double y = res.dual[k];
    for (int j = 0; j < nv; ++j) reduced[j] -= y * c.a[j];
    dual_value += y * c.b;
    if (c.rel == Relation::kLessEq) sign_violation = std::max(sign_violation, -y);
    if (c.rel == Relation::kGreaterEq) sign_violation = std::max(sign_violation, y);
  }
  for (int j = 0; j < nv; ++j) {
    const double y = res.bound_dual[j];
    reduced[j] -= y;
    const bool lo = !lp.lower.empty() && lp.lower[j].has_value();
    const bool up = !lp.upper.empty() && lp.upper[j].has_value();
    if (lo && up) {
      dual_value += y > 0 ? y * *lp.upper[j] : y * *lp.lower[j];
    } else if (up) {
      dual_value += y * *lp.upper[j];
      sign_violation = std::max(sign_violation, -y);
    } else if (lo) {
      dual_value += y * *lp.lower[j];
      sign_violation = std::max(sign_violation, y);
    } else {
      sign_violation = std::max(sign_violation, std::fabs(y));
    }
  }
  double r = sign_violation;
  for (double v : reduced) r = std::max(r, std::fabs(v));
  *dual_residual = r;
  *gap = std::fabs(res.value - dual_value);
}

}  // namespace

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
    case LpStatus::kNumericalFailure: return "NumericalFailure";
  }
  return "?";
}

void LinearProgram::Add(Vec a, Relation rel, double b) {
  constraints.push_back({std::move(a), rel, b});
}

void LinearProgram::SetLower(int j, double value) {
  if (lower.empty()) lower.resize(objective.size());
  lower[j] = value;
}

void LinearProgram::SetUpper(int j, double value) {
  if (upper.empty()) upper.resize(objective.size());
  upper[j] = value;
}

void LinearProgram::Validate() const {
  const std::size_t n = objective.size();
  for (const Constraint& c : constraints) {
    if (c.a.size() != n) throw ValidationError("LP row length differs from objective");
    if (!std::isfinite(c.b)) throw ValidationError("LP right-hand side not finite");
  }
  if (!lower.empty() && lower.size() != n) throw ValidationError("LP lower bounds size");
  if (!upper.empty() && upper.size() != n) throw ValidationError("LP upper bounds size");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (lower[j] && !std::isfinite(*lower[j])) throw ValidationError("LP bound not finite");
  for (std::size_t j = 0; j < upper.size(); ++j)
    if (upper[j] && !std::isfinite(*upper[j])) throw ValidationError("LP bound not finite");
}

double RowViolation(const Constraint& row, const Vec& x) {
  const double lhs = Dot(row.a, x);
  switch (row.rel) {
    case Relation::kLessEq: return std::max(0.0, lhs - row.b);
    case Relation::kGreaterEq: return std::max(0.0, row.b - lhs);
    case Relation::kEqual: return std::fabs(lhs - row.b);
  }
  return 0.0;
}

double PrimalResidual(const LinearProgram& lp, const Vec& x) {
  double r = 0.0;
  for (const Constraint& c : lp.constraints) r = std::max(r, RowViolation(c, x));
  for (std::size_t j = 0; j < lp.lower.size(); ++j)
    if (lp.lower[j]) r = std::max(r, *lp.lower[j] - x[j]);
  for (std::size_t j = 0; j < lp.upper.size(); ++j)
    if (lp.upper[j]) r = std::max(r, x[j] - *lp.upper[j]);
  return r;
}

LpResult Solve(const LinearProgram& lp, const SolveOptions& options) {
  lp.Validate();
  const int nv = lp.num_vars();
  const StandardForm sf = ToStandardForm(lp);
  const int m = static_cast<int>(sf.rows.size());
  const int n = 2 * nv;
  Tableau t(m, n);
  t.Init();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nv; ++j) {
      t.at(i, 2 * j) = sf.rows[i][j];
      t.at(i, 2 * j + 1) = -sf.rows[i][j];
    }
    t.at(i, n + 1) = sf.rhs[i];
  }
  for (int j = 0; j < nv; ++j) {
    t.at(m, 2 * j) = -lp.objective[j];
    t.at(m, 2 * j + 1) = lp.objective[j];
  }

  LpResult res;
  const double eps = options.eps;
  const int limit = options.max_iterations > 0 ? options.max_iterations : 50 * (m + n + 2);
  using Outcome = Tableau::Outcome;

  // Phase one: the artificial column enters at the most negative row and is
  // then minimized out. False when the constraints are infeasible.
  auto phase_one = [&](Outcome* o) {
    *o = Outcome::kOptimal;
    int r = -1;
    for (int i = 0; i < m; ++i)
      if (t.at(i, n + 1) < -eps && (r == -1 || t.at(i, n + 1) < t.at(r, n + 1))) r = i;
    if (r == -1) return true;
    t.Pivot(r, t.ArtificialColumn());
    *o = t.Run(2, eps, &res.iterations, limit);
    if (*o != Outcome::kOptimal || t.at(m + 1, n + 1) < -eps) return false;
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] != -1) continue;
      int s = -1;
      for (int j = 0; j < n; ++j)
        if (s == -1 || std::fabs(t.at(i, j)) > std::fabs(t.at(i, s))) s = j;
      if (s >= 0 && std::fabs(t.at(i, s)) > eps) t.Pivot(i, s);
    }
    return true;
  };
  Outcome o1;
  if (!phase_one(&o1)) {
    res.status = o1 == Outcome::kIterationLimit ? LpStatus::kNumericalFailure
                                                : LpStatus::kInfeasible;
    return res;
  }
  Vec cost(n);
  for (int j = 0; j < nv; ++j) {
    cost[2 * j] = lp.objective[j];
    cost[2 * j + 1] = -lp.objective[j];
  }
  Vec z(n);
  // Drift check: a basis whose fresh solve disagrees with the tableau is
  // reinverted (repairing it if singular), made primal feasible again by
  // dual simplex or a fresh phase one, and re-optimized.
  constexpr int kMaxReinversions = 3;
  for (int pass = 0;; ++pass) {
    const Outcome o = t.Run(1, eps, &res.iterations, limit);
    if (o == Outcome::kIterationLimit) {
      res.status = LpStatus::kNumericalFailure;
      return res;
    }
    if (o == Outcome::kUnbounded) {
      res.status = LpStatus::kUnbounded;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (int i = 0; i < m; ++i)
      if (t.basis()[i] >= 0 && t.basis()[i] < n) z[t.basis()[i]] = t.at(i, n + 1);
    res.primal.assign(nv, 0.0);
    for (int j = 0; j < nv; ++j) res.primal[j] = z[2 * j] - z[2 * j + 1];
    const double value = Dot(lp.objective, res.primal);
    if (PrimalResidual(lp, res.primal) <= 1e-9 * (1.0 + std::fabs(value)) ||
        pass == kMaxReinversions || !t.Rebuild(sf.rows, sf.rhs, cost))
      break;
    bool dual_feasible = true;
    for (int j = 0; j <= n; ++j)
      if (t.nonbasis()[j] != -1 && t.at(m, j) < -eps) dual_feasible = false;
    if (dual_feasible) {
      const Tableau::DualOutcome d = t.RunDual(eps, &res.iterations, limit);
      if (d == Tableau::DualOutcome::kIterationLimit) {
        res.status = LpStatus::kNumericalFailure;
        return res;
      }
      if (d == Tableau::DualOutcome::kInfeasible) {
        res.status = LpStatus::kInfeasible;
        return res;
      }
    } else if (!t.ResetPhaseOne()) {
      break;
    } else if (!phase_one(&o1)) {
      res.status = o1 == Outcome::kIterationLimit ? LpStatus::kNumericalFailure
                                                  : LpStatus::kInfeasible;
      return res;
    }
  }

  Vec y_int(m, 0.0);
  for (int j = 0; j <= n; ++j) {
    const int var = t.nonbasis()[j];
    if (var >= n) y_int[var - n] = t.at(m, j);
  }
  res.dual.assign(lp.constraints.size(), 0.0);
  res.bound_dual.assign(nv, 0.0);
  for (int i = 0; i < m; ++i) {
    const RowOrigin& o2 = sf.origin[i];
    if (o2.bound) {
      res.bound_dual[o2.index] += o2.sign * y_int[i] / o2.scale;
    } else {
      res.dual[o2.index] += o2.sign * y_int[i] / o2.scale;
    }
  }
  res.value = Dot(lp.objective, res.primal);
  res.primal_residual = PrimalResidual(lp, res.primal);
  FillCertificates(lp, res, &res.dual_residual, &res.gap);
  res.status = LpStatus::kOptimal;
  const double scale = 1.0 + std::fabs(res.value);
  if (res.primal_residual > 1e-6 * scale || res.dual_residual > 1e-6 * scale)
    res.status = LpStatus::kNumericalFailure;
  return res;
}

double CertificateResidual(const LinearProgram& lp, const Vec& y, const Vec& bound_y,
                           double* value) {
  const int nv = lp.num_vars();
  Vec comb(nv, 0.0);
  double v = 0.0;
  double sign_violation = 0.0;
  for (std::size_t k = 0; k < lp.constraints.size(); ++k) {
    const Constraint& c = lp.constraints[k];
    for (int j = 0; j < nv; ++j) comb[j] += y[k] * c.a[j];
    v += y[k] * c.b;
    if (c.rel == Relation::kLessEq) sign_violation = std::max(sign_violation, -y[k]);
    if (c.rel == Relation::kGreaterEq) sign_violation = std::max(sign_violation, y[k]);
  }
  for (int j = 0; j < nv && !bound_y.empty(); ++j) {
    const double yb = bound_y[j];
    if (yb == 0.0) continue;
    comb[j] += yb;
    if (yb > 0) {
      if (lp.upper.empty() || !lp.upper[j]) sign_violation = std::max(sign_violation, yb);
      else v += yb * *lp.upper[j];
    } else {
      if (lp.lower.empty() || !lp.lower[j]) sign_violation = std::max(sign_violation, -yb);
      else v += yb * *lp.lower[j];
    }
  }
  double r = sign_violation;
  for (double c : comb) r = std::max(r, std::fabs(c));
  if (value) *value = v;
  return r;
}

namespace {

// Auxiliary program: maximize -t s.t. a.x - t <= b for every row in <= form
// (equalities contribute both directions), t >= 0. Its optimal dual on the
// rows is a Farkas certificate whenever t* > 0.
struct AuxBuild {
  LinearProgram lp;
  std::vector<RowOrigin> origin;
};

void AppendAuxRows(const Constraint& c, int index, bool bound, int nv, AuxBuild* out) {
  auto push = [&](int sign) {
    Vec a(nv + 1, 0.0);
    for (int j = 0; j < nv; ++j) a[j] = sign * c.a[j];
    a[nv] = -1.0;
    out->lp.Add(std::move(a), Relation::kLessEq, sign * c.b);
    out->origin.push_back({index, sign, bound, 1.0});
  };
  if (c.rel != Relation::kGreaterEq) push(+1);
  if (c.rel != Relation::kLessEq) push(-1);
}

AuxBuild BuildAux(const LinearProgram& lp) {
  const int nv = lp.num_vars();
  AuxBuild aux;
  aux.lp.objective.assign(nv + 1, 0.0);
  aux.lp.objective[nv] = -1.0;
  aux.lp.SetLower(nv, 0.0);
  for (std::size_t k = 0; k < lp.constraints.size(); ++k)
    AppendAuxRows(lp.constraints[k], static_cast<int>(k), false, nv, &aux);
  for (int j = 0; j < nv; ++j) {
    Vec e(nv, 0.0);
    e[j] = 1.0;
    if (!lp.lower.empty() && lp.lower[j])
      AppendAuxRows({e, Relation::kGreaterEq, *lp.lower[j]}, j, true, nv, &aux);
    if (!lp.upper.empty() && lp.upper[j])
      AppendAuxRows({e, Relation::kLessEq, *lp.upper[j]}, j, true, nv, &aux);
  }
  return aux;
}

FeasibilityResult FromAux(const LinearProgram& lp, const AuxBuild& aux, const LpResult& r,
                          double tol) {
  FeasibilityResult out;
  const int nv = lp.num_vars();
  if (r.status != LpStatus::kOptimal) {
    out.status = LpStatus::kNumericalFailure;
    return out;
  }
  const double t = r.primal[nv];
  if (t <= tol) {
    out.status = LpStatus::kOptimal;
    out.point.assign(r.primal.begin(), r.primal.begin() + nv);
    out.residual = PrimalResidual(lp, out.point);
    return out;
  }
  out.status = LpStatus::kInfeasible;
  out.certificate.assign(lp.constraints.size(), 0.0);
  out.bound_certificate.assign(nv, 0.0);
  for (std::size_t k = 0; k < aux.origin.size(); ++k) {
    const RowOrigin& o = aux.origin[k];
    const double y = o.sign * r.dual[k];
    if (o.bound) {
      out.bound_certificate[o.index] += y;
    } else {
      out.certificate[o.index] += y;
    }
  }
  out.residual =
      CertificateResidual(lp, out.certificate, out.bound_certificate, &out.certificate_value);
  if (out.certificate_value >= 0.0) out.status = LpStatus::kNumericalFailure;
  return out;
}

}  // namespace

FeasibilityResult Feasible(const LinearProgram& lp, const SolveOptions& options) {
  lp.Validate();
  const AuxBuild aux = BuildAux(lp);
  const LpResult r = Solve(aux.lp, options);
  return FromAux(lp, aux, r, 1e-8);
}

LpResult SolveLazy(const LinearProgram& core, const std::vector<Constraint>& pool,
                   const LazyOptions& options) {
  LinearProgram work = core;
  std::vector<int> added;  // pool index of each appended row
  std::vector<char> in(pool.size(), 0);
  const int initial = std::min<int>(options.initial_rows, static_cast<int>(pool.size()));
  for (int k = 0; k < initial; ++k) {
    work.constraints.push_back(pool[k]);
    added.push_back(k);
    in[k] = 1;
  }
  for (;;) {
    LpResult r = Solve(work, options.solve);
    if (r.status == LpStatus::kUnbounded && added.size() < pool.size()) {
      // No point to rank rows by; the relaxation needs the whole pool.
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (in[k]) continue;
        work.constraints.push_back(pool[k]);
        added.push_back(static_cast<int>(k));
        in[k] = 1;
      }
      continue;
    }
    if (r.status != LpStatus::kOptimal) return r;
    std::vector<std::pair<double, int>> violated;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (in[k]) continue;
      const double v = RowViolation(pool[k], r.primal);
      if (v > options.violation_tol) violated.push_back({-v, static_cast<int>(k)});
    }
    if (violated.empty()) {
      const std::size_t nc = core.constraints.size();
      Vec dual(nc + pool.size(), 0.0);
      for (std::size_t k = 0; k < nc; ++k) dual[k] = r.dual[k];
      for (std::size_t k = 0; k < added.size(); ++k) dual[nc + added[k]] = r.dual[nc + k];
      r.dual = std::move(dual);
      double worst = r.primal_residual;
      for (const Constraint& c : pool) worst = std::max(worst, RowViolation(c, r.primal));
      r.primal_residual = worst;
      return r;
    }
    std::sort(violated.begin(), violated.end());
    const int take = std::min<int>(options.batch, static_cast<int>(violated.size()));
    for (int k = 0; k < take; ++k) {
      const int idx = violated[k].second;
      work.constraints.push_back(pool[idx]);
      added.push_back(idx);
      in[idx] = 1;
    }
  }
}

FeasibilityResult FeasibleLazy(const LinearProgram& core, const std::vector<Constraint>& pool,
                               const LazyOptions& options) {
  core.Validate();
  const int nv = core.num_vars();
  AuxBuild aux = BuildAux(core);
  // Pool rows become auxiliary rows too; equality rows are not expected here.
  std::vector<Constraint> aux_pool;
  std::vector<RowOrigin> pool_origin;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    AuxBuild tmp;
    AppendAuxRows(pool[k], static_cast<int>(core.constraints.size() + k), false, nv, &tmp);
    for (std::size_t q = 0; q < tmp.lp.constraints.size(); ++q) {
      aux_pool.push_back(tmp.lp.constraints[q]);
      pool_origin.push_back(tmp.origin[q]);
    }
  }
  const LpResult r = SolveLazy(aux.lp, aux_pool, options);
  LinearProgram full = core;
  for (const Constraint& c : pool) full.constraints.push_back(c);
  AuxBuild joined = aux;
  // Core aux rows come first, bound rows were appended after them in BuildAux,
  // so the pool origins follow in the dual vector returned by SolveLazy.
  for (const RowOrigin& o : pool_origin) joined.origin.push_back(o);
  return FromAux(full, joined, r, 1e-8);
}

}  // namespace rgs
