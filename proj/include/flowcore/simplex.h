// Copyright 2026 The Flowcore Authors
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

#ifndef FLOWCORE_SIMPLEX_H_
#define FLOWCORE_SIMPLEX_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flowcore/rational.h"

namespace flowcore {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct LinearTerm {
  int var = 0;
  Rational coef;
};

// maximize c^T x  subject to  A x (<=, >=, =) b,  l <= x <= u,
// with finite lower bounds and optional upper bounds.
class LinearProgram {
 public:
  struct Variable {
    Rational objective;
    Rational lower;
    std::optional<Rational> upper;
    std::string name;
  };
  struct Constraint {
    std::vector<LinearTerm> terms;
    Relation relation = Relation::kLessEqual;
    Rational rhs;
    std::string name;
  };

  int AddVariable(Rational objective, Rational lower = 0,
                  std::optional<Rational> upper = std::nullopt,
                  std::string name = "");
  // Terms on the same variable are merged; zero coefficients are dropped.
  int AddConstraint(std::vector<LinearTerm> terms, Relation relation,
                    Rational rhs, std::string name = "");
  void SetObjective(int var, Rational coef) { vars_[var].objective = std::move(coef); }
  void SetUpper(int var, std::optional<Rational> upper) {
    vars_[var].upper = std::move(upper);
  }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int j) const { return vars_[j]; }
  const Constraint& constraint(int i) const { return rows_[i]; }

  Rational Objective(const std::vector<Rational>& x) const;
  Rational RowActivity(int i, const std::vector<Rational>& x) const;
  bool IsFeasible(const std::vector<Rational>& x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string ToString(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::kOptimal;
  Rational value;                  // optimal objective
  std::vector<Rational> point;     // optimum, or a feasible point if unbounded
  // Optimal: row duals y (>= 0 on <= rows, <= 0 on >= rows) and reduced
  // costs r = c - A^T y.
  std::vector<Rational> duals;
  std::vector<Rational> reduced_costs;
  // Infeasible: row multipliers y (same signs) and upper-bound multipliers
  // nu >= 0 with A^T y + nu >= 0 and y^T (b - A l) + nu^T (u - l) < 0.
  std::vector<Rational> farkas_rows;
  std::vector<Rational> farkas_bounds;
  // Unbounded: a recession direction with c^T ray > 0.
  std::vector<Rational> ray;
  std::int64_t iterations = 0;
};

struct SolveOptions {
  enum class Pricing { kDantzigThenBland, kBland };
  Pricing pricing = Pricing::kDantzigThenBland;
  // Consecutive degenerate pivots after which pricing switches to Bland's
  // rule for the rest of the solve.
  int degenerate_switch = 50;
  std::int64_t max_iterations = 1'000'000;
  // A floating-point run may propose the optimal basis, which is then
  // rebuilt and checked exactly; the exact tableau runs when it fails.
  enum class Guide { kAuto, kNever, kAlways };
  Guide guide = Guide::kAuto;
  // kAuto guides when rows * (variables + rows) reaches this.
  std::int64_t guide_threshold = 4000;
  // Relative right-hand-side perturbation of the floating-point run.
  double perturbation = 1e-6;
};

// Exact bounded-variable two-phase primal simplex. Every returned outcome has
// been checked against the matching Verify* routine; a failed check throws
// Error(kSolver).
LpOutcome Solve(const LinearProgram& lp, const SolveOptions& options = {});

// Independent checks, usable on outcomes from any source.
bool VerifyOptimal(const LinearProgram& lp, const LpOutcome& outcome,
                   std::string* why = nullptr);
bool VerifyFarkas(const LinearProgram& lp, const std::vector<Rational>& rows,
                  const std::vector<Rational>& bounds, std::string* why = nullptr);
bool VerifyRay(const LinearProgram& lp, const LpOutcome& outcome,
               std::string* why = nullptr);

// Human-readable LP listing.
std::string DumpLp(const LinearProgram& lp);

}  // namespace flowcore

#endif  // FLOWCORE_SIMPLEX_H_
