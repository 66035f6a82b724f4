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

#include "flowcore/simplex.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "flowcore/error.h"

namespace flowcore {

int LinearProgram::AddVariable(Rational objective, Rational lower,
                               std::optional<Rational> upper, std::string name) {
  if (name.empty()) name = "x" + std::to_string(vars_.size());
  vars_.push_back({std::move(objective), std::move(lower), std::move(upper),
                   std::move(name)});
  return num_variables() - 1;
}

int LinearProgram::AddConstraint(std::vector<LinearTerm> terms,
                                 Relation relation, Rational rhs,
                                 std::string name) {
  std::map<int, Rational> merged;
  for (LinearTerm& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw Error(ErrorKind::kStructural,
                  "constraint refers to unknown variable " + std::to_string(t.var));
    }
    merged[t.var] += t.coef;
  }
  Constraint row;
  for (auto& [var, coef] : merged) {
    if (coef != 0) row.terms.push_back({var, coef});
  }
  row.relation = relation;
  row.rhs = std::move(rhs);
  row.name = name.empty() ? "r" + std::to_string(rows_.size()) : std::move(name);
  rows_.push_back(std::move(row));
  return num_constraints() - 1;
}

Rational LinearProgram::Objective(const std::vector<Rational>& x) const {
  Rational total = 0;
  for (int j = 0; j < num_variables(); ++j) total += vars_[j].objective * x[j];
  return total;
}

Rational LinearProgram::RowActivity(int i, const std::vector<Rational>& x) const {
  Rational total = 0;
  for (const LinearTerm& t : rows_[i].terms) total += t.coef * x[t.var];
  return total;
}

bool LinearProgram::IsFeasible(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != num_variables()) return false;
  for (int j = 0; j < num_variables(); ++j) {
    if (x[j] < vars_[j].lower) return false;
    if (vars_[j].upper && x[j] > *vars_[j].upper) return false;
  }
  for (int i = 0; i < num_constraints(); ++i) {
    const Rational lhs = RowActivity(i, x);
    switch (rows_[i].relation) {
      case Relation::kLessEqual:
        if (lhs > rows_[i].rhs) return false;
        break;
      case Relation::kGreaterEqual:
        if (lhs < rows_[i].rhs) return false;
        break;
      case Relation::kEqual:
        if (lhs != rows_[i].rhs) return false;
        break;
    }
  }
  return true;
}

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

bool Fail(std::string* why, const std::string& message) {
  if (why != nullptr) *why = message;
  return false;
}

bool DualSignOk(Relation relation, const Rational& y) {
  switch (relation) {
    case Relation::kLessEqual:
      return y >= 0;
    case Relation::kGreaterEqual:
      return y <= 0;
    case Relation::kEqual:
      return true;
  }
  return false;
}

std::vector<Rational> TransposeTimes(const LinearProgram& lp,
                                     const std::vector<Rational>& y) {
  std::vector<Rational> g(lp.num_variables(), Rational(0));
  for (int i = 0; i < lp.num_constraints(); ++i) {
    if (y[i] == 0) continue;
    for (const LinearTerm& t : lp.constraint(i).terms) g[t.var] += y[i] * t.coef;
  }
  return g;
}

// Arithmetic used by the tableau: exact for Rational, toleranced for double.
template <typename T>
struct Num;

template <>
struct Num<Rational> {
  static Rational From(const Rational& x) { return x; }
  static int Sign(const Rational& x) { return sgn(x); }
  static bool Zero(const Rational& x) { return x == 0; }
  static Rational Abs(const Rational& x) { return abs(x); }
  // a -= f * b
  static void MulSub(Rational& a, const Rational& f, const Rational& b,
                     Rational& tmp) {
    mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), b.get_mpq_t());
    mpq_sub(a.get_mpq_t(), a.get_mpq_t(), tmp.get_mpq_t());
  }
};

template <>
struct Num<double> {
  static constexpr double kEps = 1e-9;
  static double From(const Rational& x) { return x.get_d(); }
  static int Sign(double x) { return x > kEps ? 1 : (x < -kEps ? -1 : 0); }
  static bool Zero(double x) { return std::fabs(x) <= kEps; }
  static double Abs(double x) { return std::fabs(x); }
  static void MulSub(double& a, double f, double b, double&) {
    a -= f * b;
    if (std::fabs(a) < 1e-12) a = 0;
  }
};

enum class Step { kOptimal, kUnbounded };

// Dense tableau over the shifted problem x' = x - l. Columns are the
// structural variables, then one slack per inequality row, then artificials.
template <typename T>
class Tableau {
 public:
  using N = Num<T>;

  Tableau(const LinearProgram& lp, const SolveOptions& options)
      : lp_(lp), options_(options) {
    n_ = lp.num_variables();
    m_ = lp.num_constraints();
    sigma_.assign(m_, 1);
    init_col_.assign(m_, -1);
    std::vector<int> slack_of(m_, -1);
    std::vector<int> slack_sign(m_, 0);
    int cols = n_;
    for (int i = 0; i < m_; ++i) {
      if (lp.constraint(i).relation != Relation::kEqual) {
        slack_of[i] = cols++;
        slack_sign[i] = lp.constraint(i).relation == Relation::kLessEqual ? 1 : -1;
      }
    }
    first_artificial_ = cols;
    std::vector<Rational> rhs(m_);
    for (int i = 0; i < m_; ++i) {
      rhs[i] = lp.constraint(i).rhs;
      for (const LinearTerm& t : lp.constraint(i).terms) {
        rhs[i] -= t.coef * lp.variable(t.var).lower;
      }
      if (rhs[i] < 0) sigma_[i] = -1;
      if (slack_of[i] >= 0 && sigma_[i] * slack_sign[i] == 1) {
        init_col_[i] = slack_of[i];
      } else {
        init_col_[i] = cols++;
      }
    }
    cols_ = cols;
    a_.assign(static_cast<size_t>(m_) * cols_, T(0));
    upper_.assign(cols_, std::nullopt);
    for (int j = 0; j < n_; ++j) {
      if (lp.variable(j).upper) {
        upper_[j] = N::From(*lp.variable(j).upper - lp.variable(j).lower);
      }
    }
    beta_.resize(m_);
    basis_.resize(m_);
    row_of_.assign(cols_, -1);
    at_upper_.assign(cols_, 0);
    for (int i = 0; i < m_; ++i) {
      for (const LinearTerm& t : lp.constraint(i).terms) {
        At(i, t.var) = N::From(sigma_[i] > 0 ? t.coef : Rational(-t.coef));
      }
      if (slack_of[i] >= 0) At(i, slack_of[i]) = T(sigma_[i] * slack_sign[i]);
      At(i, init_col_[i]) = T(1);
      beta_[i] = N::From(sigma_[i] > 0 ? rhs[i] : Rational(-rhs[i]));
      basis_[i] = init_col_[i];
      row_of_[init_col_[i]] = i;
    }
    bland_ = options.pricing == SolveOptions::Pricing::kBland;
    original_beta_ = beta_;
  }

  // Raises every right-hand side by a distinct tiny amount, breaking ties
  // between degenerate vertices. Floating-point runs only.
  void Perturb() {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(1.0, 2.0);
    for (int i = 0; i < m_; ++i) {
      beta_[i] += options_.perturbation * unit(rng) * (1.0 + std::fabs(beta_[i]));
    }
  }

  int rows() const { return m_; }
  int cols() const { return cols_; }
  int num_structural() const { return n_; }
  int first_artificial() const { return first_artificial_; }
  int sigma(int i) const { return sigma_[i]; }
  int init_col(int i) const { return init_col_[i]; }
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<char>& at_upper() const { return at_upper_; }
  const T& entry(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const T& rhs(int i) const { return beta_[i]; }
  const std::optional<T>& upper(int j) const { return upper_[j]; }

  // Runs both phases. On kOptimal and kUnbounded the tableau holds the final
  // basis of phase two.
  LpStatus Optimize(std::int64_t& iterations) {
    for (int j = 0; j < n_; ++j) {
      if (upper_[j] && N::Sign(*upper_[j]) < 0) return LpStatus::kInfeasible;
    }
    if (first_artificial_ < cols_) {
      std::vector<T> cost(cols_, T(0));
      for (int j = first_artificial_; j < cols_; ++j) cost[j] = T(-1);
      SetCosts(cost);
      if (Iterate(iterations) != Step::kOptimal) {
        throw Error(ErrorKind::kSolver, "phase one did not terminate optimally");
      }
      T phase1 = T(0);
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= first_artificial_) phase1 -= beta_[i];
      }
      if (N::Sign(phase1) < 0) return LpStatus::kInfeasible;
      for (int j = first_artificial_; j < cols_; ++j) upper_[j] = T(0);
    }
    std::vector<T> cost(cols_, T(0));
    for (int j = 0; j < n_; ++j) cost[j] = N::From(lp_.variable(j).objective);
    SetCosts(cost);
    return Iterate(iterations) == Step::kOptimal ? LpStatus::kOptimal
                                                 : LpStatus::kUnbounded;
  }

  // Moves the tableau to the given basis and bound flags with phase-two
  // costs, repairs bound violations with dual simplex pivots and finishes
  // with primal pivots. Returns false when the basis is singular or the
  // repair stalls; the tableau is then unusable.
  bool WarmStart(const std::vector<int>& basis, const std::vector<char>& at_upper,
                 std::int64_t& iterations) {
    for (int j = first_artificial_; j < cols_; ++j) upper_[j] = T(0);
    std::vector<char> wanted(cols_, 0);
    for (int col : basis) wanted[col] = 1;
    for (int col : basis) {
      if (row_of_[col] >= 0) continue;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (!wanted[basis_[i]] && N::Sign(At(i, col)) != 0) {
          r = i;
          break;
        }
      }
      if (r < 0) return false;
      Enter(r, col);
      Pivot(r, col);
    }
    for (int j = 0; j < cols_; ++j) {
      at_upper_[j] = row_of_[j] < 0 && !Fixed(j) && at_upper[j] && upper_[j];
    }
    RecomputeBeta();
    std::vector<T> cost(cols_, T(0));
    for (int j = 0; j < n_; ++j) cost[j] = N::From(lp_.variable(j).objective);
    SetCosts(cost);
    const std::int64_t limit = iterations + 20 * static_cast<std::int64_t>(m_) + 100;
    while (true) {
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (N::Sign(Violation(i)) != 0) {
          r = i;
          break;
        }
      }
      if (r < 0) break;
      if (++iterations > limit) return false;
      const bool rise = N::Sign(Violation(r)) < 0;
      // Dual ratio test; ties go to the smallest column index.
      int q = -1;
      T best = T(0);
      for (int j = 0; j < cols_; ++j) {
        if (row_of_[j] >= 0 || Fixed(j)) continue;
        const T& alpha = At(r, j);
        if (N::Sign(alpha) == 0) continue;
        // x_basic = beta - alpha * delta_j; delta_j > 0 at lower, < 0 at upper.
        const bool raises = at_upper_[j] ? alpha > 0 : alpha < 0;
        if (raises != rise) continue;
        const T ratio = N::Abs(d_[j]) / N::Abs(alpha);
        if (q < 0 || ratio < best) {
          q = j;
          best = ratio;
        }
      }
      if (q < 0) return false;
      const int p = basis_[r];
      Enter(r, q);
      at_upper_[p] = rise ? 0 : 1;
      Pivot(r, q);
      RecomputeBeta();
    }
    return Iterate(iterations) == Step::kOptimal;
  }

  // Exact outcome of Optimize; Rational only.
  LpOutcome Outcome(LpStatus status, std::int64_t iterations) const {
    LpOutcome out;
    out.status = status;
    out.iterations = iterations;
    if (status == LpStatus::kInfeasible) {
      out.farkas_rows.assign(m_, Rational(0));
      out.farkas_bounds.assign(n_, Rational(0));
      for (int j = 0; j < n_; ++j) {
        if (upper_[j] && *upper_[j] < 0) {
          // Contradictory bounds: nu_j = 1 alone is a certificate.
          out.farkas_bounds[j] = 1;
          return out;
        }
      }
      for (int i = 0; i < m_; ++i) {
        Rational y = cost_[init_col_[i]] - d_[init_col_[i]];
        out.farkas_rows[i] = sigma_[i] > 0 ? y : Rational(-y);
      }
      for (int j = 0; j < n_; ++j) {
        if (d_[j] > 0) out.farkas_bounds[j] = d_[j];
      }
      return out;
    }
    out.point = Point();
    if (status == LpStatus::kUnbounded) {
      out.ray.assign(n_, Rational(0));
      if (unbounded_col_ < n_) out.ray[unbounded_col_] = 1;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < n_) out.ray[basis_[i]] = -entry(i, unbounded_col_);
      }
      return out;
    }
    out.value = lp_.Objective(out.point);
    out.duals.resize(m_);
    for (int i = 0; i < m_; ++i) {
      Rational y = -d_[init_col_[i]];
      out.duals[i] = sigma_[i] > 0 ? y : Rational(-y);
    }
    out.reduced_costs.assign(d_.begin(), d_.begin() + n_);
    return out;
  }

 private:
  T& At(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }

  void SetCosts(std::vector<T> cost) {
    cost_ = std::move(cost);
    d_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const T& cb = cost_[basis_[i]];
      if (N::Zero(cb)) continue;
      for (int j = 0; j < cols_; ++j) {
        if (!N::Zero(At(i, j))) N::MulSub(d_[j], cb, At(i, j), tmp_);
      }
    }
  }

  bool Fixed(int j) const { return upper_[j] && N::Zero(*upper_[j]); }

  void Enter(int r, int q) {
    row_of_[basis_[r]] = -1;
    at_upper_[q] = 0;
    basis_[r] = q;
    row_of_[q] = r;
  }

  // Signed bound violation of the basic variable in row i: negative below
  // zero, positive above its upper bound.
  T Violation(int i) const {
    const int col = basis_[i];
    if (N::Sign(beta_[i]) < 0) return beta_[i];
    if (upper_[col] && N::Sign(beta_[i] - *upper_[col]) > 0) {
      return beta_[i] - *upper_[col];
    }
    return T(0);
  }

  // beta = B^-1 (b - sum of raised columns u_j A_j), reading B^-1 from the
  // columns that formed the initial identity.
  void RecomputeBeta() {
    for (int r = 0; r < m_; ++r) {
      T v = T(0);
      for (int i = 0; i < m_; ++i) v += At(r, init_col_[i]) * original_beta_[i];
      for (int j = 0; j < cols_; ++j) {
        if (row_of_[j] < 0 && at_upper_[j] && !N::Zero(At(r, j))) {
          v -= At(r, j) * *upper_[j];
        }
      }
      beta_[r] = v;
    }
  }

  int ChooseEntering() const {
    int best = -1;
    for (int j = 0; j < cols_; ++j) {
      if (row_of_[j] >= 0 || Fixed(j)) continue;
      const int s = N::Sign(d_[j]);
      if (!(at_upper_[j] ? s < 0 : s > 0)) continue;
      if (bland_) return j;
      if (best < 0 || N::Abs(d_[j]) > N::Abs(d_[best])) best = j;
    }
    return best;
  }

  Step Iterate(std::int64_t& iterations) {
    T theta = T(0);
    T limit = T(0);
    while (true) {
      const int q = ChooseEntering();
      if (q < 0) return Step::kOptimal;
      if (++iterations > options_.max_iterations) {
        throw Error(ErrorKind::kSolver, "simplex iteration limit reached");
      }
      const int dir = at_upper_[q] ? -1 : 1;
      // Ratio test; a bound flip wins ties, then the smallest column index.
      bool bounded = false;
      bool flip = false;
      int leave_row = -1;
      bool leave_upper = false;
      if (upper_[q]) {
        theta = *upper_[q];
        bounded = flip = true;
      }
      for (int i = 0; i < m_; ++i) {
        const T& t = At(i, q);
        const int st = N::Sign(t);
        if (st == 0) continue;
        // Basic variable moves by -dir * t per unit of theta.
        const bool decreasing = dir * st > 0;
        const int col = basis_[i];
        if (decreasing) {
          limit = beta_[i] / N::Abs(t);
        } else if (upper_[col]) {
          limit = (*upper_[col] - beta_[i]) / N::Abs(t);
        } else {
          continue;
        }
        if (N::Sign(limit) < 0) limit = T(0);
        bool better = !bounded || limit < theta;
        if (!better && limit == theta && !flip && col < basis_[leave_row]) {
          better = true;
        }
        if (better) {
          theta = limit;
          bounded = true;
          flip = false;
          leave_row = i;
          leave_upper = !decreasing;
        }
      }
      if (!bounded) {
        unbounded_col_ = q;
        return Step::kUnbounded;
      }
      if (N::Zero(theta)) {
        if (++degenerate_run_ >= options_.degenerate_switch) bland_ = true;
      } else {
        degenerate_run_ = 0;
        for (int i = 0; i < m_; ++i) {
          if (!N::Zero(At(i, q))) {
            if (dir > 0) {
              beta_[i] -= theta * At(i, q);
            } else {
              beta_[i] += theta * At(i, q);
            }
          }
        }
      }
      if (flip) {
        at_upper_[q] = !at_upper_[q];
        continue;
      }
      T entering_value = at_upper_[q] ? *upper_[q] : T(0);
      if (dir > 0) {
        entering_value += theta;
      } else {
        entering_value -= theta;
      }
      const int p = basis_[leave_row];
      row_of_[p] = -1;
      at_upper_[p] = leave_upper;
      at_upper_[q] = 0;
      basis_[leave_row] = q;
      row_of_[q] = leave_row;
      beta_[leave_row] = std::move(entering_value);
      Pivot(leave_row, q);
    }
  }

  void Pivot(int r, int q) {
    const T inv = T(1) / At(r, q);
    nonzero_.clear();
    for (int j = 0; j < cols_; ++j) {
      T& x = At(r, j);
      if (!N::Zero(x)) {
        x *= inv;
        nonzero_.push_back(j);
      } else {
        x = T(0);
      }
    }
    T factor;
    auto eliminate = [&](T* row) {
      if (N::Zero(row[q])) {
        row[q] = T(0);
        return;
      }
      factor = row[q];
      for (int j : nonzero_) N::MulSub(row[j], factor, At(r, j), tmp_);
      row[q] = T(0);
    };
    for (int i = 0; i < m_; ++i) {
      if (i != r) eliminate(&At(i, 0));
    }
    if (!d_.empty()) eliminate(d_.data());
  }

  std::vector<Rational> Point() const {
    std::vector<Rational> x(n_);
    for (int j = 0; j < n_; ++j) {
      if (row_of_[j] >= 0) {
        x[j] = beta_[row_of_[j]];
      } else if (at_upper_[j]) {
        x[j] = *upper_[j];
      } else {
        x[j] = 0;
      }
      x[j] += lp_.variable(j).lower;
    }
    return x;
  }

  const LinearProgram& lp_;
  const SolveOptions& options_;
  int n_ = 0;
  int m_ = 0;
  int cols_ = 0;
  int first_artificial_ = 0;
  std::vector<int> sigma_;
  std::vector<int> init_col_;
  std::vector<T> a_;
  std::vector<std::optional<T>> upper_;
  std::vector<T> cost_;
  std::vector<T> d_;
  std::vector<T> beta_;
  std::vector<T> original_beta_;
  std::vector<int> basis_;
  std::vector<int> row_of_;
  std::vector<char> at_upper_;
  std::vector<int> nonzero_;
  T tmp_;
  bool bland_ = false;
  int degenerate_run_ = 0;
  int unbounded_col_ = -1;
};

// Solves M z = rhs exactly (M square, given by rows). Returns nullopt if M
// is singular.
std::optional<std::vector<Rational>> SolveSquare(std::vector<std::vector<Rational>> m,
                                                 std::vector<Rational> rhs) {
  const int size = static_cast<int>(rhs.size());
  Rational tmp;
  for (int c = 0; c < size; ++c) {
    int pivot = -1;
    for (int r = c; r < size; ++r) {
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    std::swap(m[pivot], m[c]);
    std::swap(rhs[pivot], rhs[c]);
    const Rational inv = 1 / m[c][c];
    std::vector<int> nonzero;
    for (int j = c; j < size; ++j) {
      if (m[c][j] != 0) {
        m[c][j] *= inv;
        nonzero.push_back(j);
      }
    }
    rhs[c] *= inv;
    for (int r = 0; r < size; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (int j : nonzero) Num<Rational>::MulSub(m[r][j], f, m[c][j], tmp);
      Num<Rational>::MulSub(rhs[r], f, rhs[c], tmp);
    }
  }
  return rhs;
}

// Rebuilds the final basis of a floating-point run exactly. Returns an
// optimal outcome when that basis is primal and dual feasible in exact
// arithmetic.
std::optional<LpOutcome> ExactFromBasis(const LinearProgram& lp,
                                        const SolveOptions& options,
                                        const std::vector<int>& basis,
                                        const std::vector<char>& at_upper) {
  const Tableau<Rational> t(lp, options);
  const int m = t.rows();
  const int cols = t.cols();
  const int n = t.num_structural();
  std::vector<char> is_basic(cols, 0);
  for (int col : basis) is_basic[col] = 1;
  // Artificials are fixed at zero once phase one ends.
  auto raised = [&](int j) {
    return !is_basic[j] && at_upper[j] && j < t.first_artificial();
  };
  // B x_B = beta0 - sum over nonbasic columns at upper of u_j A_j.
  std::vector<Rational> rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = t.rhs(i);
  for (int j = 0; j < cols; ++j) {
    if (!raised(j)) continue;
    if (!t.upper(j)) return std::nullopt;
    for (int i = 0; i < m; ++i) {
      if (t.entry(i, j) != 0) rhs[i] -= t.entry(i, j) * *t.upper(j);
    }
  }
  std::vector<std::vector<Rational>> b(m, std::vector<Rational>(m));
  std::vector<std::vector<Rational>> bt(m, std::vector<Rational>(m));
  std::vector<Rational> cost_b(m);
  for (int k = 0; k < m; ++k) {
    const int col = basis[k];
    for (int i = 0; i < m; ++i) {
      b[i][k] = t.entry(i, col);
      bt[k][i] = t.entry(i, col);
    }
    cost_b[k] = col < n ? lp.variable(col).objective : Rational(0);
  }
  const auto x_b = SolveSquare(std::move(b), std::move(rhs));
  if (!x_b) return std::nullopt;
  std::vector<Rational> value(cols, Rational(0));
  for (int j = 0; j < cols; ++j) {
    if (raised(j)) value[j] = *t.upper(j);
  }
  for (int k = 0; k < m; ++k) {
    const int col = basis[k];
    const Rational& x = (*x_b)[k];
    if (x < 0) return std::nullopt;
    if (col >= t.first_artificial() && x != 0) return std::nullopt;
    if (col < n && t.upper(col) && x > *t.upper(col)) return std::nullopt;
    value[col] = x;
  }
  const auto pi = SolveSquare(std::move(bt), std::move(cost_b));
  if (!pi) return std::nullopt;
  LpOutcome out;
  out.status = LpStatus::kOptimal;
  out.reduced_costs.resize(n);
  for (int j = 0; j < t.first_artificial(); ++j) {
    Rational d = j < n ? lp.variable(j).objective : Rational(0);
    for (int i = 0; i < m; ++i) {
      if (t.entry(i, j) != 0) d -= (*pi)[i] * t.entry(i, j);
    }
    if (!is_basic[j] && !(t.upper(j) && *t.upper(j) == 0)) {
      if (at_upper[j] ? d < 0 : d > 0) return std::nullopt;
    }
    if (j < n) out.reduced_costs[j] = d;
  }
  out.point.resize(n);
  for (int j = 0; j < n; ++j) out.point[j] = value[j] + lp.variable(j).lower;
  out.value = lp.Objective(out.point);
  out.duals.resize(m);
  for (int i = 0; i < m; ++i) {
    out.duals[i] = t.sigma(i) > 0 ? (*pi)[i] : Rational(-(*pi)[i]);
  }
  return out;
}

bool UseGuide(const LinearProgram& lp, const SolveOptions& options) {
  switch (options.guide) {
    case SolveOptions::Guide::kNever:
      return false;
    case SolveOptions::Guide::kAlways:
      return true;
    case SolveOptions::Guide::kAuto:
      break;
  }
  const std::int64_t cells = static_cast<std::int64_t>(lp.num_constraints()) *
                             (lp.num_variables() + lp.num_constraints());
  return cells >= options.guide_threshold;
}

}  // namespace

LpOutcome Solve(const LinearProgram& lp, const SolveOptions& options) {
  std::optional<LpOutcome> guided;
  std::int64_t iterations = 0;
  if (UseGuide(lp, options)) {
    Tableau<double> approx(lp, options);
    approx.Perturb();
    try {
      if (approx.Optimize(iterations) == LpStatus::kOptimal) {
        guided = ExactFromBasis(lp, options, approx.basis(), approx.at_upper());
        if (!guided) {
          Tableau<Rational> exact(lp, options);
          if (exact.WarmStart(approx.basis(), approx.at_upper(), iterations)) {
            guided = exact.Outcome(LpStatus::kOptimal, iterations);
          }
        }
      }
    } catch (const Error&) {
      guided.reset();
    }
  }
  LpOutcome out;
  if (guided) {
    out = std::move(*guided);
    out.iterations = iterations;
  } else {
    Tableau<Rational> tableau(lp, options);
    std::int64_t exact_iterations = 0;
    const LpStatus status = tableau.Optimize(exact_iterations);
    out = tableau.Outcome(status, iterations + exact_iterations);
  }
  std::string why;
  bool ok = true;
  switch (out.status) {
    case LpStatus::kOptimal:
      ok = VerifyOptimal(lp, out, &why);
      break;
    case LpStatus::kInfeasible:
      ok = VerifyFarkas(lp, out.farkas_rows, out.farkas_bounds, &why);
      break;
    case LpStatus::kUnbounded:
      ok = VerifyRay(lp, out, &why);
      break;
  }
  if (!ok) {
    throw Error(ErrorKind::kSolver, "simplex result failed verification: " + why);
  }
  return out;
}

bool VerifyOptimal(const LinearProgram& lp, const LpOutcome& outcome,
                   std::string* why) {
  if (!lp.IsFeasible(outcome.point)) return Fail(why, "point is infeasible");
  if (lp.Objective(outcome.point) != outcome.value) {
    return Fail(why, "objective value does not match the point");
  }
  if (static_cast<int>(outcome.duals.size()) != lp.num_constraints()) {
    return Fail(why, "wrong number of duals");
  }
  Rational dual_value = 0;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    if (!DualSignOk(lp.constraint(i).relation, outcome.duals[i])) {
      return Fail(why, "dual " + std::to_string(i) + " has the wrong sign");
    }
    dual_value += outcome.duals[i] * lp.constraint(i).rhs;
  }
  const std::vector<Rational> g = TransposeTimes(lp, outcome.duals);
  for (int j = 0; j < lp.num_variables(); ++j) {
    const Rational r = lp.variable(j).objective - g[j];
    if (!outcome.reduced_costs.empty() && outcome.reduced_costs[j] != r) {
      return Fail(why, "reduced cost mismatch at variable " + std::to_string(j));
    }
    if (r > 0) {
      if (!lp.variable(j).upper) {
        return Fail(why, "positive reduced cost on an unbounded variable");
      }
      dual_value += r * *lp.variable(j).upper;
    } else {
      dual_value += r * lp.variable(j).lower;
    }
  }
  if (dual_value != outcome.value) return Fail(why, "duality gap is nonzero");
  return true;
}

bool VerifyFarkas(const LinearProgram& lp, const std::vector<Rational>& rows,
                  const std::vector<Rational>& bounds, std::string* why) {
  if (static_cast<int>(rows.size()) != lp.num_constraints() ||
      static_cast<int>(bounds.size()) != lp.num_variables()) {
    return Fail(why, "certificate has the wrong shape");
  }
  Rational total = 0;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    if (!DualSignOk(lp.constraint(i).relation, rows[i])) {
      return Fail(why, "row multiplier " + std::to_string(i) + " has the wrong sign");
    }
    if (rows[i] == 0) continue;
    Rational shifted = lp.constraint(i).rhs;
    for (const LinearTerm& t : lp.constraint(i).terms) {
      shifted -= t.coef * lp.variable(t.var).lower;
    }
    total += rows[i] * shifted;
  }
  const std::vector<Rational> g = TransposeTimes(lp, rows);
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (bounds[j] < 0) return Fail(why, "negative bound multiplier");
    if (bounds[j] > 0) {
      if (!lp.variable(j).upper) {
        return Fail(why, "bound multiplier on a variable without upper bound");
      }
      total += bounds[j] * (*lp.variable(j).upper - lp.variable(j).lower);
    }
    if (g[j] + bounds[j] < 0) {
      return Fail(why, "combination is negative at variable " + std::to_string(j));
    }
  }
  if (total >= 0) return Fail(why, "combined right-hand side is not negative");
  return true;
}

bool VerifyRay(const LinearProgram& lp, const LpOutcome& outcome,
               std::string* why) {
  if (!lp.IsFeasible(outcome.point)) return Fail(why, "point is infeasible");
  const std::vector<Rational>& ray = outcome.ray;
  if (static_cast<int>(ray.size()) != lp.num_variables()) {
    return Fail(why, "ray has the wrong size");
  }
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (ray[j] < 0) return Fail(why, "ray decreases a bounded-below variable");
    if (ray[j] != 0 && lp.variable(j).upper) {
      return Fail(why, "ray moves a bounded-above variable");
    }
  }
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const Rational a = lp.RowActivity(i, ray);
    const Relation rel = lp.constraint(i).relation;
    if ((rel == Relation::kLessEqual && a > 0) ||
        (rel == Relation::kGreaterEqual && a < 0) ||
        (rel == Relation::kEqual && a != 0)) {
      return Fail(why, "ray leaves row " + std::to_string(i));
    }
  }
  if (lp.Objective(ray) <= 0) return Fail(why, "ray does not improve the objective");
  return true;
}

std::string DumpLp(const LinearProgram& lp) {
  std::ostringstream out;
  auto terms = [&](const std::vector<LinearTerm>& ts) {
    if (ts.empty()) {
      out << "0";
      return;
    }
    for (size_t k = 0; k < ts.size(); ++k) {
      Rational c = ts[k].coef;
      if (k > 0) {
        out << (c < 0 ? " - " : " + ");
        c = abs(c);
      } else if (c < 0) {
        out << "-";
        c = abs(c);
      }
      if (c != 1) out << ToString(c) << " ";
      out << lp.variable(ts[k].var).name;
    }
  };
  out << "maximize\n  obj: ";
  std::vector<LinearTerm> obj;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (lp.variable(j).objective != 0) obj.push_back({j, lp.variable(j).objective});
  }
  terms(obj);
  out << "\nsubject to\n";
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const auto& row = lp.constraint(i);
    out << "  " << row.name << ": ";
    terms(row.terms);
    out << (row.relation == Relation::kLessEqual
                ? " <= "
                : row.relation == Relation::kGreaterEqual ? " >= " : " = ")
        << ToString(row.rhs) << "\n";
  }
  out << "bounds\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variable(j);
    out << "  " << ToString(v.lower) << " <= " << v.name;
    if (v.upper) out << " <= " << ToString(*v.upper);
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

}  // namespace flowcore
