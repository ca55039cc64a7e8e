#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tmac/errors.hpp"

namespace tmac {

// Dense linear program
//
//   max (or min)  c^T x
//   s.t.          A x <= b
//                 lower <= x <= upper
//
// Lower bounds must be finite; upper bounds may be +infinity.
template <typename Scalar>
struct LpProblem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector objective;
  Matrix constraints;
  Vector rhs;
  Vector lower;
  Vector upper;
  bool maximize = true;

  // Problem with n variables, no rows, bounds [0, +inf).
  static LpProblem with_variables(Eigen::Index n) {
    LpProblem p;
    p.objective = Vector::Zero(n);
    p.constraints = Matrix::Zero(0, n);
    p.rhs = Vector::Zero(0);
    p.lower = Vector::Zero(n);
    p.upper = Vector::Constant(n, std::numeric_limits<Scalar>::infinity());
    return p;
  }

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_rows() const { return rhs.size(); }

  // Appends the row coeffs^T x <= bound.
  void add_row(const Vector& coeffs, Scalar bound) {
    if (coeffs.size() != num_variables()) {
      throw DimensionError("add_row: coefficient count does not match variables");
    }
    constraints.conservativeResize(constraints.rows() + 1, Eigen::NoChange);
    constraints.row(constraints.rows() - 1) = coeffs.transpose();
    rhs.conservativeResize(rhs.size() + 1);
    rhs(rhs.size() - 1) = bound;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

template <typename Scalar>
struct LpSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::kInfeasible;
  Vector x;
  Scalar objective = 0;
  // Dual multipliers in the maximization sense, for the rows of A and for
  // the finite upper bounds (zero where the bound is infinite). Only set
  // when status is optimal.
  Vector row_duals;
  Vector upper_duals;
  int iterations = 0;
};

struct SimplexTolerances {
  // Absolute, on rows scaled to unit infinity norm.
  double feasibility = 1e-9;
  double pivot = 1e-10;
  double reduced_cost = 1e-9;
  // 0 selects a budget proportional to the tableau size.
  int max_iterations = 0;
};

namespace detail {

// Tableau in canonical form with respect to `basis`. The last column holds
// the basic solution values.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tableau(Matrix body, std::vector<Eigen::Index> basis, const SimplexTolerances& tol,
          int max_iterations)
      : t_(std::move(body)), basis_(std::move(basis)), tol_(tol),
        max_iterations_(max_iterations) {}

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols() - 1; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  Scalar value(Eigen::Index row) const { return t_(row, cols()); }
  Scalar entry(Eigen::Index row, Eigen::Index col) const { return t_(row, col); }
  int iterations() const { return iterations_; }

  Vector reduced_costs(const Vector& cost) const {
    Vector cb(rows());
    for (Eigen::Index r = 0; r < rows(); ++r) cb(r) = cost(basis_[r]);
    return cost - (cb.transpose() * t_.leftCols(cols())).transpose();
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index r = 0; r < rows(); ++r) {
      if (r == row) continue;
      const Scalar f = t_(r, col);
      if (f != Scalar(0)) t_.row(r) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // Maximizes cost^T z over columns with allowed[col] true. Bland's rule:
  // lowest-index improving column enters; among minimum-ratio rows the one
  // whose basic variable has the lowest index leaves. Returns false when
  // unbounded.
  bool maximize(const Vector& cost, const std::vector<bool>& allowed) {
    for (;;) {
      const Vector d = reduced_costs(cost);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (allowed[j] && d(j) > Scalar(tol_.reduced_cost)) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      Scalar best_ratio = 0;
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const Scalar a = t_(r, enter);
        if (a <= Scalar(tol_.pivot)) continue;
        const Scalar ratio = std::max(value(r), Scalar(0)) / a;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;

      if (++iterations_ > max_iterations_) {
        throw IterationLimitError("simplex: pivot budget of " +
                                  std::to_string(max_iterations_) + " exhausted");
      }
      pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
  SimplexTolerances tol_;
  int max_iterations_;
  int iterations_ = 0;
};

template <typename Scalar>
void validate(const LpProblem<Scalar>& p) {
  const Eigen::Index n = p.num_variables();
  if (p.constraints.cols() != n || p.lower.size() != n || p.upper.size() != n) {
    throw DimensionError("LpProblem: objective, constraint columns and bounds disagree");
  }
  if (p.constraints.rows() != p.rhs.size()) {
    throw DimensionError("LpProblem: constraint rows and rhs length disagree");
  }
  if (!p.objective.allFinite() || !p.constraints.allFinite() || !p.rhs.allFinite() ||
      !p.lower.allFinite()) {
    throw DomainError("LpProblem: non-finite coefficient");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(p.upper(j)) || p.upper(j) == -std::numeric_limits<Scalar>::infinity()) {
      throw DomainError("LpProblem: invalid upper bound");
    }
  }
}

}  // namespace detail

// Dense two-phase primal simplex with Bland's anti-cycling rule.
//
// Throws DimensionError on inconsistent shapes and IterationLimitError when
// the pivot budget runs out; infeasibility and unboundedness are reported
// through the status.
template <typename Scalar>
LpSolution<Scalar> solve_lp(const LpProblem<Scalar>& p,
                            const SimplexTolerances& tol = SimplexTolerances{}) {
  using Vector = typename LpProblem<Scalar>::Vector;
  using Matrix = typename LpProblem<Scalar>::Matrix;
  using Index = Eigen::Index;
  constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

  detail::validate(p);
  const Index n = p.num_variables();

  // Shift x = lower + y and collect rows: the general rows first, then one
  // row per finite upper bound.
  std::vector<Index> bounded;
  for (Index j = 0; j < n; ++j) {
    if (p.upper(j) < kInf) bounded.push_back(j);
  }
  const Index m_general = p.num_rows();
  const Index m = m_general + static_cast<Index>(bounded.size());

  Matrix a = Matrix::Zero(m, n);
  Vector b(m);
  a.topRows(m_general) = p.constraints;
  b.head(m_general) = p.rhs - p.constraints * p.lower;
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const Index j = bounded[k];
    a(m_general + static_cast<Index>(k), j) = 1;
    b(m_general + static_cast<Index>(k)) = p.upper(j) - p.lower(j);
  }

  // Row scaling to unit infinity norm over [a_r, b_r].
  Vector scale = Vector::Ones(m);
  for (Index r = 0; r < m; ++r) {
    const Scalar s = std::max(a.row(r).cwiseAbs().maxCoeff(), std::abs(b(r)));
    if (s > 0) {
      scale(r) = s;
      a.row(r) /= s;
      b(r) /= s;
    }
  }

  // Columns: [y (n) | slacks (m) | artificials (one per negative row)].
  std::vector<Index> artificial_row;
  for (Index r = 0; r < m; ++r) {
    if (b(r) < 0) artificial_row.push_back(r);
  }
  const Index n_art = static_cast<Index>(artificial_row.size());
  const Index ncols = n + m + n_art;

  Matrix body = Matrix::Zero(m, ncols + 1);
  std::vector<Index> basis(static_cast<std::size_t>(m));
  Vector sign = Vector::Ones(m);
  for (Index r = 0; r < m; ++r) {
    if (b(r) < 0) sign(r) = -1;
    body.row(r).head(n) = sign(r) * a.row(r);
    body(r, n + r) = sign(r);
    body(r, ncols) = sign(r) * b(r);
    basis[static_cast<std::size_t>(r)] = n + r;
  }
  for (Index k = 0; k < n_art; ++k) {
    const Index r = artificial_row[static_cast<std::size_t>(k)];
    body(r, n + m + k) = 1;
    basis[static_cast<std::size_t>(r)] = n + m + k;
  }

  const int budget = tol.max_iterations > 0
                         ? tol.max_iterations
                         : static_cast<int>(50 * (m + ncols) + 1000);
  detail::Tableau<Scalar> tab(std::move(body), std::move(basis), tol, budget);

  LpSolution<Scalar> sol;
  std::vector<bool> allowed(static_cast<std::size_t>(ncols), true);

  if (n_art > 0) {
    Vector phase1 = Vector::Zero(ncols);
    phase1.tail(n_art).setConstant(-1);
    tab.maximize(phase1, allowed);
    Scalar infeasibility = 0;
    for (Index r = 0; r < m; ++r) {
      if (tab.basis()[static_cast<std::size_t>(r)] >= n + m) {
        infeasibility += std::max(tab.value(r), Scalar(0));
      }
    }
    if (infeasibility > Scalar(tol.feasibility)) {
      sol.status = LpStatus::kInfeasible;
      sol.iterations = tab.iterations();
      return sol;
    }
    // Pivot remaining zero-level artificials out where possible; rows where
    // that fails are redundant and stay inert.
    for (Index r = 0; r < m; ++r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < n + m) continue;
      for (Index j = 0; j < n + m; ++j) {
        if (std::abs(tab.entry(r, j)) > Scalar(tol.pivot)) {
          tab.pivot(r, j);
          break;
        }
      }
    }
    for (Index k = 0; k < n_art; ++k) allowed[static_cast<std::size_t>(n + m + k)] = false;
  }

  Vector cost = Vector::Zero(ncols);
  cost.head(n) = p.maximize ? p.objective : Vector(-p.objective);
  if (!tab.maximize(cost, allowed)) {
    sol.status = LpStatus::kUnbounded;
    sol.iterations = tab.iterations();
    return sol;
  }

  Vector y = Vector::Zero(n);
  for (Index r = 0; r < m; ++r) {
    const Index v = tab.basis()[static_cast<std::size_t>(r)];
    if (v < n) y(v) = tab.value(r);
  }
  sol.status = LpStatus::kOptimal;
  sol.x = p.lower + y.cwiseMax(Scalar(0));
  sol.objective = p.objective.dot(sol.x);
  sol.iterations = tab.iterations();

  // The dual of scaled row r is minus the reduced cost of its slack.
  const Vector d = tab.reduced_costs(cost);
  Vector duals(m);
  for (Index r = 0; r < m; ++r) duals(r) = std::max(-d(n + r), Scalar(0)) / scale(r);
  sol.row_duals = duals.head(m_general);
  sol.upper_duals = Vector::Zero(n);
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    sol.upper_duals(bounded[k]) = duals(m_general + static_cast<Index>(k));
  }
  return sol;
}

}  // namespace tmac
