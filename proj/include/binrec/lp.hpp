#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "binrec/core.hpp"

namespace binrec {

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Equality-form LP with per-variable bounds: min c'x s.t. Gx = h, l <= x <= u.
/// Infinite bounds are expressed with +/-kInf.
struct LpProblem {
  Vector objective;  // length nv
  Matrix eq_matrix;  // p x nv
  Vector eq_rhs;     // length p
  Vector lower;      // length nv, entries may be -inf
  Vector upper;      // length nv, entries may be +inf

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(eq_rhs.size()); }

  void validate() const {
    const int nv = num_vars();
    const int p = num_rows();
    if (eq_matrix.rows() != p || eq_matrix.cols() != nv)
      throw InputError("LpProblem: inconsistent dimensions");
    if (static_cast<int>(lower.size()) != nv || static_cast<int>(upper.size()) != nv)
      throw InputError("LpProblem: bound vectors must have length nv");
    if (!all_finite(objective) || !all_finite(eq_rhs) || !eq_matrix.all_finite())
      throw InputError("LpProblem: non-finite data");
    for (int j = 0; j < nv; ++j) {
      if (std::isnan(lower[j]) || std::isnan(upper[j]))
        throw InputError("LpProblem: NaN bound");
      if (lower[j] == kInf || upper[j] == -kInf)
        throw InputError("LpProblem: bound with wrong-signed infinity");
      if (lower[j] > upper[j]) throw InputError("LpProblem: lower bound exceeds upper bound");
    }
  }
};

struct LpOutcome {
  LpStatus status = LpStatus::Optimal;
  Vector solution;                    // present iff Optimal
  double objective_value = 0.0;       // present iff Optimal
  Vector infeasibility_certificate;   // Farkas dual ray, present iff Infeasible
};

struct SolverSettings {
  double feas_tol = 1e-9;
  double pivot_tol = 1e-10;
  int max_iterations = 0;  // 0 means 50 * (nv + p)
};

/// Solves a square system Ax = b by LU factorization with partial pivoting.
inline Vector lu_solve(const Matrix& a, const Vector& b,
                       const SolverSettings& settings = {}) {
  if (a.rows() != a.cols()) throw InputError("lu_solve: matrix must be square");
  const int n = a.rows();
  if (static_cast<int>(b.size()) != n) throw InputError("lu_solve: rhs length mismatch");
  if (!a.all_finite() || !all_finite(b)) throw InputError("lu_solve: non-finite input");

  Matrix lu = a;
  Vector x = b;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(lu(col, col));
    for (int i = col + 1; i < n; ++i) {
      const double v = std::abs(lu(i, col));
      if (v > best) { best = v; piv = i; }
    }
    if (best < settings.pivot_tol)
      throw SingularMatrixError("lu_solve: pivot below tolerance");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
      std::swap(x[col], x[piv]);
    }
    for (int i = col + 1; i < n; ++i) {
      const double f = lu(i, col) / lu(col, col);
      lu(i, col) = f;
      for (int j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
      x[i] -= f * x[col];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

namespace detail {

enum class NonbasicState { AtLower, AtUpper, Free };

// Dense full-tableau bounded-variable primal simplex, two phases.
// Column order: [structural 0..nv) | artificial nv..nv+p). Rows may be sign
// flipped so artificial start values are nonnegative; row_sign records it.
class SimplexTableau {
 public:
  SimplexTableau(const LpProblem& prob, const SolverSettings& settings)
      : prob_(prob), st_(settings), nv_(prob.num_vars()), p_(prob.num_rows()),
        total_(nv_ + p_) {
    max_iter_ = st_.max_iterations > 0 ? st_.max_iterations : 50 * (nv_ + p_);
    lower_.assign(total_, 0.0);
    upper_.assign(total_, kInf);
    for (int j = 0; j < nv_; ++j) {
      lower_[j] = prob.lower[j];
      upper_[j] = prob.upper[j];
    }
    tableau_.assign(static_cast<std::size_t>(p_) * total_, 0.0);
    row_sign_.assign(p_, 1.0);
    xval_.assign(total_, 0.0);
    state_.assign(total_, NonbasicState::AtLower);
    basis_.assign(p_, -1);
    in_basis_.assign(total_, false);
    basis_row_.assign(total_, -1);
  }

  LpOutcome run() {
    initialize();
    // Phase 1: minimize the total artificial value.
    Vector phase1_cost(total_, 0.0);
    for (int i = 0; i < p_; ++i)
      if (basis_[i] >= nv_) phase1_cost[basis_[i]] = 1.0;
    for (int j = nv_; j < total_; ++j) phase1_cost[j] = 1.0;
    set_costs(phase1_cost);
    iterate(/*phase1=*/true);
    refine();
    if (current_objective() > st_.feas_tol * (1.0 + inf_norm(prob_.eq_rhs)))
      return infeasible_outcome();

    drive_out_artificials();
    for (int j = nv_; j < total_; ++j) upper_[j] = 0.0;  // artificials pinned at 0

    // Phase 2.
    Vector phase2_cost(total_, 0.0);
    for (int j = 0; j < nv_; ++j) phase2_cost[j] = prob_.objective[j];
    set_costs(phase2_cost);
    const bool bounded = iterate(/*phase1=*/false);
    if (!bounded) {
      LpOutcome out;
      out.status = LpStatus::Unbounded;
      return out;
    }

    refine();
    LpOutcome out;
    out.status = LpStatus::Optimal;
    out.solution.assign(xval_.begin(), xval_.begin() + nv_);
    out.objective_value = dot(prob_.objective, out.solution);
    return out;
  }

 private:
  double& tab(int i, int j) { return tableau_[static_cast<std::size_t>(i) * total_ + j]; }

  void initialize() {
    // Nonbasic structurals start at a finite bound, free variables at 0.
    for (int j = 0; j < nv_; ++j) {
      if (lower_[j] > -kInf) {
        xval_[j] = lower_[j];
        state_[j] = NonbasicState::AtLower;
      } else if (upper_[j] < kInf) {
        xval_[j] = upper_[j];
        state_[j] = NonbasicState::AtUpper;
      } else {
        xval_[j] = 0.0;
        state_[j] = NonbasicState::Free;
      }
    }
    Vector residual(p_);
    for (int i = 0; i < p_; ++i) {
      double r = prob_.eq_rhs[i];
      for (int j = 0; j < nv_; ++j) r -= prob_.eq_matrix(i, j) * xval_[j];
      residual[i] = r;
    }

    // Crash: a column appearing in exactly one row with a usable pivot and an
    // in-bounds implied value becomes basic there, avoiding an artificial.
    std::vector<int> nonzero_row(nv_, -2);  // -2 unset, -1 multiple
    for (int i = 0; i < p_; ++i)
      for (int j = 0; j < nv_; ++j)
        if (prob_.eq_matrix(i, j) != 0.0)
          nonzero_row[j] = (nonzero_row[j] == -2) ? i : -1;
    for (int j = 0; j < nv_; ++j) {
      const int i = nonzero_row[j];
      if (i < 0 || basis_[i] >= 0) continue;
      const double a = prob_.eq_matrix(i, j);
      if (std::abs(a) < st_.pivot_tol) continue;
      const double v = xval_[j] + residual[i] / a;
      if (v < lower_[j] - st_.feas_tol || v > upper_[j] + st_.feas_tol) continue;
      basis_[i] = j;
      xval_[j] = std::clamp(v, lower_[j], upper_[j]);
      residual[i] = 0.0;
      in_basis_[j] = true;
      basis_row_[j] = i;
    }

    // Remaining rows get artificials; flip rows so artificial values are >= 0.
    for (int i = 0; i < p_; ++i) {
      if (basis_[i] >= 0) continue;
      const int a = nv_ + i;
      row_sign_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
      basis_[i] = a;
      xval_[a] = std::abs(residual[i]);
      in_basis_[a] = true;
      basis_row_[a] = i;
    }

    // Build B^{-1} [G | I] by Gaussian elimination on the crash basis. The
    // crash columns are row singletons so a single scaling pass suffices.
    for (int i = 0; i < p_; ++i) {
      const double s = row_sign_[i];
      for (int j = 0; j < nv_; ++j) tab(i, j) = s * prob_.eq_matrix(i, j);
      tab(i, nv_ + i) = 1.0;  // artificial block is the identity in the scaled system
      const int bj = basis_[i];
      if (bj < nv_) {
        const double piv = tab(i, bj);
        for (int j = 0; j < total_; ++j) tab(i, j) /= piv;
      }
    }
    // Eliminate crash-basic columns from the other rows.
    for (int i = 0; i < p_; ++i) {
      const int bj = basis_[i];
      if (bj >= nv_) continue;
      for (int r = 0; r < p_; ++r) {
        if (r == i) continue;
        const double f = tab(r, bj);
        if (f == 0.0) continue;
        for (int j = 0; j < total_; ++j) tab(r, j) -= f * tab(i, j);
        tab(r, bj) = 0.0;
      }
    }
  }

  void set_costs(const Vector& costs) {
    costs_ = costs;
    dcost_.assign(total_, 0.0);
    for (int j = 0; j < total_; ++j) {
      double d = costs_[j];
      for (int i = 0; i < p_; ++i) d -= costs_[basis_[i]] * tab(i, j);
      dcost_[j] = in_basis_[j] ? 0.0 : d;
    }
  }

  double current_objective() const {
    double s = 0.0;
    for (int j = 0; j < total_; ++j) s += costs_[j] * xval_[j];
    return s;
  }

  // Returns false when unbounded.
  bool iterate(bool phase1) {
    const double dual_tol = st_.feas_tol;
    bool bland = false;
    int stalled = 0;
    const int bland_after = 10 * (nv_ + p_);
    double best_obj = current_objective();

    while (true) {
      if (++iterations_ > max_iter_)
        throw IterationLimitError("simplex iteration limit exceeded");

      // Pricing: Dantzig by default, Bland after prolonged stalling.
      int enter = -1;
      double enter_dir = 0.0;
      double best_viol = dual_tol;
      for (int j = 0; j < total_; ++j) {
        if (in_basis_[j]) continue;
        if (lower_[j] == upper_[j]) continue;  // fixed, never enters
        const double d = dcost_[j];
        double viol = 0.0, dir = 0.0;
        if (state_[j] == NonbasicState::AtLower && d < -dual_tol) {
          viol = -d; dir = 1.0;
        } else if (state_[j] == NonbasicState::AtUpper && d > dual_tol) {
          viol = d; dir = -1.0;
        } else if (state_[j] == NonbasicState::Free && std::abs(d) > dual_tol) {
          viol = std::abs(d); dir = d < 0 ? 1.0 : -1.0;
        } else {
          continue;
        }
        if (bland) { enter = j; enter_dir = dir; break; }
        if (viol > best_viol) { best_viol = viol; enter = j; enter_dir = dir; }
      }
      if (enter < 0) return true;  // optimal for this phase

      // Ratio test: smallest step, ties to the lowest basic variable index.
      double step = kInf;
      if (lower_[enter] > -kInf && upper_[enter] < kInf)
        step = upper_[enter] - lower_[enter];  // bound flip limit
      int leave_row = -1;
      double leave_bound = 0.0;
      for (int i = 0; i < p_; ++i) {
        const double w = enter_dir * tab(i, enter);
        const int b = basis_[i];
        double ratio, bound;
        if (w > st_.pivot_tol) {  // basic value decreases
          if (lower_[b] == -kInf) continue;
          ratio = (xval_[b] - lower_[b]) / w;
          bound = lower_[b];
        } else if (w < -st_.pivot_tol) {  // basic value increases
          if (upper_[b] == kInf) continue;
          ratio = (upper_[b] - xval_[b]) / (-w);
          bound = upper_[b];
        } else {
          continue;
        }
        if (ratio < 0.0) ratio = 0.0;  // degeneracy within tolerance
        if (ratio < step - 1e-12 ||
            (ratio < step + 1e-12 && leave_row >= 0 && basis_[i] < basis_[leave_row])) {
          step = ratio;
          leave_row = i;
          leave_bound = bound;
        }
      }

      if (step == kInf) {
        if (phase1)
          throw SolverInconsistencyError("phase-1 objective reported unbounded");
        return false;
      }

      // Apply the step to all basic values and the entering variable.
      if (step > 0.0) {
        for (int i = 0; i < p_; ++i) {
          const double w = tab(i, enter);
          if (w != 0.0) xval_[basis_[i]] -= enter_dir * step * w;
        }
        xval_[enter] += enter_dir * step;
      }

      if (leave_row < 0) {
        // Bound flip: entering variable moved to its opposite bound.
        state_[enter] =
            enter_dir > 0 ? NonbasicState::AtUpper : NonbasicState::AtLower;
        xval_[enter] = enter_dir > 0 ? upper_[enter] : lower_[enter];
      } else {
        const int leave = basis_[leave_row];
        xval_[leave] = leave_bound;  // snap to the bound it hit
        state_[leave] = (leave_bound == lower_[leave] && lower_[leave] != upper_[leave])
                            ? NonbasicState::AtLower
                            : (leave_bound == upper_[leave] ? NonbasicState::AtUpper
                                                            : NonbasicState::AtLower);
        in_basis_[leave] = false;
        basis_row_[leave] = -1;
        pivot(leave_row, enter);
      }

      const double obj = current_objective();
      if (obj < best_obj - 1e-12) {
        best_obj = obj;
        stalled = 0;
      } else if (!bland && ++stalled > bland_after) {
        bland = true;
      }
    }
  }

  void pivot(int r, int enter) {
    double* rowr = &tableau_[static_cast<std::size_t>(r) * total_];
    const double piv = rowr[enter];
    const double inv = 1.0 / piv;
    for (int j = 0; j < total_; ++j) rowr[j] *= inv;
    rowr[enter] = 1.0;
    for (int i = 0; i < p_; ++i) {
      if (i == r) continue;
      double* rowi = &tableau_[static_cast<std::size_t>(i) * total_];
      const double f = rowi[enter];
      if (f == 0.0) continue;
      for (int j = 0; j < total_; ++j) rowi[j] -= f * rowr[j];
      rowi[enter] = 0.0;
    }
    const double fd = dcost_[enter];
    if (fd != 0.0) {
      for (int j = 0; j < total_; ++j) dcost_[j] -= fd * rowr[j];
    }
    dcost_[enter] = 0.0;
    basis_[r] = enter;
    in_basis_[enter] = true;
    basis_row_[enter] = r;
  }

  // Recomputes basic values from the original data with an LU solve on the
  // basis matrix, discarding drift accumulated over many tableau pivots.
  void refine() {
    Matrix basis_mat(p_, p_);
    Vector rhs(p_);
    for (int i = 0; i < p_; ++i) {
      double r = prob_.eq_rhs[i];
      for (int j = 0; j < nv_; ++j)
        if (!in_basis_[j] && xval_[j] != 0.0) r -= prob_.eq_matrix(i, j) * xval_[j];
      rhs[i] = r;
      for (int c = 0; c < p_; ++c) {
        const int b = basis_[c];
        // In the unscaled system the artificial for row r carries row_sign_[r].
        basis_mat(i, c) = b < nv_ ? prob_.eq_matrix(i, b)
                                  : (b - nv_ == i ? row_sign_[i] : 0.0);
      }
    }
    Vector z;
    try {
      z = lu_solve(basis_mat, rhs, st_);
    } catch (const SingularMatrixError&) {
      return;  // keep the incremental values
    }
    if (!all_finite(z)) return;
    for (int c = 0; c < p_; ++c) xval_[basis_[c]] = z[c];
  }

  // After phase 1, pivot zero-valued basic artificials onto structural
  // columns where possible; rows with no eligible pivot are redundant and the
  // artificial stays basic at zero.
  void drive_out_artificials() {
    for (int i = 0; i < p_; ++i) {
      if (basis_[i] < nv_) continue;
      int enter = -1;
      double best = st_.pivot_tol;
      for (int j = 0; j < nv_; ++j) {
        if (in_basis_[j]) continue;
        const double a = std::abs(tab(i, j));
        if (a > best) { best = a; enter = j; }
      }
      if (enter < 0) continue;
      const int leave = basis_[i];
      in_basis_[leave] = false;
      basis_row_[leave] = -1;
      state_[leave] = NonbasicState::AtLower;
      xval_[leave] = 0.0;
      const double saved = xval_[enter];
      pivot(i, enter);
      xval_[enter] = saved;  // degenerate pivot, values unchanged
    }
  }

  LpOutcome infeasible_outcome() const {
    // Phase-1 simplex multipliers, mapped back through the row signs.
    LpOutcome out;
    out.status = LpStatus::Infeasible;
    Vector y(p_);
    for (int i = 0; i < p_; ++i) {
      // pi'_i = c_{a_i} - d_{a_i} with c_{a_i} = 1 for the scaled system.
      y[i] = row_sign_[i] * (1.0 - dcost_[nv_ + i]);
    }
    if (farkas_violation(y) < farkas_violation(negated(y))) {
      for (double& v : y) v = -v;
    }
    out.infeasibility_certificate = std::move(y);
    return out;
  }

  static Vector negated(Vector v) {
    for (double& x : v) x = -x;
    return v;
  }

  // y'h - sup_{l<=x<=u} y'Gx; positive proves infeasibility.
  double farkas_violation(const Vector& y) const {
    double v = dot(y, prob_.eq_rhs);
    for (int j = 0; j < nv_; ++j) {
      double c = 0.0;
      for (int i = 0; i < p_; ++i) c += y[i] * prob_.eq_matrix(i, j);
      if (std::abs(c) <= st_.feas_tol) continue;
      const double b = c > 0 ? upper_[j] : lower_[j];
      if (!std::isfinite(b)) return -kInf;
      v -= c * b;
    }
    return v;
  }

  const LpProblem& prob_;
  SolverSettings st_;
  int nv_, p_, total_;
  int max_iter_;
  long iterations_ = 0;

  std::vector<double> tableau_;
  Vector lower_, upper_, xval_, costs_, dcost_, row_sign_;
  std::vector<NonbasicState> state_;
  std::vector<int> basis_, basis_row_;
  std::vector<bool> in_basis_;
};

}  // namespace detail

/// Solves an equality-form bounded-variable LP with a two-phase dense primal
/// simplex. Deterministic for identical inputs; returns vertex optima.
inline LpOutcome solve_lp(const LpProblem& problem, const SolverSettings& settings = {}) {
  problem.validate();
  if (settings.feas_tol <= 0 || settings.pivot_tol <= 0)
    throw InputError("SolverSettings: tolerances must be strictly positive");
  detail::SimplexTableau tableau(problem, settings);
  return tableau.run();
}

}  // namespace binrec
