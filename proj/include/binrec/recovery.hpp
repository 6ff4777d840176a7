#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "binrec/core.hpp"
#include "binrec/lp.hpp"

namespace binrec {

/// Ground-truth binary signal: n and the support (indices of the 1 entries).
struct SparseBinarySignal {
  int n = 0;
  std::vector<int> support;  // sorted, distinct, in [0, n)

  SparseBinarySignal() = default;
  SparseBinarySignal(int n_, std::vector<int> support_) : n(n_), support(std::move(support_)) {
    std::sort(support.begin(), support.end());
    validate();
  }

  int k() const { return static_cast<int>(support.size()); }

  void validate() const {
    if (n <= 0) throw InputError("SparseBinarySignal: n must be positive");
    int prev = -1;
    for (int j : support) {
      if (j < 0 || j >= n) throw InputError("SparseBinarySignal: support index out of range");
      if (j == prev) throw InputError("SparseBinarySignal: duplicate support index");
      prev = j;
    }
  }

  Vector to_vector() const {
    Vector x(n, 0.0);
    for (int j : support) x[j] = 1.0;
    return x;
  }

  /// +1 on the support, -1 elsewhere.
  Vector to_pm_one() const {
    Vector y(n, -1.0);
    for (int j : support) y[j] = 1.0;
    return y;
  }

  /// The signal with complemented support (1 <-> 0 swapped).
  SparseBinarySignal complement() const {
    std::vector<int> comp;
    comp.reserve(n - k());
    std::size_t s = 0;
    for (int j = 0; j < n; ++j) {
      if (s < support.size() && support[s] == j) { ++s; continue; }
      comp.push_back(j);
    }
    return SparseBinarySignal(n, std::move(comp));
  }
};

enum class Formulation { LinfL2, L1Box, BoxFeas, NonnegL1, SquareInverse };

inline const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::LinfL2: return "linf";
    case Formulation::L1Box: return "l1box";
    case Formulation::BoxFeas: return "boxfeas";
    case Formulation::NonnegL1: return "nonneg";
    case Formulation::SquareInverse: return "square";
  }
  return "?";
}

struct RecoveryInstance {
  Matrix A;
  Vector b;
  std::optional<SparseBinarySignal> truth;
};

struct RecoveryResult {
  Formulation formulation;
  Vector x_hat;
  std::optional<double> auxiliary;  // the minimax radius, LinfL2 only
  LpStatus status = LpStatus::Optimal;
};

/// min e'x s.t. Ax = b, 0 <= x <= 1.
inline RecoveryResult recover_l1_box(const Matrix& a, const Vector& b,
                                     const SolverSettings& settings = {}) {
  const int n = a.cols();
  LpProblem lp;
  lp.objective.assign(n, 1.0);
  lp.eq_matrix = a;
  lp.eq_rhs = b;
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 1.0);
  LpOutcome out = solve_lp(lp, settings);
  return {Formulation::L1Box, std::move(out.solution), std::nullopt, out.status};
}

/// min 0 s.t. Ax = b, 0 <= x <= 1 (pure feasibility).
inline RecoveryResult feasibility_box(const Matrix& a, const Vector& b,
                                      const SolverSettings& settings = {}) {
  const int n = a.cols();
  LpProblem lp;
  lp.objective.assign(n, 0.0);
  lp.eq_matrix = a;
  lp.eq_rhs = b;
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 1.0);
  LpOutcome out = solve_lp(lp, settings);
  return {Formulation::BoxFeas, std::move(out.solution), std::nullopt, out.status};
}

/// min e'x s.t. Ax = b, x >= 0.
inline RecoveryResult recover_nonneg(const Matrix& a, const Vector& b,
                                     const SolverSettings& settings = {}) {
  const int n = a.cols();
  LpProblem lp;
  lp.objective.assign(n, 1.0);
  lp.eq_matrix = a;
  lp.eq_rhs = b;
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, kInf);
  LpOutcome out = solve_lp(lp, settings);
  return {Formulation::NonnegL1, std::move(out.solution), std::nullopt, out.status};
}

/// Minimax formulation on the +/-1 signal: with d = Ae - 2b, solve
/// min r s.t. Ay = d, -r e <= y <= r e, then map back x = (e - y)/2.
/// The coupling rows are written in equality form with slack columns:
///   y_j - r + s_j = 0,  y_j + r - t_j = 0,  s, t >= 0.
inline RecoveryResult recover_linf(const Matrix& a, const Vector& b,
                                   const SolverSettings& settings = {}) {
  const int m = a.rows();
  const int n = a.cols();
  if (static_cast<int>(b.size()) != m) throw InputError("recover_linf: rhs length mismatch");

  // Variables: y (n, free), r (1, >= 0), s (n, >= 0), t (n, >= 0).
  const int nv = n + 1 + 2 * n;
  const int p = m + 2 * n;
  const int ir = n;           // radius column
  const int is0 = n + 1;      // first slack block
  const int it0 = n + 1 + n;  // second slack block

  LpProblem lp;
  lp.objective.assign(nv, 0.0);
  lp.objective[ir] = 1.0;
  lp.eq_matrix = Matrix(p, nv);
  lp.eq_rhs.assign(p, 0.0);
  lp.lower.assign(nv, 0.0);
  lp.upper.assign(nv, kInf);
  for (int j = 0; j < n; ++j) lp.lower[j] = -kInf;

  for (int i = 0; i < m; ++i) {
    double d = -2.0 * b[i];
    for (int j = 0; j < n; ++j) {
      lp.eq_matrix(i, j) = a(i, j);
      d += a(i, j);
    }
    lp.eq_rhs[i] = d;
  }
  for (int j = 0; j < n; ++j) {
    lp.eq_matrix(m + j, j) = 1.0;
    lp.eq_matrix(m + j, ir) = -1.0;
    lp.eq_matrix(m + j, is0 + j) = 1.0;
    lp.eq_matrix(m + n + j, j) = 1.0;
    lp.eq_matrix(m + n + j, ir) = 1.0;
    lp.eq_matrix(m + n + j, it0 + j) = -1.0;
  }

  LpOutcome out = solve_lp(lp, settings);
  RecoveryResult res{Formulation::LinfL2, {}, std::nullopt, out.status};
  if (out.status == LpStatus::Optimal) {
    res.x_hat.resize(n);
    for (int j = 0; j < n; ++j) res.x_hat[j] = (1.0 - out.solution[j]) / 2.0;
    res.auxiliary = out.solution[ir];
  }
  return res;
}

/// Square-system path: x = A^{-1} b.
inline RecoveryResult recover_square(const Matrix& a, const Vector& b,
                                     const SolverSettings& settings = {}) {
  if (a.rows() != a.cols()) throw InputError("recover_square: matrix must be square");
  return {Formulation::SquareInverse, lu_solve(a, b, settings), std::nullopt,
          LpStatus::Optimal};
}

inline RecoveryResult recover(Formulation f, const Matrix& a, const Vector& b,
                              const SolverSettings& settings = {}) {
  switch (f) {
    case Formulation::LinfL2: return recover_linf(a, b, settings);
    case Formulation::L1Box: return recover_l1_box(a, b, settings);
    case Formulation::BoxFeas: return feasibility_box(a, b, settings);
    case Formulation::NonnegL1: return recover_nonneg(a, b, settings);
    case Formulation::SquareInverse: return recover_square(a, b, settings);
  }
  throw InputError("unknown formulation");
}

enum class SignalAlphabet { Binary, PmOne };

/// Relative max-norm success test against the ground truth. The +/-1 variant
/// compares e - 2*x_hat against e - 2*truth.
inline bool check_success(const Vector& x_hat, const SparseBinarySignal& truth,
                          double tol = 1e-9,
                          SignalAlphabet alphabet = SignalAlphabet::Binary) {
  if (static_cast<int>(x_hat.size()) != truth.n)
    throw InputError("check_success: length mismatch");
  double err = 0.0;
  const Vector xbar = truth.to_vector();
  for (int j = 0; j < truth.n; ++j) err = std::max(err, std::abs(x_hat[j] - xbar[j]));
  double denom = 1.0;  // max(1, ||truth||_inf)
  if (alphabet == SignalAlphabet::PmOne) err *= 2.0;
  return err / denom <= tol;
}

}  // namespace binrec
