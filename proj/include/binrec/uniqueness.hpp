#pragma once

#include <optional>
#include <vector>

#include "binrec/core.hpp"
#include "binrec/lp.hpp"
#include "binrec/recovery.hpp"
#include "binrec/separation.hpp"

namespace binrec {

/// Support/zero-set split of a binary signal.
struct Partition {
  std::vector<int> zero_set;  // indices with x_j = 0
  std::vector<int> one_set;   // the support

  static Partition of(const SparseBinarySignal& truth) {
    Partition part;
    part.one_set = truth.support;
    part.zero_set = truth.complement().support;
    return part;
  }
};

struct UniquenessResult {
  bool unique = false;
  std::optional<SeparationCertificate> certificate;  // present iff unique
  std::optional<IntersectionWitness> witness;        // present iff not unique
};

/// Decides whether `truth` is the unique optimum of the box l1 LP on
/// (A, A*truth): unique iff conv({A_j : j off support} u {0}) is disjoint
/// from conv({A_j : j on support}).
inline UniquenessResult is_unique_solution(const Matrix& a, const SparseBinarySignal& truth,
                                           const SolverSettings& settings = {}) {
  if (a.cols() != truth.n) throw InputError("is_unique_solution: dimension mismatch");
  if (truth.k() < 1) throw InputError("is_unique_solution: empty support");
  const Partition part = Partition::of(truth);

  std::vector<Vector> low;  // zero-set columns plus the origin
  low.reserve(part.zero_set.size() + 1);
  for (int j : part.zero_set) low.push_back(a.column(j));
  low.push_back(Vector(a.rows(), 0.0));
  std::vector<Vector> high;
  high.reserve(part.one_set.size());
  for (int j : part.one_set) high.push_back(a.column(j));

  SeparationResult sep = separate_hulls(low, high, settings);
  UniquenessResult res;
  res.unique = sep.separable;
  res.certificate = std::move(sep.certificate);
  res.witness = std::move(sep.witness);
  return res;
}

/// Generic uniqueness test for min c'x s.t. Gx = h, Px >= q at a given
/// feasible point: unique iff the homogeneous system
///   Gz = 0, P_eq z >= 0, c'z <= 0, z != 0
/// has no solution, decided by maximizing/minimizing each coordinate of z
/// over the cone intersected with the unit box.
inline bool mangasarian_unique(const Matrix& g, const Vector& h, const Matrix& p_mat,
                               const Vector& q, const Vector& c, const Vector& x_bar,
                               const SolverSettings& settings = {}) {
  const int n = g.cols();
  if (static_cast<int>(x_bar.size()) != n || p_mat.cols() != n ||
      static_cast<int>(c.size()) != n)
    throw InputError("mangasarian_unique: dimension mismatch");
  const double scale = 1.0 + inf_norm(h) + inf_norm(x_bar);
  const Vector gx = matvec(g, x_bar);
  for (int i = 0; i < g.rows(); ++i)
    if (std::abs(gx[i] - h[i]) > settings.feas_tol * scale)
      throw InputError("mangasarian_unique: x_bar violates the equality system");
  const Vector px = matvec(p_mat, x_bar);
  std::vector<int> tight;
  for (int i = 0; i < p_mat.rows(); ++i) {
    if (px[i] < q[i] - settings.feas_tol * scale)
      throw InputError("mangasarian_unique: x_bar violates an inequality");
    if (std::abs(px[i] - q[i]) <= settings.feas_tol * scale) tight.push_back(i);
  }

  // Variables: z (n, in [-1,1]), slacks for P_eq z >= 0 (t, >= 0), one slack
  // for c'z <= 0 (>= 0).
  const int t = static_cast<int>(tight.size());
  const int nv = n + t + 1;
  const int rows = g.rows() + t + 1;
  LpProblem lp;
  lp.objective.assign(nv, 0.0);
  lp.eq_matrix = Matrix(rows, nv);
  lp.eq_rhs.assign(rows, 0.0);
  lp.lower.assign(nv, 0.0);
  lp.upper.assign(nv, kInf);
  for (int j = 0; j < n; ++j) { lp.lower[j] = -1.0; lp.upper[j] = 1.0; }
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < n; ++j) lp.eq_matrix(i, j) = g(i, j);
  for (int r = 0; r < t; ++r) {
    for (int j = 0; j < n; ++j) lp.eq_matrix(g.rows() + r, j) = p_mat(tight[r], j);
    lp.eq_matrix(g.rows() + r, n + r) = -1.0;
  }
  for (int j = 0; j < n; ++j) lp.eq_matrix(rows - 1, j) = c[j];
  lp.eq_matrix(rows - 1, nv - 1) = 1.0;

  // A nonzero ray scales until some |z_j| = 1, so any nonzero optimum is
  // bounded away from 0; 0.5 is a safe decision threshold.
  for (int j = 0; j < n; ++j) {
    for (double sign : {-1.0, 1.0}) {
      lp.objective[j] = sign;  // minimize sign * z_j
      LpOutcome out = solve_lp(lp, settings);
      lp.objective[j] = 0.0;
      if (out.status != LpStatus::Optimal)
        throw SolverInconsistencyError("mangasarian probe LP not optimal");
      if (out.objective_value < -0.5) return false;
    }
  }
  return true;
}

/// Independent oracle: the box l1 LP has a unique optimum iff every
/// coordinate is constant over the optimal face.
inline bool optimal_face_unique(const Matrix& a, const Vector& b,
                                const SolverSettings& settings = {},
                                double range_tol = 1e-7) {
  const int n = a.cols();
  RecoveryResult base = recover_l1_box(a, b, settings);
  if (base.status != LpStatus::Optimal)
    throw InputError("optimal_face_unique: box l1 LP not feasible");
  double vstar = 0.0;
  for (double x : base.x_hat) vstar += x;

  LpProblem lp;
  lp.objective.assign(n, 0.0);
  lp.eq_matrix = Matrix(a.rows() + 1, n);
  lp.eq_rhs = b;
  lp.eq_rhs.push_back(vstar);
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 1.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < n; ++j) lp.eq_matrix(i, j) = a(i, j);
  for (int j = 0; j < n; ++j) lp.eq_matrix(a.rows(), j) = 1.0;

  for (int j = 0; j < n; ++j) {
    lp.objective[j] = 1.0;
    LpOutcome lo = solve_lp(lp, settings);
    lp.objective[j] = -1.0;
    LpOutcome hi = solve_lp(lp, settings);
    lp.objective[j] = 0.0;
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
      throw SolverInconsistencyError("optimal-face probe LP not optimal");
    if (-hi.objective_value - lo.objective_value > range_tol) return false;
  }
  return true;
}

/// Truth-aware face oracle: `truth` is the unique optimum iff the optimal
/// face is a singleton and `truth` sits on it (the optimal value equals k;
/// the truth is always feasible with value k, so a smaller optimum means the
/// face excludes it).
inline bool optimal_face_unique_for(const Matrix& a, const SparseBinarySignal& truth,
                                    const SolverSettings& settings = {},
                                    double range_tol = 1e-7) {
  const Vector b = matvec(a, truth.to_vector());
  const RecoveryResult base = recover_l1_box(a, b, settings);
  if (base.status != LpStatus::Optimal)
    throw SolverInconsistencyError("box l1 LP infeasible on a consistent instance");
  double vstar = 0.0;
  for (double x : base.x_hat) vstar += x;
  if (std::abs(vstar - truth.k()) > range_tol) return false;
  return optimal_face_unique(a, b, settings, range_tol);
}

/// Instantiates the generic checker with the box l1 LP data
/// (G = A, P = [I; -I], q = (0; -e), c = e).
inline bool mangasarian_unique_l1_box(const Matrix& a, const SparseBinarySignal& truth,
                                      const SolverSettings& settings = {}) {
  const int n = a.cols();
  Matrix p_mat(2 * n, n);
  Vector q(2 * n, 0.0);
  for (int j = 0; j < n; ++j) {
    p_mat(j, j) = 1.0;
    p_mat(n + j, j) = -1.0;
    q[n + j] = -1.0;
  }
  const Vector xbar = truth.to_vector();
  return mangasarian_unique(a, matvec(a, xbar), p_mat, q, Vector(n, 1.0), xbar, settings);
}

}  // namespace binrec
