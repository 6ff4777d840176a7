// Test-only oracles, independent of the simplex implementation path.
#pragma once

#include <optional>
#include <vector>

#include "binrec/core.hpp"
#include "binrec/lp.hpp"
#include "binrec/random.hpp"

namespace binrec::testing {

// Exhaustive basic-feasible-point enumeration for small LPs with finite
// bounds: every choice of p basic columns (nonsingular G_B) and every
// lower/upper assignment of the nonbasics yields a candidate vertex.
// Returns the minimum objective over feasible candidates, or nullopt when no
// candidate is feasible. Valid for generic (full-row-rank) G.
inline std::optional<double> enumerate_vertex_min(const LpProblem& lp, double feas_tol = 1e-7) {
  const int nv = lp.num_vars();
  const int p = lp.num_rows();
  std::optional<double> best;

  std::vector<int> basic(p);
  std::vector<bool> choose(nv, false);
  // iterate over all p-subsets of [0, nv)
  std::vector<int> comb(p);
  for (int i = 0; i < p; ++i) comb[i] = i;
  while (true) {
    const int free_count = nv - p;
    std::vector<int> nonbasic;
    {
      std::vector<bool> used(nv, false);
      for (int j : comb) used[j] = true;
      for (int j = 0; j < nv; ++j)
        if (!used[j]) nonbasic.push_back(j);
    }
    for (long mask = 0; mask < (1L << free_count); ++mask) {
      Vector x(nv, 0.0);
      for (int t = 0; t < free_count; ++t) {
        const int j = nonbasic[t];
        x[j] = (mask >> t) & 1 ? lp.upper[j] : lp.lower[j];
      }
      // Solve G_B x_B = h - G_N x_N.
      Matrix gb(p, p);
      Vector rhs(p);
      for (int i = 0; i < p; ++i) {
        double r = lp.eq_rhs[i];
        for (int t = 0; t < free_count; ++t) r -= lp.eq_matrix(i, nonbasic[t]) * x[nonbasic[t]];
        rhs[i] = r;
        for (int t = 0; t < p; ++t) gb(i, t) = lp.eq_matrix(i, comb[t]);
      }
      Vector xb;
      try {
        xb = lu_solve(gb, rhs);
      } catch (const SingularMatrixError&) {
        continue;
      }
      bool ok = true;
      for (int t = 0; t < p; ++t) {
        x[comb[t]] = xb[t];
        if (xb[t] < lp.lower[comb[t]] - feas_tol || xb[t] > lp.upper[comb[t]] + feas_tol)
          ok = false;
      }
      if (!ok) continue;
      const double obj = dot(lp.objective, x);
      if (!best || obj < *best) best = obj;
    }
    int i = p - 1;
    while (i >= 0 && comb[i] == nv - p + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < p; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

// Random small LP with finite bounds; roughly half are built to be feasible.
inline LpProblem random_small_lp(Rng& rng, int nv, int p) {
  LpProblem lp;
  lp.objective.resize(nv);
  lp.eq_matrix = Matrix(p, nv);
  lp.eq_rhs.resize(p);
  lp.lower.resize(nv);
  lp.upper.resize(nv);
  for (int j = 0; j < nv; ++j) {
    lp.objective[j] = rng.normal();
    const double a = 2.0 * rng.next_double() - 1.0;
    const double b = a + 2.0 * rng.next_double();
    lp.lower[j] = a;
    lp.upper[j] = b;
  }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < nv; ++j) lp.eq_matrix(i, j) = rng.normal();
  if (rng.next_double() < 0.5) {
    // rhs from a random point in the box: feasible by construction
    Vector x0(nv);
    for (int j = 0; j < nv; ++j)
      x0[j] = lp.lower[j] + rng.next_double() * (lp.upper[j] - lp.lower[j]);
    lp.eq_rhs = matvec(lp.eq_matrix, x0);
  } else {
    for (int i = 0; i < p; ++i) lp.eq_rhs[i] = 5.0 * rng.normal();
  }
  return lp;
}

// Residual checks for an Optimal outcome.
inline double primal_residual(const LpProblem& lp, const Vector& x) {
  Vector r = matvec(lp.eq_matrix, x);
  double res = 0.0;
  for (int i = 0; i < lp.num_rows(); ++i) res = std::max(res, std::abs(r[i] - lp.eq_rhs[i]));
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower[j] > -kInf) res = std::max(res, lp.lower[j] - x[j]);
    if (lp.upper[j] < kInf) res = std::max(res, x[j] - lp.upper[j]);
  }
  return res;
}

// Farkas check: y'h - sup_{box} y'Gx must be positive.
inline double farkas_violation(const LpProblem& lp, const Vector& y, double tol = 1e-9) {
  double v = dot(y, lp.eq_rhs);
  for (int j = 0; j < lp.num_vars(); ++j) {
    double c = 0.0;
    for (int i = 0; i < lp.num_rows(); ++i) c += y[i] * lp.eq_matrix(i, j);
    if (std::abs(c) <= tol) continue;
    const double b = c > 0 ? lp.upper[j] : lp.lower[j];
    if (!std::isfinite(b)) return -kInf;
    v -= c * b;
  }
  return v;
}

}  // namespace binrec::testing
