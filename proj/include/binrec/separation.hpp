#pragma once

#include <optional>
#include <vector>

#include "binrec/core.hpp"
#include "binrec/lp.hpp"

namespace binrec {

/// Strictly separating hyperplane (w, gamma): w.p <= gamma - margin on the
/// low side, w.p >= gamma + margin on the high side, margin > 0.
struct SeparationCertificate {
  Vector normal;
  double offset = 0.0;
  double margin = 0.0;

  bool validates(const std::vector<Vector>& low, const std::vector<Vector>& high,
                 double slack = 0.0) const {
    if (margin <= 0.0) return false;
    for (const Vector& q : low)
      if (dot(normal, q) > offset - margin + slack) return false;
    for (const Vector& q : high)
      if (dot(normal, q) < offset + margin - slack) return false;
    return true;
  }
};

/// Convex combinations witnessing a common point of the two hulls.
struct IntersectionWitness {
  Vector alpha_low;   // over the low-side points, in their given order
  Vector alpha_high;  // over the high-side points

  bool validates(const std::vector<Vector>& low, const std::vector<Vector>& high,
                 double tol) const {
    if (alpha_low.size() != low.size() || alpha_high.size() != high.size()) return false;
    double s0 = 0.0, s1 = 0.0;
    for (double a : alpha_low) { if (a < -tol) return false; s0 += a; }
    for (double a : alpha_high) { if (a < -tol) return false; s1 += a; }
    if (std::abs(s0 - 1.0) > tol || std::abs(s1 - 1.0) > tol) return false;
    if (low.empty()) return false;
    const int dim = static_cast<int>(low[0].size());
    Vector diff(dim, 0.0);
    for (std::size_t j = 0; j < low.size(); ++j)
      for (int i = 0; i < dim; ++i) diff[i] += alpha_low[j] * low[j][i];
    for (std::size_t j = 0; j < high.size(); ++j)
      for (int i = 0; i < dim; ++i) diff[i] -= alpha_high[j] * high[j][i];
    return inf_norm(diff) <= tol;
  }
};

struct SeparationResult {
  bool separable = false;
  std::optional<SeparationCertificate> certificate;  // present iff separable
  std::optional<IntersectionWitness> witness;        // present iff not separable
};

/// Decides conv(low) ^ conv(high) = {} via the feasibility LP
///   sum_a alpha_a p_a = sum_b beta_b q_b, sum alpha = 1, sum beta = 1,
///   alpha, beta >= 0.
/// Infeasible means disjoint hulls; the separating normal is recovered from
/// the Farkas certificate and re-verified by direct evaluation over the points.
inline SeparationResult separate_hulls(const std::vector<Vector>& low,
                                       const std::vector<Vector>& high,
                                       const SolverSettings& settings = {}) {
  if (low.empty() || high.empty()) {
    // An empty side is vacuously separable from anything.
    SeparationResult res;
    res.separable = true;
    const int dim = low.empty() ? (high.empty() ? 1 : static_cast<int>(high[0].size()))
                                : static_cast<int>(low[0].size());
    res.certificate = SeparationCertificate{Vector(dim, 0.0), 0.0, kInf};
    return res;
  }
  const int dim = static_cast<int>(low[0].size());
  const int n0 = static_cast<int>(low.size());
  const int n1 = static_cast<int>(high.size());
  const int nv = n0 + n1;
  const int p = dim + 2;

  LpProblem lp;
  lp.objective.assign(nv, 0.0);
  lp.eq_matrix = Matrix(p, nv);
  lp.eq_rhs.assign(p, 0.0);
  lp.lower.assign(nv, 0.0);
  lp.upper.assign(nv, 1.0);  // convex weights never exceed 1
  for (int j = 0; j < n0; ++j) {
    for (int i = 0; i < dim; ++i) lp.eq_matrix(i, j) = low[j][i];
    lp.eq_matrix(dim, j) = 1.0;
  }
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < dim; ++i) lp.eq_matrix(i, n0 + j) = -high[j][i];
    lp.eq_matrix(dim + 1, n0 + j) = 1.0;
  }
  lp.eq_rhs[dim] = 1.0;
  lp.eq_rhs[dim + 1] = 1.0;

  LpOutcome out = solve_lp(lp, settings);
  SeparationResult res;
  if (out.status == LpStatus::Optimal) {
    res.separable = false;
    IntersectionWitness w;
    w.alpha_low.assign(out.solution.begin(), out.solution.begin() + n0);
    w.alpha_high.assign(out.solution.begin() + n0, out.solution.end());
    res.witness = std::move(w);
    return res;
  }
  if (out.status != LpStatus::Infeasible)
    throw SolverInconsistencyError("separation LP neither feasible nor infeasible");

  // Candidate normal: the first dim components of the Farkas dual.
  Vector w(out.infeasibility_certificate.begin(),
           out.infeasibility_certificate.begin() + dim);
  auto gap_of = [&](const Vector& normal) {
    double g_low = -kInf, g_high = kInf;
    for (const Vector& q : low) g_low = std::max(g_low, dot(normal, q));
    for (const Vector& q : high) g_high = std::min(g_high, dot(normal, q));
    return std::pair<double, double>{g_low, g_high};
  };
  auto [g_low, g_high] = gap_of(w);
  if (g_high - g_low <= 0.0) {
    for (double& v : w) v = -v;
    std::tie(g_low, g_high) = gap_of(w);
  }
  if (g_high - g_low <= 0.0)
    throw SolverInconsistencyError("infeasibility certificate yields no separating gap");
  res.separable = true;
  res.certificate = SeparationCertificate{std::move(w), (g_low + g_high) / 2.0,
                                          (g_high - g_low) / 2.0};
  return res;
}

}  // namespace binrec
