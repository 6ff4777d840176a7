#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "binrec/core.hpp"
#include "binrec/random.hpp"
#include "binrec/separation.hpp"
#include "binrec/uniqueness.hpp"

namespace binrec {

struct PointCloud {
  int dim = 0;
  std::vector<Vector> points;

  static PointCloud from_columns(const Matrix& a) {
    PointCloud c;
    c.dim = a.rows();
    c.points.reserve(a.cols());
    for (int j = 0; j < a.cols(); ++j) c.points.push_back(a.column(j));
    return c;
  }

  int size() const { return static_cast<int>(points.size()); }
};

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct KsetReport {
  int n = 0;
  int k = 0;
  double count = 0.0;          // X for a single cloud, mean of X for estimates
  double count_stderr = 0.0;   // 0 for a single cloud
  double ratio = 0.0;          // count / C(n, k)
  double ratio_stderr = 0.0;
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

/// True iff conv(subset) is disjoint from conv(rest [+ origin]).
inline bool is_separable(const PointCloud& cloud, const std::vector<int>& subset,
                         bool augment_origin, const SolverSettings& settings = {}) {
  std::vector<bool> in(cloud.points.size(), false);
  for (int j : subset) {
    if (j < 0 || j >= cloud.size()) throw InputError("is_separable: index out of range");
    in[j] = true;
  }
  std::vector<Vector> side, rest;
  for (int j = 0; j < cloud.size(); ++j) (in[j] ? side : rest).push_back(cloud.points[j]);
  if (side.empty()) throw InputError("is_separable: empty subset");
  if (augment_origin) rest.push_back(Vector(cloud.dim, 0.0));
  return separate_hulls(rest, side, settings).separable;
}

/// Exhaustive k-set count over all C(n,k) subsets. k = n counts as 1 by the
/// empty-complement convention.
inline KsetReport count_ksets(const PointCloud& cloud, int k, bool augment_origin,
                              const SolverSettings& settings = {},
                              double subset_cap = 1e6) {
  const int n = cloud.size();
  if (k < 1 || k > n) throw InputError("count_ksets: k out of range");
  const double total = binomial(n, k);
  if (total > subset_cap) throw InputError("count_ksets: C(n,k) exceeds the subset cap");

  KsetReport rep;
  rep.n = n;
  rep.k = k;
  if (k == n) {
    rep.count = 1.0;
    rep.ratio = 1.0;
    return rep;
  }
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  long count = 0;
  while (true) {
    if (is_separable(cloud, comb, augment_origin, settings)) ++count;
    // next combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && comb[i] == n - k + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
  rep.count = static_cast<double>(count);
  rep.ratio = rep.count / total;
  return rep;
}

/// Monte Carlo estimate of the probability that a fixed k-sparse support is
/// the unique box-l1 optimum. Exchangeable columns make the support choice
/// immaterial, so the first k coordinates are used.
inline MeanStderr estimate_recovery_prob(const DistributionSpec& dist, int m, int n, int k,
                                         int trials, std::uint64_t seed,
                                         const SolverSettings& settings = {}) {
  if (trials < 1) throw InputError("estimate_recovery_prob: trials must be >= 1");
  std::vector<int> support(k);
  for (int i = 0; i < k; ++i) support[i] = i;
  const SparseBinarySignal truth(n, support);
  long hits = 0;
  for (int t = 0; t < trials; ++t) {
    const Matrix a = sample_matrix(dist, m, n, derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    if (is_unique_solution(a, truth, settings).unique) ++hits;
  }
  MeanStderr ms;
  ms.mean = static_cast<double>(hits) / trials;
  ms.stderr_ = std::sqrt(ms.mean * (1.0 - ms.mean) / trials);
  return ms;
}

/// Monte Carlo estimate of E[X] and E[X]/C(n,k) over random clouds.
inline KsetReport estimate_expected_ksets(const DistributionSpec& dist, int m, int n, int k,
                                          int trials, std::uint64_t seed, bool augment_origin,
                                          const SolverSettings& settings = {},
                                          double subset_cap = 1e6) {
  if (trials < 1) throw InputError("estimate_expected_ksets: trials must be >= 1");
  const double total = binomial(n, k);
  if (total > subset_cap) throw InputError("estimate_expected_ksets: C(n,k) exceeds the cap");
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix a = sample_matrix(dist, m, n, derive_seed(seed, {static_cast<std::uint64_t>(t)}));
    const KsetReport one = count_ksets(PointCloud::from_columns(a), k, augment_origin,
                                       settings, subset_cap);
    sum += one.count;
    sumsq += one.count * one.count;
  }
  KsetReport rep;
  rep.n = n;
  rep.k = k;
  rep.count = sum / trials;
  const double var = trials > 1 ? std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1)) : 0.0;
  rep.count_stderr = std::sqrt(var / trials);
  rep.ratio = rep.count / total;
  rep.ratio_stderr = rep.count_stderr / total;
  return rep;
}

struct Theorem3Report {
  MeanStderr recovery_prob;
  KsetReport ksets_augmented;  // complement side augmented with the origin
  KsetReport ksets_literal;    // columns only
  double gap_augmented = 0.0;
  double gap_literal = 0.0;
  double pooled_stderr_augmented = 0.0;
  double pooled_stderr_literal = 0.0;
};

/// Compares the direct uniqueness-probability estimator against E[X]/C(n,k)
/// in both the origin-augmented and the literal column-only k-set senses.
inline Theorem3Report verify_theorem3(const DistributionSpec& dist, int m, int n, int k,
                                      int trials, std::uint64_t seed,
                                      const SolverSettings& settings = {}) {
  Theorem3Report rep;
  rep.recovery_prob = estimate_recovery_prob(dist, m, n, k, trials,
                                             derive_seed(seed, {1}), settings);
  rep.ksets_augmented = estimate_expected_ksets(dist, m, n, k, trials,
                                                derive_seed(seed, {2}), true, settings);
  rep.ksets_literal = estimate_expected_ksets(dist, m, n, k, trials,
                                              derive_seed(seed, {3}), false, settings);
  rep.gap_augmented = std::abs(rep.recovery_prob.mean - rep.ksets_augmented.ratio);
  rep.gap_literal = std::abs(rep.recovery_prob.mean - rep.ksets_literal.ratio);
  rep.pooled_stderr_augmented = std::hypot(rep.recovery_prob.stderr_,
                                           rep.ksets_augmented.ratio_stderr);
  rep.pooled_stderr_literal = std::hypot(rep.recovery_prob.stderr_,
                                         rep.ksets_literal.ratio_stderr);
  return rep;
}

}  // namespace binrec
