#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "binrec/core.hpp"
#include "binrec/random.hpp"
#include "binrec/recovery.hpp"

namespace binrec {

/// H(x) = -x log2 x - (1-x) log2 (1-x), with H(0) = H(1) = 0.
inline double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw InputError("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Conjectured transition curve in delta = m/n coordinates.
inline double conjecture_curve(double eta) { return binary_entropy(eta) / 2.0; }

/// Compressed-sensing measurement lower bound k log2(n/k) for general
/// k-sparse signals (divide by n for delta coordinates).
inline double cs_lower_bound_curve(int n, int k) {
  if (k < 1 || k > n) throw InputError("cs_lower_bound_curve: k out of range");
  return k * std::log2(static_cast<double>(n) / k);
}

enum class SweepMode { RhoDelta, EtaDelta };

struct SweepConfig {
  SweepMode mode = SweepMode::EtaDelta;
  int n = 200;
  std::vector<Formulation> formulations{Formulation::L1Box};
  std::vector<DistributionSpec> distributions{{DistributionKind::D1}};
  int trials_per_cell = 200;
  std::uint64_t base_seed = 0;
  double tolerance = 1e-9;
  std::vector<int> m_override;  // optional explicit m grid
  std::vector<int> k_override;  // optional explicit k grid
  bool couple_supports = false;  // reuse the binary support for the +/-1 signal

  void validate() const {
    if (trials_per_cell < 1) throw InputError("SweepConfig: trials_per_cell must be >= 1");
    if (n < 10) throw InputError("SweepConfig: n must be >= 10");
    if (formulations.empty()) throw InputError("SweepConfig: formulations must be nonempty");
    if (distributions.empty()) throw InputError("SweepConfig: distributions must be nonempty");
    if (tolerance <= 0) throw InputError("SweepConfig: tolerance must be positive");
  }
};

struct CellResult {
  DistributionKind distribution = DistributionKind::D1;
  Formulation formulation = Formulation::L1Box;
  int n = 0, m = 0, k = 0;
  int trials = 0, successes = 0;
  std::string error;  // nonempty when the cell aborted

  double rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
  double delta() const { return static_cast<double>(m) / n; }
  double rho() const { return static_cast<double>(k) / m; }
  double eta() const { return static_cast<double>(k) / n; }
};

namespace detail {

/// `count` integer gridpoints spread evenly over [lo, hi], rounded,
/// deduplicated, endpoints kept.
inline std::vector<int> int_linspace(double lo, double hi, int count) {
  std::vector<int> vals;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    vals.push_back(static_cast<int>(std::lround(lo + t * (hi - lo))));
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

}  // namespace detail

/// Grid cells (m, k) for a config, before crossing with formulations and
/// distributions.
inline std::vector<std::pair<int, int>> sweep_grid(const SweepConfig& cfg) {
  std::vector<std::pair<int, int>> cells;
  const int n = cfg.n;
  if (cfg.mode == SweepMode::RhoDelta) {
    std::vector<int> ms = cfg.m_override.empty()
                              ? detail::int_linspace(n / 10.0, 9.0 * n / 10.0, 17)
                              : cfg.m_override;
    for (int m : ms) {
      std::vector<int> ks = cfg.k_override.empty()
                                ? detail::int_linspace(1, m, std::max(2, (m + 3) / 4))
                                : cfg.k_override;
      for (int k : ks)
        if (k >= 1 && k <= m && k <= n) cells.emplace_back(m, k);
    }
  } else {
    std::vector<int> ks = cfg.k_override.empty()
                              ? detail::int_linspace(n / 10.0, 9.0 * n / 10.0, 17)
                              : cfg.k_override;
    std::vector<int> ms = cfg.m_override.empty()
                              ? detail::int_linspace(0.02 * n, 0.98 * n, 25)
                              : cfg.m_override;
    for (int k : ks)
      for (int m : ms)
        if (k >= 1 && k <= n && m >= 1) cells.emplace_back(m, k);
  }
  return cells;
}

/// One Monte Carlo repetition. For the minimax formulation the +/-1 truth is
/// drawn with exactly k entries equal to +1 and success is judged on the
/// +/-1 signal; the other formulations judge the binary signal directly.
inline bool run_repetition(Formulation f, const DistributionSpec& dist, int m, int n, int k,
                           std::uint64_t seed, double tol, bool couple_supports,
                           const SolverSettings& settings) {
  const Matrix a = sample_matrix(dist, m, n, derive_seed(seed, {1}));
  const SparseBinarySignal x_signal = sample_signal(n, k, derive_seed(seed, {2}));
  SparseBinarySignal truth = x_signal;
  SignalAlphabet alphabet = SignalAlphabet::Binary;
  if (f == Formulation::LinfL2) {
    const SparseBinarySignal y_signal =
        couple_supports ? x_signal : sample_signal(n, k, derive_seed(seed, {3}));
    // y has k entries +1; the matching x-space signal is its complement.
    truth = y_signal.complement();
    alphabet = SignalAlphabet::PmOne;
  }
  const Vector b = matvec(a, truth.to_vector());
  const RecoveryResult res = recover(f, a, b, settings);
  if (res.status != LpStatus::Optimal) return false;
  return check_success(res.x_hat, truth, tol, alphabet);
}

/// Runs the full sweep. `jobs` only controls thread count; per-repetition
/// derived seeds and the canonical output ordering make the result
/// independent of scheduling.
inline std::vector<CellResult> run_sweep(const SweepConfig& cfg, int jobs = 1) {
  cfg.validate();
  const auto grid = sweep_grid(cfg);
  SolverSettings settings;
  settings.feas_tol = std::min(1e-9, cfg.tolerance);

  struct Task {
    std::size_t dist_i, form_i, cell_i;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < cfg.distributions.size(); ++d)
    for (std::size_t f = 0; f < cfg.formulations.size(); ++f)
      for (std::size_t c = 0; c < grid.size(); ++c) tasks.push_back({d, f, c});

  std::vector<CellResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      const DistributionSpec dist = cfg.distributions[task.dist_i];
      const Formulation form = cfg.formulations[task.form_i];
      const auto [m, k] = grid[task.cell_i];
      CellResult cell;
      cell.distribution = dist.kind;
      cell.formulation = form;
      cell.n = cfg.n;
      cell.m = m;
      cell.k = k;
      cell.trials = cfg.trials_per_cell;
      try {
        for (int rep = 0; rep < cfg.trials_per_cell; ++rep) {
          const std::uint64_t seed =
              derive_seed(cfg.base_seed,
                          {task.dist_i, task.form_i, static_cast<std::uint64_t>(m),
                           static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(rep)});
          if (run_repetition(form, dist, m, cfg.n, k, seed, cfg.tolerance,
                             cfg.couple_supports, settings))
            ++cell.successes;
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
        cell.successes = 0;
      }
      results[t] = std::move(cell);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(results.begin(), results.end(), [](const CellResult& a, const CellResult& b) {
    return std::tuple(static_cast<int>(a.distribution), static_cast<int>(a.formulation),
                      a.k, a.m) <
           std::tuple(static_cast<int>(b.distribution), static_cast<int>(b.formulation),
                      b.k, b.m);
  });
  return results;
}

struct LevelSetPoint {
  double abscissa = 0.0;
  double ordinate = 0.0;
  bool non_monotone = false;  // the rate slice crossed the target more than once
};

struct LevelSet {
  double target_rate = 0.5;
  std::vector<LevelSetPoint> points;
};

/// For each abscissa gridline of one (formulation, distribution) slice,
/// linearly interpolates the ordinate where the rate crosses the target.
/// RhoDelta plots (delta, rho); EtaDelta plots (eta, delta).
inline LevelSet level_set(const std::vector<CellResult>& cells, double target_rate,
                          SweepMode mode) {
  LevelSet ls;
  ls.target_rate = target_rate;
  // Group by the abscissa-defining integer coordinate.
  std::vector<CellResult> sorted = cells;
  auto absc_key = [&](const CellResult& c) { return mode == SweepMode::RhoDelta ? c.m : c.k; };
  auto ord_val = [&](const CellResult& c) { return mode == SweepMode::RhoDelta ? c.rho() : c.delta(); };
  auto absc_val = [&](const CellResult& c) { return mode == SweepMode::RhoDelta ? c.delta() : c.eta(); };
  std::sort(sorted.begin(), sorted.end(), [&](const CellResult& a, const CellResult& b) {
    if (absc_key(a) != absc_key(b)) return absc_key(a) < absc_key(b);
    return ord_val(a) < ord_val(b);
  });

  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && absc_key(sorted[j]) == absc_key(sorted[i])) ++j;
    int crossings = 0;
    std::optional<LevelSetPoint> pt;
    for (std::size_t a = i; a + 1 < j; ++a) {
      const double r0 = sorted[a].rate();
      const double r1 = sorted[a + 1].rate();
      if ((r0 - target_rate) * (r1 - target_rate) <= 0.0 && r0 != r1) {
        ++crossings;
        if (!pt) {
          const double t = (target_rate - r0) / (r1 - r0);
          pt = LevelSetPoint{absc_val(sorted[a]),
                             ord_val(sorted[a]) + t * (ord_val(sorted[a + 1]) - ord_val(sorted[a])),
                             false};
        }
      }
    }
    if (pt) {
      pt->non_monotone = crossings > 1;
      ls.points.push_back(*pt);
    }
    i = j;
  }
  std::sort(ls.points.begin(), ls.points.end(),
            [](const LevelSetPoint& a, const LevelSetPoint& b) { return a.abscissa < b.abscissa; });
  return ls;
}

/// The 0.5 level set of an EtaDelta sweep: one (eta, delta*) per eta gridline.
inline std::vector<std::pair<double, double>> transition_points(
    const std::vector<CellResult>& cells) {
  const LevelSet ls = level_set(cells, 0.5, SweepMode::EtaDelta);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(ls.points.size());
  for (const auto& p : ls.points) pts.emplace_back(p.abscissa, p.ordinate);
  return pts;
}

struct FitRow {
  double eta = 0.0;
  std::optional<double> delta_star;  // empty when the slice never crosses 0.5
  double conjecture = 0.0;           // H(eta)/2
  std::optional<double> deviation;
};

struct FitReport {
  std::vector<FitRow> rows;
  double max_abs_deviation = 0.0;
  double mean_abs_deviation = 0.0;
  int gap_count = 0;
};

/// Pairs each eta gridline's empirical transition point with H(eta)/2.
inline FitReport fit_report(const std::vector<CellResult>& cells) {
  FitReport rep;
  // All eta gridlines present in the slice, crossing or not.
  std::vector<int> ks;
  int n = 0;
  for (const CellResult& c : cells) {
    ks.push_back(c.k);
    n = c.n;
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  const auto pts = transition_points(cells);

  double sum = 0.0;
  int count = 0;
  for (int k : ks) {
    FitRow row;
    row.eta = static_cast<double>(k) / n;
    row.conjecture = conjecture_curve(row.eta);
    for (const auto& [eta, dstar] : pts) {
      if (std::abs(eta - row.eta) < 1e-12) {
        row.delta_star = dstar;
        row.deviation = dstar - row.conjecture;
        break;
      }
    }
    if (row.deviation) {
      rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(*row.deviation));
      sum += std::abs(*row.deviation);
      ++count;
    } else {
      ++rep.gap_count;
    }
    rep.rows.push_back(row);
  }
  rep.mean_abs_deviation = count > 0 ? sum / count : 0.0;
  return rep;
}

}  // namespace binrec
