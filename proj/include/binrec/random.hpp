#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "binrec/core.hpp"
#include "binrec/recovery.hpp"

namespace binrec {

enum class DistributionKind { D1, D2, D3, D4 };

/// D1: N(0,1) entries. D2: N(100,1). D3: U(0,100). D4: per-column mean
/// mu_j ~ U(0,100), entries N(mu_j, 1).
struct DistributionSpec {
  DistributionKind kind = DistributionKind::D1;
};

inline const char* distribution_name(DistributionKind k) {
  switch (k) {
    case DistributionKind::D1: return "D1";
    case DistributionKind::D2: return "D2";
    case DistributionKind::D3: return "D3";
    case DistributionKind::D4: return "D4";
  }
  return "?";
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

/// Order-sensitive seed derivation: base seed folded with each path element
/// through the SplitMix64 finalizer. Fixed-width arithmetic only.
inline std::uint64_t derive_seed(std::uint64_t base, const std::vector<std::uint64_t>& path) {
  std::uint64_t h = detail::mix64(base + 0x9E3779B97F4A7C15ULL);
  std::uint64_t pos = 1;
  for (std::uint64_t e : path) {
    h = detail::mix64(h ^ detail::mix64(e + pos * 0x9E3779B97F4A7C15ULL));
    ++pos;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  return derive_seed(base, std::vector<std::uint64_t>(path));
}

/// SplitMix64 stream with a Box-Muller normal transform. Both Box-Muller
/// branches are consumed in fixed order, so output is platform-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return detail::mix64(state_);
  }

  /// Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0ULL - bound) % bound;
    while (true) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_double();
    const double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// Draws an m x n matrix, column by column. For D4 the column mean is drawn
/// before the column's entries.
inline Matrix sample_matrix(const DistributionSpec& spec, int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InputError("sample_matrix: dimensions must be >= 1");
  Rng rng(seed);
  Matrix a(m, n);
  for (int j = 0; j < n; ++j) {
    double mu = 0.0;
    switch (spec.kind) {
      case DistributionKind::D1: mu = 0.0; break;
      case DistributionKind::D2: mu = 100.0; break;
      case DistributionKind::D3: mu = 0.0; break;
      case DistributionKind::D4: mu = 100.0 * rng.next_double(); break;
    }
    for (int i = 0; i < m; ++i) {
      if (spec.kind == DistributionKind::D3)
        a(i, j) = 100.0 * rng.next_double();
      else
        a(i, j) = mu + rng.normal();
    }
  }
  return a;
}

/// Uniformly random size-k support via partial Fisher-Yates.
inline SparseBinarySignal sample_signal(int n, int k, std::uint64_t seed) {
  if (k < 1 || k > n) throw InputError("sample_signal: k out of range [1, n]");
  Rng rng(seed);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return SparseBinarySignal(n, std::move(idx));
}

}  // namespace binrec
