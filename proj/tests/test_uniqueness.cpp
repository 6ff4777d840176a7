#include <catch2/catch_amalgamated.hpp>

#include "binrec/random.hpp"
#include "binrec/uniqueness.hpp"

using namespace binrec;
using Catch::Approx;

namespace {

// Direct 1-D oracle: interval disjointness of {A_j : j off support} u {0}
// and {A_j : j on support}.
bool one_d_unique(const Matrix& a, const SparseBinarySignal& truth) {
  double max0 = 0.0, min0 = 0.0, max1 = -kInf, min1 = kInf;
  const Partition part = Partition::of(truth);
  for (int j : part.zero_set) {
    max0 = std::max(max0, a(0, j));
    min0 = std::min(min0, a(0, j));
  }
  for (int j : part.one_set) {
    max1 = std::max(max1, a(0, j));
    min1 = std::min(min1, a(0, j));
  }
  return max0 < min1 || max1 < min0;
}

std::vector<Vector> side_points(const Matrix& a, const std::vector<int>& idx, bool origin) {
  std::vector<Vector> pts;
  for (int j : idx) pts.push_back(a.column(j));
  if (origin) pts.push_back(Vector(a.rows(), 0.0));
  return pts;
}

void check_result_validates(const Matrix& a, const SparseBinarySignal& truth,
                            const UniquenessResult& res) {
  const Partition part = Partition::of(truth);
  const auto low = side_points(a, part.zero_set, true);
  const auto high = side_points(a, part.one_set, false);
  if (res.unique) {
    REQUIRE(res.certificate);
    CHECK(res.certificate->validates(low, high, 1e-9 * (1.0 + a.max_abs())));
  } else {
    REQUIRE(res.witness);
    CHECK(res.witness->validates(low, high, 1e-7 * (1.0 + a.max_abs())));
  }
}

}  // namespace

TEST_CASE("1-D interval disjointness gives a certificate") {
  const Matrix a(1, 3, {1.0, 2.0, 4.0});
  const SparseBinarySignal truth(3, {2});
  const UniquenessResult res = is_unique_solution(a, truth);
  REQUIRE(res.unique);
  check_result_validates(a, truth, res);
  // The stated hand certificate (w=1, gamma=3, margin=1) also validates.
  const SeparationCertificate hand{{1.0}, 3.0, 1.0};
  CHECK(hand.validates(side_points(a, {0, 1}, true), side_points(a, {2}, false)));
}

TEST_CASE("duplicate columns are never unique") {
  const Matrix a(1, 2, {1.0, 1.0});
  const SparseBinarySignal truth(2, {0});
  const UniquenessResult res = is_unique_solution(a, truth);
  REQUIRE_FALSE(res.unique);
  check_result_validates(a, truth, res);
  // mass sits on the duplicated column on both sides
  CHECK(res.witness->alpha_high[0] == Approx(1.0).margin(1e-9));
}

TEST_CASE("identity columns with full support are unique") {
  const Matrix a = Matrix::identity(2);
  const SparseBinarySignal truth(2, {0, 1});
  const UniquenessResult res = is_unique_solution(a, truth);
  REQUIRE(res.unique);
  check_result_validates(a, truth, res);
  const SeparationCertificate hand{{1.0, 1.0}, 0.5, 0.4};
  CHECK(hand.validates({{0.0, 0.0}}, {{1.0, 0.0}, {0.0, 1.0}}));
}

TEST_CASE("generic checker matches the specialized certificate on stated data") {
  CHECK(mangasarian_unique_l1_box(Matrix(1, 3, {1.0, 2.0, 4.0}), SparseBinarySignal(3, {2})));
  CHECK_FALSE(mangasarian_unique_l1_box(Matrix(1, 2, {1.0, 1.0}), SparseBinarySignal(2, {0})));
}

TEST_CASE("full-rank equality system is trivially unique") {
  // Gz = 0 forces z = 0 regardless of P and c.
  const Matrix g = Matrix::identity(2);
  const Vector xbar = {0.5, 0.25};
  Matrix p(1, 2);
  p(0, 0) = 1.0;
  CHECK(mangasarian_unique(g, xbar, p, {-10.0}, {1.0, 1.0}, xbar));
}

TEST_CASE("generic checker rejects an infeasible point") {
  const Matrix g = Matrix::identity(2);
  Matrix p(1, 2);
  p(0, 0) = 1.0;
  CHECK_THROWS_AS(mangasarian_unique(g, {1.0, 1.0}, p, {-10.0}, {1.0, 1.0}, {0.0, 0.0}),
                  InputError);
}

TEST_CASE("optimal-face oracle on stated instances") {
  CHECK(optimal_face_unique(Matrix(1, 3, {1.0, 2.0, 4.0}), {4.0}));
  CHECK_FALSE(optimal_face_unique(Matrix(1, 2, {1.0, 1.0}), {1.0}));
  CHECK(optimal_face_unique(Matrix::identity(2), {1.0, 0.0}));
}

TEST_CASE("1-D verdicts equal the closed-form interval test") {
  const DistributionSpec dist{DistributionKind::D1};
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 6;
    const Matrix a = sample_matrix(dist, 1, n, derive_seed(70, {(std::uint64_t)t}));
    const int k = 1 + t % n;
    const SparseBinarySignal truth = sample_signal(n, k, derive_seed(71, {(std::uint64_t)t}));
    CHECK(is_unique_solution(a, truth).unique == one_d_unique(a, truth));
  }
}

TEST_CASE("three-way agreement on random small instances") {
  const DistributionSpec dist{DistributionKind::D1};
  for (int t = 0; t < 80; ++t) {
    Rng pick(derive_seed(80, {(std::uint64_t)t}));
    const int m = 1 + static_cast<int>(pick.next_below(3));
    const int n = 4 + static_cast<int>(pick.next_below(5));
    const int k = 1 + static_cast<int>(pick.next_below(n));
    const Matrix a = sample_matrix(dist, m, n, derive_seed(81, {(std::uint64_t)t}));
    const SparseBinarySignal truth = sample_signal(n, k, derive_seed(82, {(std::uint64_t)t}));
    const UniquenessResult res = is_unique_solution(a, truth);
    check_result_validates(a, truth, res);
    CHECK(res.unique == mangasarian_unique_l1_box(a, truth));
    CHECK(res.unique == optimal_face_unique_for(a, truth));
  }
}

TEST_CASE("unique verdicts imply successful box l1 recovery") {
  const DistributionSpec dist{DistributionKind::D1};
  int unique_seen = 0;
  for (int t = 0; t < 60; ++t) {
    const int m = 3, n = 6;
    const Matrix a = sample_matrix(dist, m, n, derive_seed(90, {(std::uint64_t)t}));
    const SparseBinarySignal truth = sample_signal(n, 1 + t % 3, derive_seed(91, {(std::uint64_t)t}));
    if (is_unique_solution(a, truth).unique) {
      ++unique_seen;
      const RecoveryResult res = recover_l1_box(a, matvec(a, truth.to_vector()));
      REQUIRE(res.status == LpStatus::Optimal);
      CHECK(check_success(res.x_hat, truth));
    }
  }
  CHECK(unique_seen > 5);
}

TEST_CASE("full column rank makes every support unique") {
  const DistributionSpec dist{DistributionKind::D1};
  for (int t = 0; t < 10; ++t) {
    const int n = 5;
    const Matrix a = sample_matrix(dist, n + 2, n, derive_seed(95, {(std::uint64_t)t}));
    for (int k = 1; k <= n; ++k) {
      const SparseBinarySignal truth = sample_signal(n, k, derive_seed(96, {(std::uint64_t)t, (std::uint64_t)k}));
      CHECK(is_unique_solution(a, truth).unique);
    }
  }
}
