#include <doctest.h>

#include <cmath>
#include <random>

#include "gp/error.hpp"
#include "gp/parallel.hpp"
#include "gp/polynomial.hpp"
#include "gp/weyl.hpp"

using namespace gp;

namespace {

// Companion of Phi_3 Phi_5 = x^6 + 2x^5 + 3x^4 + 3x^3 + 3x^2 + 2x + 1 over Z.
std::vector<i64> mu_companion_lift() {
  const IntPolynomial mu = cyclotomic(3) * cyclotomic(5);
  std::vector<i64> lift(36, 0);
  for (int i = 0; i < 6; ++i) {
    lift[i * 6 + 5] = -mu[static_cast<std::size_t>(i)];
    if (i > 0) lift[i * 6 + i - 1] = 1;
  }
  return lift;
}

WeylInstance random_instance(std::mt19937_64& rng, u64 n, std::size_t m, std::size_t s) {
  for (;;) {
    std::vector<i64> e(m * m);
    for (auto& x : e) x = static_cast<i64>(rng() % n);
    if (!MatrixModN(m, n, e).det_unit()) continue;
    std::vector<i64> v(s);
    bool zero = true;
    for (auto& x : v) {
      x = static_cast<i64>(rng() % 7) - 3;
      zero = zero && x == 0;
    }
    if (zero) v[0] = 1;
    return WeylInstance(n, m, e, v);
  }
}

void check_agreement(const WeylInstance& inst) {
  const double exact = static_cast<double>(weyl_sum_exact(inst));
  const auto num = weyl_sum_numeric(inst);
  REQUIRE(std::abs(num.real() - exact) < 1e-4);
  REQUIRE(std::abs(num.imag()) < 1e-4);
}

LambdaSet equispaced(u64 n) {
  std::vector<u64> nums(n);
  for (u64 k = 0; k < n; ++k) nums[k] = k;
  return LambdaSet(n, 1, nums);
}

}  // namespace

TEST_CASE("alpha vector examples") {
  CHECK(alpha_vector(WeylInstance(MatrixModN(3, 11, {1, 2, 3, 4, 5, 6, 7, 8, 10}), {1, 0, 0})) ==
        std::vector<i64>{1, 1, 1});
  CHECK(alpha_vector(WeylInstance(7, 1, {2}, {0, 1})) == std::vector<i64>{2});
  const WeylInstance mu(4, 6, mu_companion_lift(), {1, 1, 1, 1, 1, 0});
  CHECK(alpha_vector(mu) == std::vector<i64>(6, 0));
}

TEST_CASE("alpha vector is linear in v") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + rng() % 3, s = 1 + rng() % 5;
    std::vector<i64> lift(m * m), v(s), w(s), vw(s);
    for (auto& x : lift) x = static_cast<i64>(rng() % 21) - 10;
    for (std::size_t j = 0; j < s; ++j) {
      v[j] = static_cast<i64>(rng() % 11) - 5;
      w[j] = static_cast<i64>(rng() % 11) - 5;
      vw[j] = v[j] + w[j];
    }
    if (v == std::vector<i64>(s, 0)) v[0] = 1, vw[0] = v[0] + w[0];
    if (w == std::vector<i64>(s, 0)) w[0] = 1, vw[0] = v[0] + w[0];
    if (vw == std::vector<i64>(s, 0)) continue;
    // A large prime modulus keeps most lifts invertible; the rest are skipped.
    try {
      const auto a = alpha_vector(WeylInstance(1000003, m, lift, v));
      const auto b = alpha_vector(WeylInstance(1000003, m, lift, w));
      const auto c = alpha_vector(WeylInstance(1000003, m, lift, vw));
      for (std::size_t l = 0; l < m; ++l) REQUIRE(c[l] == a[l] + b[l]);
    } catch (const Error& e) {
      REQUIRE(e.code() == Errc::NotInvertible);
    }
  }
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(WeylInstance(7, 1, {2}, {0, 0}), Error);
  CHECK_THROWS_AS(WeylInstance(6, 1, {2}, {1}), Error);
  CHECK_THROWS_AS(WeylInstance(7, 2, {2}, {1}), Error);
}

TEST_CASE("exact Weyl sums") {
  for (u64 n : {4ULL, 7ULL, 9ULL}) {
    const WeylInstance mu(n, 6, mu_companion_lift(), {1, 1, 1, 1, 1, 0});
    CHECK(weyl_sum_exact(mu) == n * n * n * n * n * n);
  }
  CHECK(weyl_sum_exact(WeylInstance(7, 1, {2}, {0, 1})) == 0);
  CHECK(weyl_sum_exact(WeylInstance(2, 1, {1}, {2})) == 2);
}

TEST_CASE("numeric Weyl sums") {
  CHECK(std::abs(weyl_sum_numeric(WeylInstance(7, 1, {2}, {0, 1}))) < 1e-6);
  const WeylInstance mu(4, 6, mu_companion_lift(), {1, 1, 1, 1, 1, 0});
  CHECK(std::abs(weyl_sum_numeric(mu) - 4096.0) < 1e-4);
  try {
    weyl_sum_numeric(WeylInstance(9, 6, mu_companion_lift(), {1, 0}), 1000);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BudgetExceeded);
    CHECK(e.required() == 531441);
  }
}

TEST_CASE("exact and numeric sums agree on small cases") {
  std::mt19937_64 rng(17);
  int cases = 0;
  for (u64 n = 2; n <= 12; ++n)
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t s = 1; s <= 4; ++s)
        for (int rep = 0; rep < 3; ++rep, ++cases) check_agreement(random_instance(rng, n, m, s));
  for (int t = 0; t < 60; ++t, ++cases) {
    const u64 n = 13 + rng() % 38;
    check_agreement(random_instance(rng, n, 1 + rng() % 2, 1 + rng() % 4));
  }
  CHECK(cases == 11 * 3 * 4 * 3 + 60);
}

TEST_CASE("numeric sum does not depend on the worker count") {
  const WeylInstance inst(MatrixModN(2, 997, {3, 5, 7, 11}), {1, 2, -1});
  set_worker_count(1);
  const auto a = weyl_sum_numeric(inst);
  set_worker_count(3);
  const auto b = weyl_sum_numeric(inst);
  set_worker_count(0);
  CHECK(a == b);
}

TEST_CASE("Phi_3 roots give vanishing sums for large n") {
  // v = (v0, v1) against a root of Phi_3 mod n: alpha = v0 + v1 a, nonzero
  // and smaller than n for these n, so the sum always vanishes.
  for (u64 n : {1009ULL, 1801ULL, 4219ULL, 10009ULL}) {
    u64 root = 0;
    for (u64 a = 2; a < n; ++a)
      if ((mulmod(a, a, n) + a + 1) % n == 0) {
        root = a;
        break;
      }
    REQUIRE(root != 0);
    for (std::vector<i64> v : {std::vector<i64>{1, 1}, {2, -1}, {0, 3}, {5, 4}})
      CHECK(weyl_sum_exact(WeylInstance(n, 1, {static_cast<i64>(root)}, v)) == 0);
  }
}

TEST_CASE("build_lambda") {
  const auto l2 = build_lambda(MatrixModN(1, 2, {1}), 1);
  REQUIRE(l2.size() == 2);
  CHECK(l2.coord(0, 0) == 0.0);
  CHECK(l2.coord(1, 0) == 0.5);

  const auto l7 = build_lambda(MatrixModN(1, 7, {2}), 2);
  REQUIRE(l7.size() == 7);
  for (u64 k = 0; k < 7; ++k) {
    CHECK(l7.numerator(k, 0) == k);
    CHECK(l7.numerator(k, 1) == 2 * k % 7);
  }
  CHECK(build_lambda(MatrixModN(2, 13, {1, 2, 3, 4}), 3).size() == 169);
  CHECK_THROWS_AS(build_lambda(MatrixModN(3, 100, {1, 0, 0, 0, 1, 0, 0, 0, 1}), 1, 1000), Error);
}

TEST_CASE("discrepancy of simple sets") {
  const LambdaSet origin(5, 1, {0});
  CHECK(discrepancy_estimate(origin, 2) >= 0.5);
  for (u64 n : {10ULL, 37ULL, 64ULL, 100ULL}) {
    const double est = discrepancy_estimate(equispaced(n), n);
    CHECK(est <= 1.0 / n + 1.0 / n + 1e-15);
  }
  CHECK_THROWS_AS(discrepancy_estimate(origin, 1), Error);
  CHECK_THROWS_AS(discrepancy_estimate(LambdaSet(5, 1, {}), 4), Error);
}

TEST_CASE("discrepancy against direct evaluation") {
  // Values from a direct O(g^4 N) evaluation over all grid boxes.
  struct Case {
    u64 p, omega;
    double value;
  };
  const Case cases[] = {
      {7, 2, 0.3405412946428571},     {7, 4, 0.3405412946428571},
      {13, 3, 0.21138822115384615},   {61, 13, 0.053526831454918045},
      {151, 32, 0.021442337541390744}, {541, 129, 0.008211428488909434},
      {541, 411, 0.008211428488909434},
  };
  for (const auto& c : cases)
    CHECK(discrepancy_estimate(build_lambda(MatrixModN(1, c.p, {static_cast<i64>(c.omega)}), 2), 64) ==
          doctest::Approx(c.value).epsilon(1e-12));
  const auto l7 = build_lambda(MatrixModN(1, 7, {2}), 2);
  CHECK(discrepancy_estimate(l7, 8) == doctest::Approx(0.2946428571428571).epsilon(1e-12));
  CHECK(discrepancy_estimate(l7, 16) == doctest::Approx(0.2946428571428571).epsilon(1e-12));
}

TEST_CASE("discrepancy grows under grid refinement") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const u64 p = 11 + rng() % 90;
    const auto set = build_lambda(MatrixModN(1, p, {static_cast<i64>(1 + rng() % (p - 1))}), 2);
    double prev = 0;
    for (u64 g : {2ULL, 4ULL, 8ULL, 16ULL, 32ULL}) {
      const double est = discrepancy_estimate(set, g);
      REQUIRE(est >= prev - 1e-15);
      prev = est;
    }
  }
}

TEST_CASE("sampled discrepancy in higher dimension is seeded") {
  const auto set = build_lambda(MatrixModN(2, 31, {0, 1, 30, 30}), 3);
  const double a = discrepancy_estimate(set, 16, {7, 20000});
  const double b = discrepancy_estimate(set, 16, {7, 20000});
  CHECK(a == b);
  CHECK(a > 0);
  CHECK(a <= 1);
}
