#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gp/laurent.hpp"
#include "gp/modring.hpp"
#include "gp/periods.hpp"
#include "gp/polynomial.hpp"

using namespace gp;

namespace {

// Inside test for the deltoid with cusps at 3 e(j/3), from its implicit
// equation (x^2 + y^2)^2 + 18 (x^2 + y^2) - 27 = 8 (x^3 - 3 x y^2).
double deltoid_level(cplx z) {
  const double r2 = std::norm(z);
  return r2 * r2 + 18 * r2 - 27 - 8 * (z * z * z).real();
}

}  // namespace

TEST_CASE("reduction tables") {
  const ReductionTable t3(cyclotomic(3), 3);
  CHECK(t3.degree() == 2);
  CHECK(t3(0, 0) == 1);
  CHECK(t3(1, 0) == 0);
  CHECK(t3(0, 1) == 0);
  CHECK(t3(1, 1) == 1);
  CHECK(t3(0, 2) == -1);
  CHECK(t3(1, 2) == -1);

  const ReductionTable t1(cyclotomic(1), 1);
  CHECK(t1.degree() == 1);
  CHECK(t1(0, 0) == 1);

  const IntPolynomial mu = cyclotomic(3) * cyclotomic(5);
  const ReductionTable t15(mu, 15);
  CHECK(t15.degree() == 6);
  for (std::size_t k = 0; k < 15; ++k) {
    std::vector<std::int64_t> col(6);
    for (std::size_t j = 0; j < 6; ++j) col[j] = t15(j, k);
    REQUIRE(IntPolynomial(col) == IntPolynomial::monomial(k).divmod(mu).second);
  }
  CHECK_THROWS_AS(ReductionTable(IntPolynomial({1, 0, 2}), 4), Error);
  CHECK_THROWS_AS(ReductionTable(cyclotomic(5), 6), Error);
}

TEST_CASE("reduction tables reconstruct x^k for many d") {
  for (u64 d = 1; d <= 40; ++d) {
    const ReductionTable t(cyclotomic(d), d);
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<std::int64_t> col(t.degree());
      for (std::size_t j = 0; j < t.degree(); ++j) col[j] = t(j, k);
      REQUIRE(IntPolynomial(col) == IntPolynomial::monomial(k).divmod(cyclotomic(d)).second);
    }
  }
}

TEST_CASE("eval_g") {
  for (u64 d = 1; d <= 50; ++d) {
    const ReductionTable t(cyclotomic(d), d);
    const cplx v = eval_g(t, TorusPoint(std::vector<cplx>(t.degree(), 1.0)));
    REQUIRE(std::abs(v - static_cast<double>(d)) < 1e-9);
  }
  const ReductionTable t3(cyclotomic(3), 3);
  const cplx z3 = unit_root(1, 3);
  CHECK(std::abs(eval_g(t3, TorusPoint({z3, z3 * z3}))) < 1e-12);

  const ReductionTable t5(cyclotomic(5), 5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    std::vector<cplx> z(4);
    cplx prod = 1.0, sum = 0.0;
    for (auto& c : z) {
      c = unit_root(u(rng));
      prod *= c;
      sum += c;
    }
    REQUIRE(std::abs(eval_g(t5, TorusPoint(z)) - (sum + 1.0 / prod)) < 1e-12);
  }
}

TEST_CASE("sample_image containment") {
  const ReductionTable t3(cyclotomic(3), 3);
  const auto pts = sample_image(t3, 200, 7);
  CHECK(pts.size() == 40000);
  for (cplx z : pts) REQUIRE(deltoid_level(z) <= 1e-9);

  const ReductionTable t2(cyclotomic(2), 2);
  for (cplx z : sample_image(t2, 64, 1)) {
    REQUIRE(std::abs(z.imag()) < 1e-12);
    REQUIRE(std::abs(z.real()) <= 2 + 1e-12);
  }

  const ReductionTable t1(IntPolynomial({-1, 1}), 1);
  const auto circle = sample_image(t1, 4, 1);
  CHECK(circle.size() == 4);
  for (cplx z : circle) CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);

  const ReductionTable t5(cyclotomic(5), 5);
  const Hypocycloid h5(5);
  for (cplx z : sample_image(t5, 12, 2)) {
    REQUIRE(std::abs(z) <= 5 + 1e-9);
    REQUIRE(h5.contains(z, 1e-9));
  }
}

TEST_CASE("sample_image is seeded") {
  const ReductionTable t(cyclotomic(7), 7);
  CHECK(sample_image(t, 5, 9) == sample_image(t, 5, 9));
  CHECK(sample_image(t, 5, 9) != sample_image(t, 5, 10));
}

TEST_CASE("hypocycloid boundary and membership") {
  CHECK(std::abs(hypocycloid_boundary(3, 0) - 3.0) < 1e-15);
  for (double th : {0.1, 1.0, 2.5}) CHECK(std::abs(hypocycloid_boundary(2, th) - 2 * std::cos(th)) < 1e-15);
  const double th = 2 * std::numbers::pi / 5;
  CHECK(std::abs(hypocycloid_boundary(5, th) - 5.0 * unit_root(0.2)) < 1e-12);

  const Hypocycloid h3(3);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.2, 3.2);
  for (int i = 0; i < 2000; ++i) {
    const cplx z(u(rng), u(rng));
    const double level = deltoid_level(z);
    if (std::abs(level) < 1e-2) continue;
    REQUIRE(h3.contains(z, 1e-9) == (level < 0));
  }
}

TEST_CASE("hypocycloid decomposition") {
  const auto r0 = hypocycloid_decompose(cplx(3, 0), 7, 0, 3, 1e-9);
  CHECK(std::abs(r0.h - 2.0) < 1e-12);
  CHECK(r0.inside);

  const cplx eta(-0.5, std::sqrt(7.0) / 2);
  const auto r1 = hypocycloid_decompose(eta, 7, 1, 3, 1e-9);
  CHECK(std::abs(r1.h.imag()) < 1e-12);
  CHECK(r1.h.real() == doctest::Approx(-1.246979603717467).epsilon(1e-12));
  CHECK(r1.inside);
  CHECK_THROWS_AS(hypocycloid_decompose(eta, 7, 1, 4, 1e-9), Error);
}

TEST_CASE("the decomposition holds for every k on prime-power moduli up to 5000") {
  int instances = 0;
  std::mt19937_64 rng(17);
  for (u64 p = 3; p <= 5000; ++p) {
    if (!is_prime(p)) continue;
    for (u64 n = p; n <= 5000; n *= p) {
      const u64 phi = euler_phi(n);
      for (u64 d = 2; d < p; ++d) {
        if (!is_prime(d) || (p - 1) % d != 0) continue;
        u64 omega = 0;
        while (!omega) {
          const u64 a = 1 + rng() % (n - 1);
          if (gcd_u64(a, n) != 1) continue;
          const u64 w = powmod(a, phi / d, n);
          if (mul_order(Residue(static_cast<i64>(w), n)) == d) omega = w;
        }
        const PeriodSpec spec(n, omega);
        const Hypocycloid h(d - 1);
        for (const auto& pt : gaussian_plot(spec).points)
          REQUIRE(hypocycloid_decompose(pt.value, n, pt.index, h, d == 3 ? 1e-9 : 1e-6).inside);
        ++instances;
      }
    }
  }
  CHECK(instances > 1000);
}
