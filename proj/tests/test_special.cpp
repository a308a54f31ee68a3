#include "conereg/errors.hpp"
#include "conereg/special.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace conereg;
using namespace conereg::special;

namespace {

std::vector<double> grid(double lo, double hi, int n)
{
  std::vector<double> v;
  for (int k = 0; k < n; ++k)
    v.push_back(lo + (hi - lo) * k / (n - 1));
  return v;
}

} // namespace

TEST_CASE("value at z = 1 is one for every degree")
{
  for (double a : grid(0.0, 3.0, 50))
    CHECK(std::abs(legendre_p(a, 1.0) - 1.0) <= 1e-12);
}

TEST_CASE("integer degrees reproduce the polynomials")
{
  for (double z : grid(-0.9, 1.0, 77)) {
    CHECK(std::abs(legendre_p(0, z) - 1.0) <= 1e-12);
    CHECK(std::abs(legendre_p(1, z) - z) <= 1e-12);
    CHECK(std::abs(legendre_p(2, z) - 0.5 * (3 * z * z - 1)) <= 1e-12);
    CHECK(std::abs(legendre_p(3, z) - 0.5 * (5 * z * z * z - 3 * z)) <= 1e-12);
  }
}

TEST_CASE("three-term recurrence in the degree")
{
  double worst = 0.0;
  for (double a : grid(0.1, 2.0, 39))
    for (double z : grid(-0.9, 1.0, 39))
      worst = std::max(worst, std::abs((a + 1) * legendre_p(a + 1, z) -
                                       (2 * a + 1) * z * legendre_p(a, z) +
                                       a * legendre_p(a - 1, z)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("series agrees with the integral representations")
{
  for (double a : {0.25, 0.5, 0.75}) {
    for (double z : grid(-0.9, 1.0, 39))
      CHECK(std::abs(legendre_p(a, z) - oracle::legendre_mehler(a, z)) <= 1e-9);
    for (double z : grid(0.2, 1.0, 17))
      CHECK(std::abs(legendre_p(a, z) - oracle::legendre_laplace(a, z)) <= 1e-9);
  }
  // mpmath reference, 30 digits
  CHECK(legendre_p(0.5, 0.0) == doctest::Approx(0.539352601188379356667935722356).epsilon(1e-14));
}

TEST_CASE("z-derivative matches Richardson differences")
{
  for (double a : {0.2, 0.5, 0.85, 1.7})
    for (double z : grid(-0.85, 0.95, 13)) {
      const double fd = oracle::derivative([&](double x) { return legendre_p(a, x); }, z, 1e-3);
      const double exact = legendre_dp_dz(a, z);
      CHECK(std::abs(exact - fd) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
  CHECK(legendre_dp_dz(0.5, 0.2) == doctest::Approx(0.521652339178191195461727684038).epsilon(1e-13));
}

TEST_CASE("associated function of order one")
{
  for (double a : {0.3, 0.9, 1.4})
    for (double z : grid(-0.9, 0.95, 11)) {
      const double expected = -std::sqrt(1 - z * z) * legendre_dp_dz(a, z);
      CHECK(legendre_p1(a, z) == doctest::Approx(expected).epsilon(1e-12));
    }
  for (double z : grid(-0.9, 0.95, 11))
    CHECK(legendre_p1(1.0, z) == doctest::Approx(-std::sqrt(1 - z * z)).epsilon(1e-12));
  CHECK(legendre_p1(0.7, 1.0) == 0.0);
}

TEST_CASE("degree derivative")
{
  CHECK(std::abs(legendre_dp_dalpha(1.0, 1.0, 1e-5)) <= 1e-12);
  for (double z : grid(-0.9, 0.95, 20)) {
    const double lhs = legendre_dp_dalpha(1.0, z) - z * legendre_dp_dalpha(0.0, z);
    CHECK(std::abs(lhs - (z - 1.0)) <= 1e-5);
  }
  const double coarse = legendre_dp_dalpha(0.5, 0.5, 1e-4);
  const double fine = legendre_dp_dalpha(0.5, 0.5, 1e-5);
  CHECK(std::abs(coarse - fine) <= 1e-8);
}

TEST_CASE("domain errors")
{
  CHECK_THROWS_AS(legendre_p(0.5, -0.9995), DomainError);
  CHECK_THROWS_AS(legendre_p(0.5, 1.01), DomainError);
  CHECK_THROWS_AS(legendre_p(-1.5, 0.2), DomainError);
  CHECK_THROWS_AS(legendre_p(std::nan(""), 0.2), DomainError);
  CHECK_THROWS_AS(legendre_dp_dz(0.5, 1.0), DomainError);
  CHECK_NOTHROW(legendre_p(0.5, -1.0 + 1.01e-3));
  CHECK(legendre_p(-1.0, 0.3) == doctest::Approx(1.0));
}
