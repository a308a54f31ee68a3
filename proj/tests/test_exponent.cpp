#include "conereg/errors.hpp"
#include "conereg/exponent.hpp"
#include "conereg/special.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace conereg;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<std::pair<double, double>> admissible_grid(int n)
{
  std::vector<std::pair<double, double>> cells;
  for (int a = 0; a < n; ++a) {
    const double t0 = 0.2 + 2.7 * a / (n - 1);
    for (int b = 0; b < n; ++b)
      cells.emplace_back(t0, -pi + t0 + pi * (b + 0.5) / n);
  }
  return cells;
}

} // namespace

TEST_CASE("geometry validation")
{
  CHECK_THROWS_AS(ConeGeometry(0.0), DomainError);
  CHECK_THROWS_AS(ConeGeometry(pi - 0.01), DomainError);
  CHECK_THROWS_AS(ConeGeometry(1.0, -1.0), DomainError);
  const ConeGeometry g(2.0);
  CHECK(g.admits(1.0));
  CHECK_FALSE(g.admits(2.0));
  CHECK_FALSE(g.admits(-pi + 2.0));
  CHECK_THROWS_AS(ObliqueBC(g, 2.5), DomainError);
  const ObliqueBC bc(g, 0.3);
  CHECK(bc.obliqueness() == doctest::Approx(std::sin(2.0 - 0.3)).epsilon(1e-15));
  CHECK(dot(g.inward_normal(), g.tangent()) == doctest::Approx(0.0));
}

TEST_CASE("mismatch endpoint identities and slope at zero")
{
  for (auto [t0, s] : admissible_grid(20)) {
    const ConeGeometry g(t0);
    CHECK(std::abs(boundary_mismatch(g, 0.0, s)) <= 1e-12);
    CHECK(std::abs(boundary_mismatch(g, 1.0, s) - std::cos(s)) <= 1e-10);
    const double fd = (boundary_mismatch(g, 1e-5, s) - boundary_mismatch(g, 0.0, s)) / 1e-5;
    CHECK(std::abs(fd - slope_at_zero(g, s)) <= 1e-4);
  }
}

TEST_CASE("mismatch agrees with the quadrature oracle")
{
  for (auto [t0, s] : {std::pair{2 * pi / 3, 1.8}, std::pair{3 * pi / 4, -0.6},
                       std::pair{pi / 3, -1.2}, std::pair{1.3, 0.4}})
    for (double a : {0.1, 0.45, 0.8})
      CHECK(std::abs(boundary_mismatch(ConeGeometry(t0), a, s) -
                     oracle::boundary_mismatch(t0, a, s)) <= 1e-10);
}

TEST_CASE("critical angle")
{
  for (int k = 0; k < 100; ++k) {
    const double t0 = 0.05 + 3.0 * k / 99;
    const ConeGeometry g(t0);
    CHECK(std::abs(critical_angle_s0(g) - 0.5 * (t0 - pi)) <= 1e-10);
    CHECK(std::abs(slope_at_zero(g, 0.5 * (t0 - pi))) <= 1e-12);
  }
}

TEST_CASE("critical exponents against the oracle")
{
  // Bracketed roots of the quadrature-based mismatch.
  struct Case
  {
    double theta0, s, lo, hi;
  };
  const Case cases[] = {{2 * pi / 3, 1.8, 0.5, 0.99},   {2 * pi / 3, -1.0, 0.3, 0.8},
                        {3 * pi / 4, -0.6, 0.1, 0.5},    {3 * pi / 4, -0.45, 0.01, 0.2},
                        {pi / 3, -1.2, 0.1, 0.5},        {pi / 4, -1.5, 0.6, 0.95}};
  for (const auto &c : cases) {
    const double ref =
      oracle::bisect([&](double a) { return oracle::boundary_mismatch(c.theta0, a, c.s); }, c.lo,
                     c.hi, 1e-13);
    const ConeGeometry g(c.theta0);
    const ExponentSearch search = find_critical_exponent(g, ObliqueBC(g, c.s));
    REQUIRE(search.alpha.has_value());
    CHECK(std::abs(*search.alpha - ref) <= 1e-9);
    CHECK(std::abs(search.residual) <= 1e-10);
    CHECK(search.sign_changes >= 1);
  }
  CHECK(*critical_exponent(ConeGeometry(2 * pi / 3), ObliqueBC(ConeGeometry(2 * pi / 3), 1.8)) ==
        doctest::Approx(0.85112746747386755).epsilon(1e-11));
}

TEST_CASE("no exponent in the barrier regime")
{
  const std::pair<double, double> pairs[] = {{2 * pi / 3, 0.7}, {pi / 3, 0.5}, {pi / 4, -2.2},
                                             {pi / 3, -2.0},    {2.5, 0.3},    {2.5, 1.4},
                                             {1.0, 0.9},        {0.5, 0.3},    {0.3, -2.7},
                                             {1.2, -1.8},       {2 * pi / 3, 1.3}};
  for (auto [t0, s] : pairs) {
    const ConeGeometry g(t0);
    CHECK_FALSE(critical_exponent(g, ObliqueBC(g, s)).has_value());
    CHECK(oracle::count_sign_changes([&](double a) { return oracle::boundary_mismatch(t0, a, s); },
                                     1e-3, 1.0, 60) == 0);
  }
}

TEST_CASE("Neumann mismatch")
{
  for (double t0 : {0.4, 1.0, pi / 2, 2.0, 2 * pi / 3, 3 * pi / 4, 2.9}) {
    const ConeGeometry g(t0);
    CHECK(std::abs(neumann_mismatch(g, 0.0)) <= 1e-12);
    CHECK(std::abs(neumann_mismatch(g, 1.0) - 1.0 / std::tan(t0)) <= 1e-10);
    const double fd = (neumann_mismatch(g, 1e-5) - neumann_mismatch(g, 0.0)) / 1e-5;
    const double closed = (1 - std::cos(t0)) / std::pow(std::sin(t0), 3);
    CHECK(std::abs(fd - closed) <= 1e-4);
    CHECK(neumann_slope_at_zero(g) == doctest::Approx(closed).epsilon(1e-14));
  }
  CHECK(std::abs(neumann_exponent(ConeGeometry(pi / 2)) - 1.0) <= 1e-8);
  CHECK(neumann_exponent(ConeGeometry(2 * pi / 3)) == doctest::Approx(0.856313255146320).epsilon(1e-10));
  CHECK(neumann_exponent(ConeGeometry(3 * pi / 4)) == doctest::Approx(0.857167676523380).epsilon(1e-10));
  CHECK_THROWS_AS(neumann_exponent(ConeGeometry(1.0)), BracketError);
}

TEST_CASE("separable solutions: gradient against differences")
{
  for (int mode : {0, 1})
    for (double a : {0.3, 0.85, 1.6})
      for (double r : {0.15, 0.8})
        for (double t : {0.3, 1.2, 2.4}) {
          const SeparableSolution sol{a, mode};
          const auto val = [&](double y1, double y2) {
            return separable_eval(sol, {std::hypot(y1, y2), std::atan2(y2, y1), 0.0}).value;
          };
          const Vec2 g = separable_eval(sol, {r, t, 0.0}).gradient;
          const auto fd = oracle::gradient(val, r * std::cos(t), r * std::sin(t), 1e-3);
          const double scale = std::max(1.0, std::hypot(g[0], g[1]));
          CHECK(std::hypot(fd[0] - g[0], fd[1] - g[1]) <= 1e-6 * scale);
        }
  // azimuthal factor and axis limits
  const SeparableSolution m1{0.7, 1, 0.0, 2.0};
  CHECK(separable_eval(m1, {0.5, 0.9, 0.0}).value ==
        doctest::Approx(2.0 * std::pow(0.5, 0.7) * special::legendre_p1(0.7, std::cos(0.9))));
  CHECK(separable_eval(m1, {0.5, 0.9, pi / 2}).value == doctest::Approx(0.0));
  const Vec2 axis = separable_eval({0.6, 0}, {0.25, 0.0, 0.0}).gradient;
  CHECK(axis[0] == doctest::Approx(0.6 * std::pow(0.25, -0.4)));
  CHECK(axis[1] == 0.0);
  CHECK_THROWS_AS(separable_eval({0.5, 0}, {0.0, 1.0, 0.0}), DomainError);
}

TEST_CASE("regime classification")
{
  const ConeGeometry g(2 * pi / 3);
  const RegimeReport irregular = classify_regime(g, ObliqueBC(g, 1.8));
  CHECK(irregular.label == RegimeLabel::Irregular);
  REQUIRE(irregular.critical_exponent);
  CHECK(std::abs(boundary_mismatch(g, *irregular.critical_exponent, 1.8)) <= 1e-10);

  CHECK(classify_regime(g, ObliqueBC(g, 1.3)).label == RegimeLabel::RegularBarrier);
  CHECK(classify_regime(g, ObliqueBC(g, 0.0)).label == RegimeLabel::AxisContinuous);
  CHECK(to_string(RegimeLabel::Unknown) == "UNKNOWN");

  const RegimeReport again = classify_regime(g, ObliqueBC(g, 1.8));
  REQUIRE(again.witnesses.size() == irregular.witnesses.size());
  for (std::size_t k = 0; k < again.witnesses.size(); ++k)
    CHECK(again.witnesses[k].value == irregular.witnesses[k].value);
}

TEST_CASE("axisymmetric reduction")
{
  for (int n : {3, 4, 5})
    for (double kappa : {1.0, 0.3, 2.5, 1e-3, 7.123456789}) {
      const Eigen::MatrixXd A = kappa * Eigen::MatrixXd::Identity(n, n);
      const ReducedOperator op = reduce_to_axisymmetric(A, {kappa, kappa});
      CHECK(op.b021 == (n - 2) * kappa);
      CHECK(op.a0.isApprox(kappa * Eigen::Matrix2d::Identity()));
    }
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  A(2, 2) = 2.0;
  const ReducedOperator op = reduce_to_axisymmetric(A, {1.0, 2.0});
  CHECK(op.a0(0, 0) == 2.0);
  CHECK(op.b021 == 1.0);

  Eigen::MatrixXd coupled = Eigen::MatrixXd::Identity(3, 3);
  coupled(0, 2) = coupled(2, 0) = 0.1;
  CHECK_THROWS_AS(reduce_to_axisymmetric(coupled, {0.5, 2.0}), InvalidOperator);
  Eigen::MatrixXd aniso = Eigen::MatrixXd::Identity(3, 3);
  aniso(1, 1) = 1.5;
  CHECK_THROWS_AS(reduce_to_axisymmetric(aniso, {0.5, 2.0}), InvalidOperator);
  CHECK_THROWS_AS(reduce_to_axisymmetric(Eigen::MatrixXd::Identity(3, 3), {1.5, 2.0}),
                  InvalidOperator);
}
