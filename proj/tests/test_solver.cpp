#include "conereg/errors.hpp"
#include "conereg/exponent.hpp"
#include "conereg/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace conereg;

namespace {

constexpr double pi = std::numbers::pi;

double max_error(const DiscreteField &f, const std::function<double(double, double)> &u)
{
  double err = 0.0;
  for (int i = 0; i < f.grid.n_r(); ++i)
    for (int j = 0; j < f.grid.n_theta(); ++j)
      err = std::max(err, std::abs(f.at(i, j) - u(f.grid.r(i), f.grid.theta(j))));
  return err;
}

std::function<double(double, double)> exact_of(const SeparableSolution &sol)
{
  return [sol](double r, double t) { return std::pow(r, sol.alpha) * separable_profile(sol, t); };
}

} // namespace

TEST_CASE("grid construction")
{
  const SectorGrid g = SectorGrid::standard(1.0, 17, 2.0);
  CHECK(g.r_min() == doctest::Approx(1e-3));
  CHECK(g.r_max() == 1.0);
  CHECK(g.theta0() == 2.0);
  CHECK(g.n_theta() == 17);
  for (int i = 1; i + 1 < g.n_r(); ++i) {
    const double q = (g.r(i + 1) - g.r(i)) / (g.r(i) - g.r(i - 1));
    CHECK(q <= 1.05 + 1e-12);
    CHECK(q >= 1.0);
  }
  const SectorGrid f = g.refined();
  CHECK(f.n_r() == 2 * g.n_r() - 1);
  CHECK(f.n_theta() == 33);
  for (int i = 0; i < g.n_r(); ++i)
    CHECK(f.r(2 * i) == g.r(i));
  for (int j = 0; j < g.n_theta(); ++j)
    CHECK(f.theta(2 * j) == g.theta(j));

  CHECK_THROWS_AS(SectorGrid::make(0.0, 1.0, 5, 5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(SectorGrid::make(0.1, 1.0, 2, 5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(SectorGrid::make(0.1, 1.0, 5, 5, 0.9, 1.0), DomainError);
  CHECK_THROWS_AS(SectorGrid::make(0.1, 1.0, 5, 5, 1.0, 1.0, 2), DomainError);
}

TEST_CASE("first-degree harmonics are reproduced")
{
  for (double t0 : {pi / 3, 2 * pi / 3}) {
    const SectorGrid g = SectorGrid::make(1e-2, 1.0, 60, 17, 1.05, t0);
    CHECK(laplacian_residual({1.0, 0}, g).max_abs <= 1e-10);
    const SectorGrid s = SectorGrid::standard(1.0, 17, t0);
    const double res = laplacian_residual({1.0, 0}, s).max_abs;
    // roundoff of the radial differences scales like eps / h^2 at the inner arc
    CHECK(res <= 1e-6);
  }
}

TEST_CASE("residual converges at second order")
{
  for (const SeparableSolution sol : {SeparableSolution{0.6, 0}, SeparableSolution{0.35, 0}}) {
    SectorGrid g = SectorGrid::standard(1.0, 17, 2 * pi / 3);
    double prev = laplacian_residual(sol, g).max_abs;
    for (int level = 0; level < 2; ++level) {
      g = g.refined();
      const double cur = laplacian_residual(sol, g).max_abs;
      CHECK(observed_order(prev, cur) >= 1.7);
      prev = cur;
    }
  }
  const ConeGeometry geo(2 * pi / 3);
  const SeparableSolution neumann{neumann_exponent(geo), 1};
  SectorGrid g = SectorGrid::standard(1.0, 17, geo.theta0(), 1);
  double prev = laplacian_residual(neumann, g).max_abs;
  for (int level = 0; level < 2; ++level) {
    g = g.refined();
    const double cur = laplacian_residual(neumann, g).max_abs;
    CHECK(observed_order(prev, cur) >= 1.7);
    prev = cur;
  }
  CHECK_THROWS_AS(laplacian_residual({0.5, 0}, g), DomainError);
}

TEST_CASE("Dirichlet and oblique solves")
{
  const SectorGrid g = SectorGrid::standard(1.0, 17, 2 * pi / 3);
  const auto linear = [](double r, double t) { return r * std::cos(t); };
  const DiscreteField f = solve_dirichlet(g, {}, dirichlet_from(linear, g));
  CHECK(max_error(f, linear) <= 1e-10);

  const double cases[][2] = {{2 * pi / 3, 1.8}, {3 * pi / 4, -0.6}};
  for (const auto &c : cases) {
    const ConeGeometry geo(c[0]);
    const ObliqueBC bc(geo, c[1]);
    const double alpha = *critical_exponent(geo, bc);
    const auto exact = exact_of({alpha, 0});
    SectorGrid grid = SectorGrid::standard(1.0, 17, c[0]);
    double prev_second = 0.0, prev_upwind = 0.0;
    for (int level = 0; level < 2; ++level) {
      const auto data = dirichlet_from(exact, grid);
      const double second =
        max_error(solve_dirichlet(grid, {c[1], ObliqueStencil::SecondOrder}, data), exact);
      const double upwind =
        max_error(solve_dirichlet(grid, {c[1], ObliqueStencil::Upwind}, data), exact);
      CHECK(second < 1e-2);
      CHECK(upwind < 1e-1);
      if (level > 0) {
        CHECK(observed_order(prev_second, second) >= 1.7);
        CHECK(upwind < prev_upwind);
        // at 2pi/3 the coarse upwind error is still interior-dominated
        if (c[0] > 2.2)
          CHECK(observed_order(prev_upwind, upwind) >= 0.8);
      }
      prev_second = second;
      prev_upwind = upwind;
      grid = grid.refined();
    }
  }

  const auto system = assemble_system(g, {}, dirichlet_from(linear, g));
  for (int k = 0; k < system.matrix.outerSize(); ++k)
    CHECK(system.matrix.coeff(k, k) == doctest::Approx(1.0));
}

TEST_CASE("M-matrix structure")
{
  for (double t0 : {pi / 3, 2 * pi / 3, 3 * pi / 4}) {
    const SectorGrid g = SectorGrid::standard(1.0, 17, t0);
    const MMatrixReport r = check_m_matrix(g, {});
    CHECK(r.pass);
    CHECK(r.violations.empty());
    CHECK(r.rows_checked == (g.n_r() - 2) * (g.n_theta() - 1));
    const MMatrixReport up = check_m_matrix(g, {t0 - 0.3, ObliqueStencil::Upwind});
    CHECK(up.pass);
    const MMatrixReport so = check_m_matrix(g, {t0 - 0.3, ObliqueStencil::SecondOrder});
    CHECK_FALSE(so.pass);
    CHECK_FALSE(so.boundary_rows_monotone);
  }
  CHECK(check_m_matrix(SectorGrid::standard(1.0, 33, 2.0, 1), {}).pass);

  const MMatrixReport steep = check_m_matrix(SectorGrid::make(1e-4, 1.0, 10, 9, 3.0, 2.0), {});
  CHECK_FALSE(steep.pass);
  CHECK(steep.boundary_rows_monotone);
  const MMatrixReport wide = check_m_matrix(SectorGrid::make(1e-3, 1.0, 21, 8, 1.0, pi - 0.05, 1), {});
  CHECK_FALSE(wide.pass);
}

TEST_CASE("discrete comparison")
{
  DirichletData data;
  data.inner = [](double t) { return 1.0 + std::cos(5 * t); };
  data.outer = [](double t) { return t < 0.3 ? 1.0 : 0.0; };
  data.cone = [](double) { return 0.0; };
  for (double t0 : {pi / 3, 2.5}) {
    const SectorGrid g = SectorGrid::standard(1.0, 17, t0);
    CHECK(solve_dirichlet(g, {}, data).min() >= -1e-12);
    CHECK(solve_dirichlet(g, {t0 - 0.2, ObliqueStencil::Upwind}, data).min() >= -1e-12);
  }
}

TEST_CASE("exponent fits")
{
  const auto linear = [](double r, double t) { return r * std::cos(t); };
  CHECK(fit_exponent(linear, 0.3, 1e-3, 1e-1).alpha_hat == doctest::Approx(1.0).epsilon(1e-8));

  const SectorGrid g = SectorGrid::standard(1.0, 17, 2.0);
  const DiscreteField f = sample_separable({0.42, 0}, g);
  const ExponentFit fit = fit_exponent(f, 0.5, 1e-3, 1e-1);
  CHECK(fit.alpha_hat == doctest::Approx(0.42).epsilon(1e-9));
  CHECK(fit.samples >= kMinFitSamples);

  CHECK_THROWS_AS(fit_exponent(linear, 0.3, 1e-3, 1e-1, 5), DegenerateFit);
  CHECK_THROWS_AS(fit_exponent(f, 0.5, 0.5, 0.52), DegenerateFit);
  CHECK_THROWS_AS(fit_exponent([](double r, double) { return r - 1e-3; }, 0.3, 1e-3, 1e-1),
                  DegenerateFit);
  CHECK_THROWS_AS(fit_exponent([](double r, double) { return std::sin(1.0 / r); }, 0.3, 1e-3, 1e-1),
                  DegenerateFit);
  CHECK_THROWS_AS(fit_exponent(f, 2.5, 1e-3, 1e-1), DomainError);
}

TEST_CASE("field CSV")
{
  const DiscreteField f = sample_field(SectorGrid::make(0.1, 1.0, 3, 3, 1.0, 1.0), [](double r, double) { return r; });
  std::ostringstream out;
  write_csv(f, out);
  const std::string text = out.str();
  CHECK(text.rfind("r,theta,value\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 10);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
}
