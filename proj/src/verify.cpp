#include "conereg/verify.hpp"

#include "conereg/barrier.hpp"
#include "conereg/errors.hpp"
#include "conereg/exponent.hpp"
#include "conereg/solver.hpp"
#include "conereg/special.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace conereg::verify {

namespace {

using namespace conereg::special;

constexpr double kPi = std::numbers::pi;

struct Outcome
{
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

Outcome bound(double worst, double tol, std::string detail = {})
{
  return {worst, tol, worst <= tol, std::move(detail)};
}

using Check = std::pair<std::string, std::function<Outcome()>>;

std::vector<CheckResult> run_checks(const std::string &suite, const std::vector<Check> &checks)
{
  std::vector<CheckResult> out;
  for (const auto &[name, fn] : checks) {
    CheckResult r;
    r.suite = suite;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = fn();
      r.pass = o.pass;
      r.value = o.value;
      r.tolerance = o.tolerance;
      r.detail = o.detail;
    } catch (const std::exception &e) {
      r.pass = false;
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n)
{
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return v;
}

// Interior points of (lo, hi): midpoints of n equal cells.
std::vector<double> cell_midpoints(double lo, double hi, int n)
{
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    v[static_cast<std::size_t>(k)] = lo + (hi - lo) * (k + 0.5) / n;
  return v;
}

// Mehler-Dirichlet integral after sin(phi/2) = sin(theta/2) sin(t); the integrand is
// smooth and even about both ends, so the trapezoid rule converges geometrically.
double legendre_by_quadrature(double degree, double z)
{
  const double theta = std::acos(z);
  const double k = std::sin(0.5 * theta);
  const int n = 400;
  const double h = 0.5 * kPi / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double phi = 2.0 * std::asin(k * std::sin(t));
    const double f = std::cos((degree + 0.5) * phi) / std::cos(0.5 * phi);
    sum += (i == 0 || i == n) ? 0.5 * f : f;
  }
  return 2.0 / kPi * sum * h;
}

std::vector<Check> special_checks(const Options &opt)
{
  const double one = opt.inject_fault ? 1.0 + 1e-9 : 1.0;
  std::vector<Check> c;
  c.emplace_back("P_a(1) = 1", [one] {
    double worst = 0.0;
    for (double a : linspace(0.0, 3.0, 50))
      worst = std::max(worst, std::abs(legendre_p(a, 1.0) - one));
    return bound(worst, 1e-12);
  });
  c.emplace_back("integer degrees match polynomials", [] {
    double worst = 0.0;
    for (double z : linspace(-0.9, 1.0, 39)) {
      const double ref[] = {1.0, z, 0.5 * (3 * z * z - 1), 0.5 * (5 * z * z * z - 3 * z)};
      for (int n = 0; n < 4; ++n)
        worst = std::max(worst, std::abs(legendre_p(n, z) - ref[n]));
    }
    return bound(worst, 1e-12);
  });
  c.emplace_back("three-term recurrence", [] {
    double worst = 0.0;
    for (double a : linspace(0.1, 2.0, 20))
      for (double z : linspace(-0.9, 1.0, 20))
        worst = std::max(worst, std::abs((a + 1) * legendre_p(a + 1, z) -
                                         (2 * a + 1) * z * legendre_p(a, z) +
                                         a * legendre_p(a - 1, z)));
    return bound(worst, 1e-10);
  });
  c.emplace_back("dP/dz vs Richardson difference", [] {
    double worst = 0.0;
    for (double a : {0.3, 0.7, 1.5})
      for (double z : linspace(-0.8, 0.9, 12)) {
        const auto d = [&](double h) {
          return (legendre_p(a, z + h) - legendre_p(a, z - h)) / (2 * h);
        };
        const double fd = (4.0 * d(1e-3) - d(2e-3)) / 3.0;
        const double exact = legendre_dp_dz(a, z);
        worst = std::max(worst, std::abs(exact - fd) / std::max(1.0, std::abs(exact)));
      }
    return bound(worst, 1e-8);
  });
  c.emplace_back("series vs integral representation", [] {
    double worst = 0.0;
    for (double a : {0.25, 0.5, 0.75})
      for (double z : linspace(-0.9, 1.0, 20))
        worst = std::max(worst, std::abs(legendre_p(a, z) - legendre_by_quadrature(a, z)));
    return bound(worst, 1e-9);
  });
  c.emplace_back("degree derivative identity at 0", [] {
    double worst = 0.0;
    for (double z : linspace(-0.9, 0.95, 20))
      worst = std::max(worst, std::abs(legendre_dp_dalpha(1.0, z) -
                                       z * legendre_dp_dalpha(0.0, z) - (z - 1.0)));
    return bound(worst, 1e-5);
  });
  return c;
}

// Admissible (theta0, s) grid: theta0 in [0.2, 2.9], s at cell midpoints of (-pi + theta0, theta0).
std::vector<std::pair<double, double>> admissible_grid(int n)
{
  std::vector<std::pair<double, double>> cells;
  for (double t0 : linspace(0.2, 2.9, n))
    for (double s : cell_midpoints(-kPi + t0, t0, n))
      cells.emplace_back(t0, s);
  return cells;
}

// Fourth-order one-sided difference in theta (from inside the cone) and
// central difference in r of u = r^a Theta(theta).
double oblique_residual(const SeparableSolution &sol, const ObliqueBC &bc, double theta0,
                        double r)
{
  const auto u = [&](double rr, double t) {
    return separable_eval(sol, {rr, t, 0.0}).value;
  };
  const double h = 1e-3;
  const double ut = (25 * u(r, theta0) - 48 * u(r, theta0 - h) + 36 * u(r, theta0 - 2 * h) -
                     16 * u(r, theta0 - 3 * h) + 3 * u(r, theta0 - 4 * h)) /
                    (12 * h);
  const double hr = 1e-4 * r;
  const double ur = (u(r + hr, theta0) - u(r - hr, theta0)) / (2 * hr);
  const double radial = std::cos(bc.angle() - theta0);
  return radial * ur - bc.obliqueness() / r * ut;
}

std::vector<Check> exponent_checks(const Options &opt)
{
  const double pi_ref = opt.inject_fault ? kPi * (1.0 + 1e-8) : kPi;
  std::vector<Check> c;
  c.emplace_back("B endpoint identities", [] {
    double worst = 0.0;
    for (auto [t0, s] : admissible_grid(20)) {
      const ConeGeometry g(t0);
      worst = std::max(worst, std::abs(boundary_mismatch(g, 0.0, s)));
      worst = std::max(worst, std::abs(boundary_mismatch(g, 1.0, s) - std::cos(s)));
    }
    return bound(worst, 1e-10);
  });
  c.emplace_back("dB/da at 0 equals V", [] {
    double worst = 0.0;
    for (auto [t0, s] : admissible_grid(20)) {
      const ConeGeometry g(t0);
      const double fd = (boundary_mismatch(g, 1e-5, s) - boundary_mismatch(g, 0.0, s)) / 1e-5;
      worst = std::max(worst, std::abs(fd - slope_at_zero(g, s)));
    }
    return bound(worst, 1e-4);
  });
  c.emplace_back("critical angle closed form", [pi_ref] {
    double worst = 0.0;
    for (double t0 : linspace(0.1, 3.0, 100))
      worst = std::max(worst, std::abs(critical_angle_s0(ConeGeometry(t0)) - 0.5 * (t0 - pi_ref)));
    return bound(worst, 1e-10);
  });
  c.emplace_back("counterexample exponents", [] {
    struct Branch
    {
      double theta0, lo, hi;
    };
    const std::vector<Branch> branches = {
      {2 * kPi / 3, kPi / 2, 2 * kPi / 3}, {2 * kPi / 3, -kPi / 3, -kPi / 6},
      {3 * kPi / 4, kPi / 2, 3 * kPi / 4}, {3 * kPi / 4, -kPi / 4, -kPi / 8},
      {kPi / 3, -kPi / 2, -kPi / 3},       {kPi / 4, -kPi / 2, -3 * kPi / 8}};
    double worst_b = 0.0;
    double worst_residual = 0.0;
    int found = 0;
    for (const auto &b : branches) {
      const ConeGeometry g(b.theta0);
      for (double s : cell_midpoints(b.lo, b.hi, 5)) {
        const ObliqueBC bc(g, s);
        const auto a = critical_exponent(g, bc);
        if (!a || !(*a > 0.0 && *a < 1.0))
          return Outcome{s, 0.0, false, "no exponent in (0,1)"};
        ++found;
        worst_b = std::max(worst_b, std::abs(boundary_mismatch(g, *a, s)));
        const SeparableSolution sol{*a, 0};
        for (double r : linspace(0.1, 1.0, 20))
          worst_residual = std::max(worst_residual, std::abs(oblique_residual(sol, bc, b.theta0, r)) /
                                                      std::pow(r, *a - 1.0));
      }
    }
    std::ostringstream msg;
    msg << found << " exponents, max |B| " << worst_b << ", max scaled boundary residual "
        << worst_residual;
    return Outcome{worst_b, 1e-10, worst_b <= 1e-10 && worst_residual <= 1e-6, msg.str()};
  });
  c.emplace_back("regular regime has no exponent", [] {
    const std::pair<double, double> pairs[] = {{2 * kPi / 3, 0.7}, {kPi / 3, 0.5}, {kPi / 4, -2.2},
                                               {kPi / 3, -2.0},    {2.5, 0.3},      {2.5, 1.4},
                                               {1.0, 0.9},         {0.5, 0.3},      {0.3, -2.7},
                                               {1.2, -1.8}};
    int roots = 0;
    for (auto [t0, s] : pairs) {
      const ConeGeometry g(t0);
      if (critical_exponent(g, ObliqueBC(g, s)))
        ++roots;
    }
    return bound(roots, 0.0);
  });
  c.emplace_back("W endpoint values", [] {
    double worst = 0.0;
    for (double t0 : linspace(0.3, 2.8, 20)) {
      const ConeGeometry g(t0);
      worst = std::max(worst, std::abs(neumann_mismatch(g, 0.0)));
      worst = std::max(worst, std::abs(neumann_mismatch(g, 1.0) - 1.0 / std::tan(t0)));
    }
    return bound(worst, 1e-10);
  });
  c.emplace_back("dW/da at 0", [] {
    double worst = 0.0;
    for (double t0 : linspace(0.3, 2.8, 20)) {
      const ConeGeometry g(t0);
      const double fd = (neumann_mismatch(g, 1e-5) - neumann_mismatch(g, 0.0)) / 1e-5;
      worst = std::max(worst, std::abs(fd - neumann_slope_at_zero(g)));
    }
    return bound(worst, 1e-4);
  });
  c.emplace_back("Neumann exponent at pi/2", [] {
    return bound(std::abs(neumann_exponent(ConeGeometry(kPi / 2)) - 1.0), 1e-8);
  });
  c.emplace_back("separable gradient vs differences", [] {
    double worst = 0.0;
    for (int mode : {0, 1})
      for (double a : {0.3, 0.85})
        for (double r : {0.2, 0.7})
          for (double t : {0.4, 1.3, 2.2}) {
            const SeparableSolution sol{a, mode};
            const auto val = [&](double y1, double y2) {
              return separable_eval(sol, {std::hypot(y1, y2), std::atan2(y2, y1), 0.0}).value;
            };
            const double y1 = r * std::cos(t), y2 = r * std::sin(t), h = 1e-5;
            const Vec2 g = separable_eval(sol, {r, t, 0.0}).gradient;
            const double d1 = (val(y1 + h, y2) - val(y1 - h, y2)) / (2 * h);
            const double d2 = (val(y1, y2 + h) - val(y1, y2 - h)) / (2 * h);
            const double scale = std::max(1.0, std::hypot(g[0], g[1]));
            worst = std::max(worst, std::hypot(d1 - g[0], d2 - g[1]) / scale);
          }
    return bound(worst, 1e-6);
  });
  return c;
}

std::vector<Check> barrier_checks(const Options &opt)
{
  const double zero_slope = opt.inject_fault ? 1e-7 : 0.0;
  std::vector<Check> c;
  const double thetas[] = {kPi / 3, 2 * kPi / 3, 3 * kPi / 4};
  c.emplace_back("barrier profile bounds and monotonicity", [thetas, zero_slope] {
    double worst = 0.0;
    for (double t0 : thetas) {
      const MillerBarrier b = build_barrier(ConeGeometry(t0), 0.05);
      if (!(b.cstar() > 0.0 && b.cstar() < 1.0))
        return Outcome{b.cstar(), 0.0, false, "c* outside (0,1)"};
      for (double t : linspace(t0 / 500, t0, 500))
        if (!(b.profile_derivative(t) < 0.0))
          return Outcome{t, 0.0, false, "profile not decreasing"};
      const double h = 1e-4;
      const double slope = (-3 * b.profile(0.0) + 4 * b.profile(h) - b.profile(2 * h)) / (2 * h);
      worst = std::max(worst, std::abs(slope + zero_slope));
    }
    return bound(worst, 1e-8);
  });
  c.emplace_back("M1 negative in the barrier regime", [thetas] {
    double worst = -1e300;
    for (double t0 : thetas) {
      const ConeGeometry g(t0);
      const MillerBarrier b = build_barrier(g, 0.05);
      ReducedOperator op{Eigen::Matrix2d::Identity(), 1.0};
      for (double s : cell_midpoints(-kPi + t0, t0, 40)) {
        if (!(std::cos(s) * std::sin(s) > 0.0) || std::abs(std::abs(s) - kPi / 2) < 0.05)
          continue;
        const ObliqueBC bc(g, s);
        worst = std::max(worst, m1_coefficient(b, bc, rotate_coefficients(op, bc)));
      }
    }
    return Outcome{worst, 0.0, worst < 0.0, "largest M1 coefficient"};
  });
  c.emplace_back("M2 at tilt 0 equals M1", [thetas] {
    double worst = 0.0;
    for (double t0 : thetas) {
      const ConeGeometry g(t0);
      const MillerBarrier b = build_barrier(g, 0.05);
      ReducedOperator op{Eigen::Matrix2d::Identity(), 1.0};
      for (double s : cell_midpoints(-kPi + t0, t0, 10)) {
        if (std::abs(std::sin(s)) < 1e-3)
          continue;
        const ObliqueBC bc(g, s);
        const auto rc = rotate_coefficients(op, bc);
        worst = std::max(worst, std::abs(m2_coefficient(b, bc, rc, 0.0) - m1_coefficient(b, bc, rc)));
      }
    }
    return bound(worst, 0.0);
  });
  c.emplace_back("admissible tilt", [thetas] {
    double smallest = 1.0;
    for (double t0 : thetas) {
      const ConeGeometry g(t0);
      const MillerBarrier b = build_barrier(g, 0.05);
      ReducedOperator op{Eigen::Matrix2d::Identity(), 1.0};
      const double s = 0.4;
      const ObliqueBC bc(g, s);
      const auto rc = rotate_coefficients(op, bc);
      const double tilt = max_admissible_tilt(bc, b, rc);
      if (!(m2_coefficient(b, bc, rc, tilt) < 0.0))
        return Outcome{tilt, kMinTilt, false, "M2 not negative at the returned tilt"};
      smallest = std::min(smallest, tilt);
    }
    return Outcome{smallest, kMinTilt, smallest >= kMinTilt, "smallest tilt"};
  });
  return c;
}

std::vector<Check> solver_checks(const Options &opt)
{
  const double order_lo = opt.inject_fault ? 2.2 : 1.7;
  std::vector<Check> c;
  c.emplace_back("residual order, m=0", [order_lo] {
    const SeparableSolution sol{0.6, 0};
    auto g = SectorGrid::standard(1.0, 17, 2 * kPi / 3);
    const double e0 = laplacian_residual(sol, g).max_abs;
    const double e1 = laplacian_residual(sol, g.refined()).max_abs;
    const double p = observed_order(e0, e1);
    return Outcome{p, order_lo, p >= order_lo && p <= 2.3, "observed order"};
  });
  c.emplace_back("residual order, m=1", [order_lo] {
    const double a = neumann_exponent(ConeGeometry(2 * kPi / 3));
    const SeparableSolution sol{a, 1};
    auto g = SectorGrid::standard(1.0, 17, 2 * kPi / 3, 1);
    const double e0 = laplacian_residual(sol, g).max_abs;
    const double e1 = laplacian_residual(sol, g.refined()).max_abs;
    const double p = observed_order(e0, e1);
    return Outcome{p, order_lo, p >= order_lo && p <= 2.3, "observed order"};
  });
  c.emplace_back("M-matrix on default grids", [] {
    int violations = 0;
    for (double t0 : {kPi / 3, 2 * kPi / 3, 3 * kPi / 4})
      for (int mode : {0, 1})
        violations += static_cast<int>(
          check_m_matrix(SectorGrid::standard(1.0, 33, t0, mode), {}).violations.size());
    return bound(violations, 0.0);
  });
  c.emplace_back("discrete comparison", [] {
    double worst = 0.0;
    DirichletData data;
    data.inner = [](double t) { return 1.0 + std::cos(5 * t); };
    data.outer = [](double t) { return t < 0.3 ? 1.0 : 0.0; };
    data.cone = [](double) { return 0.0; };
    for (auto [t0, s] : {std::pair{2 * kPi / 3, 1.8}, std::pair{kPi / 3, -1.2}}) {
      const auto g = SectorGrid::standard(1.0, 17, t0);
      worst = std::max(worst, -solve_dirichlet(g, {}, data).min());
      const BoundaryConfig upwind{s, ObliqueStencil::Upwind};
      if (!check_m_matrix(g, upwind).pass)
        return Outcome{0.0, 0.0, false, "upwind oblique system is not monotone"};
      worst = std::max(worst, -solve_dirichlet(g, upwind, data).min());
    }
    return bound(worst, 1e-12, "most negative nodal value");
  });
  c.emplace_back("exponent recovered from a solve", [] {
    const ConeGeometry g(2 * kPi / 3);
    const ObliqueBC bc(g, 1.8);
    const double a = *critical_exponent(g, bc);
    const SeparableSolution sol{a, 0};
    const auto exact = [&](double r, double t) { return separable_eval(sol, {r, t, 0.0}).value; };
    const auto grid = SectorGrid::standard(1.0, 33, g.theta0());
    const auto field = solve_dirichlet(grid, {1.8}, dirichlet_from(exact, grid));
    const double err = std::abs(fit_exponent(field, g.theta0() / 2, 1e-3, 1e-1).alpha_hat - a);
    return bound(err, 1e-2);
  });
  return c;
}

} // namespace

const std::vector<std::string> &suite_names()
{
  static const std::vector<std::string> names = {"special", "exponent", "barrier", "solver"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string &suite, const Options &options)
{
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto &name : suite_names()) {
      auto part = run_suite(name, options);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (suite == "special")
    return run_checks(suite, special_checks(options));
  if (suite == "exponent")
    return run_checks(suite, exponent_checks(options));
  if (suite == "barrier")
    return run_checks(suite, barrier_checks(options));
  if (suite == "solver")
    return run_checks(suite, solver_checks(options));
  throw DomainError("unknown suite '" + suite + "'");
}

} // namespace conereg::verify
