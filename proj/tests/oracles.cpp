#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

double simpson_step(const std::function<double(double)> &f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)> &f, double a, double b, double tol)
{
  // Split first so the adaptive step never sees a too-coarse initial sample.
  const int pieces = 16;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + (b - a) * k / pieces;
    const double hi = a + (b - a) * (k + 1) / pieces;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, 40);
  }
  return total;
}

double legendre_laplace(double degree, double z)
{
  if (!(z > 0.0 && z <= 1.0))
    throw std::domain_error("Laplace integral needs z in (0, 1]");
  const double y = std::sqrt(std::max(0.0, 1.0 - z * z));
  const auto f = [&](double phi) {
    return std::real(std::pow(std::complex<double>(z, y * std::cos(phi)), degree));
  };
  return integrate(f, 0.0, std::numbers::pi) / std::numbers::pi;
}

double legendre_mehler(double degree, double z)
{
  const double theta = std::acos(z);
  const double k = std::sin(0.5 * theta);
  const auto f = [&](double t) {
    const double phi = 2.0 * std::asin(k * std::sin(t));
    return std::cos((degree + 0.5) * phi) / std::cos(0.5 * phi);
  };
  return 2.0 / std::numbers::pi * integrate(f, 0.0, 0.5 * std::numbers::pi);
}

double legendre_derivative(double degree, double z)
{
  return (degree + 1.0) * (z * legendre_mehler(degree, z) - legendre_mehler(degree + 1.0, z)) /
         (1.0 - z * z);
}

double boundary_mismatch(double theta0, double alpha, double s)
{
  // u = r^a P_a(cos t): u_r = a r^{a-1} P, u_t = -r^a sin(t) P'(cos t).
  const double c = std::cos(theta0), sn = std::sin(theta0);
  const double p = legendre_mehler(alpha, c);
  const double dp = legendre_derivative(alpha, c);
  const double ur = alpha * p;
  const double ut = -sn * dp;
  const double g1 = ur * c - ut * sn;
  const double g2 = ur * sn + ut * c;
  return std::cos(s) * g1 + std::sin(s) * g2;
}

double bisect(const std::function<double(double)> &f, double lo, double hi, double tol)
{
  double flo = f(lo);
  if (flo * f(hi) > 0.0)
    throw std::domain_error("no sign change in bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int count_sign_changes(const std::function<double(double)> &f, double lo, double hi, int points)
{
  int changes = 0;
  double prev = f(lo);
  for (int k = 1; k < points; ++k) {
    const double cur = f(lo + (hi - lo) * k / (points - 1));
    if (prev * cur <= 0.0)
      ++changes;
    prev = cur;
  }
  return changes;
}

double derivative(const std::function<double(double)> &f, double x, double h)
{
  const auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

std::array<double, 2> gradient(const std::function<double(double, double)> &f, double y1,
                               double y2, double h)
{
  return {derivative([&](double t) { return f(t, y2); }, y1, h),
          derivative([&](double t) { return f(y1, t); }, y2, h)};
}

double holder_quotient(const std::vector<Point> &points, double alpha)
{
  double best = 0.0;
  for (const auto &p : points)
    for (const auto &q : points) {
      const double d = std::hypot(p.y1 - q.y1, p.y2 - q.y2);
      if (d > 0.0)
        best = std::max(best, std::abs(p.value - q.value) / std::pow(d, alpha));
    }
  return best;
}

} // namespace oracle
