#pragma once

// Reference computations used only by the tests. None of them calls into the
// series evaluation of the library.

#include <array>
#include <functional>
#include <vector>

namespace oracle {

/// Adaptive Simpson quadrature to absolute tolerance tol.
double integrate(const std::function<double(double)> &f, double a, double b, double tol = 1e-14);

/// Legendre function via Laplace's first integral; valid for z in (0, 1].
double legendre_laplace(double degree, double z);

/// Legendre function via the Mehler-Dirichlet integral; valid for z in (-1, 1].
double legendre_mehler(double degree, double z);

/// dP/dz from the quadrature values through (1 - z^2) P' = (a + 1)(z P_a - P_{a+1}).
double legendre_derivative(double degree, double z);

/// Mismatch B built from quadrature values of P_a and P_a'.
double boundary_mismatch(double theta0, double alpha, double s);

/// Bisection on a bracket [lo, hi] with a sign change, to tol.
double bisect(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-13);

/// Number of sign changes of f over `points` uniform samples of [lo, hi].
int count_sign_changes(const std::function<double(double)> &f, double lo, double hi, int points);

/// Richardson-extrapolated central difference (fourth order) of f at x.
double derivative(const std::function<double(double)> &f, double x, double h);

/// Cartesian gradient by fourth-order central differences.
std::array<double, 2> gradient(const std::function<double(double, double)> &f, double y1,
                               double y2, double h);

struct Point
{
  double y1, y2, value;
};

/// Brute-force unweighted Hoelder quotient max over all distinct pairs.
double holder_quotient(const std::vector<Point> &points, double alpha);

} // namespace oracle
