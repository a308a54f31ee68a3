#include "conereg/barrier.hpp"

#include "conereg/errors.hpp"
#include "conereg/roots.hpp"
#include "conereg/special.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace conereg {

using special::legendre_dp_dz;
using special::legendre_p;

double MillerBarrier::profile(double theta) const
{
  return legendre_p(alpha_, std::cos(theta));
}

double MillerBarrier::profile_derivative(double theta) const
{
  if (theta == 0.0)
    return 0.0;
  return -std::sin(theta) * legendre_dp_dz(alpha_, std::cos(theta));
}

double MillerBarrier::value(double r, double theta) const
{
  return std::pow(r, alpha_) * profile(theta);
}

double alpha0(const ConeGeometry &geometry)
{
  const double z = std::cos(geometry.theta0());
  const auto f = [z](double alpha) { return legendre_p(alpha, z); };
  // P_0 = 1, so the profile is positive for small degrees; a zero at a = 1
  // itself (theta0 = pi/2) counts as the threshold.
  const auto scan = roots::scan_for_root(f, 0.0, 1.0, 201, 1e-10, true);
  if (scan.root)
    return *scan.root;
  return 1.0;
}

MillerBarrier build_barrier(const ConeGeometry &geometry, double alpha)
{
  const double threshold = alpha0(geometry);
  if (!(alpha > 0.0 && alpha < threshold)) {
    std::ostringstream msg;
    msg << "barrier degree must lie in (0, " << threshold << "), got " << alpha;
    throw InvalidAlpha(msg.str());
  }

  const double theta0 = geometry.theta0();
  const MillerBarrier barrier(alpha, theta0, legendre_p(alpha, std::cos(theta0)));
  if (!(barrier.cstar() > 0.0))
    throw InvalidAlpha("profile is not positive at the cone boundary");

  constexpr int samples = 500;
  for (int i = 0; i <= samples; ++i) {
    const double theta = theta0 * static_cast<double>(i) / samples;
    const double F = barrier.profile(theta);
    if (F < barrier.cstar() - 1e-14 || F > 1.0 + 1e-14) {
      std::ostringstream msg;
      msg << "profile F(" << theta << ") = " << F << " leaves [c*, 1]";
      throw InvalidAlpha(msg.str());
    }
    if (i > 0 && !(barrier.profile_derivative(theta) < 0.0)) {
      std::ostringstream msg;
      msg << "profile is not decreasing at theta = " << theta;
      throw InvalidAlpha(msg.str());
    }
  }
  return barrier;
}

RotatedCoefficients rotate_coefficients(const ReducedOperator &op, const ObliqueBC &bc,
                                        const EllipticityBounds &bounds)
{
  const Eigen::Matrix2d &a0 = op.a0;
  const double tol = 1e-12 * std::max(1.0, a0.cwiseAbs().maxCoeff());
  if (std::abs(a0(0, 1) - a0(1, 0)) > tol)
    throw InvalidOperator("reduced coefficients are not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(a0, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < bounds.lambda - tol ||
      eig.eigenvalues().maxCoeff() > bounds.Lambda + tol || !(bounds.lambda > 0.0))
    throw InvalidOperator("reduced coefficients violate the ellipticity bounds");

  const Vec2 &beta = bc.beta();
  const Vec2 &nu = bc.normal();
  Eigen::Matrix2d J;
  J << beta[0], beta[1], nu[1], -nu[0];

  RotatedCoefficients rc;
  rc.atilde = J * a0 * J.transpose();
  rc.obliqueness = bc.obliqueness();
  rc.b021 = op.b021;

  for (int i = 0; i < 2; ++i) {
    const double a = rc.atilde(i, i);
    if (a < bounds.lambda - tol || a > bounds.Lambda + tol) {
      std::ostringstream msg;
      msg << "rotated coefficient a~" << i + 1 << i + 1 << " = " << a << " outside ["
          << bounds.lambda << ", " << bounds.Lambda << "]";
      throw InvalidOperator(msg.str());
    }
  }
  return rc;
}

RotatedCoefficients rotate_coefficients(const ReducedOperator &op, const ObliqueBC &bc)
{
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(op.a0, Eigen::EigenvaluesOnly);
  return rotate_coefficients(op, bc,
                             {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()});
}

double m2_coefficient(double alpha, double F, double dF, const ObliqueBC &bc,
                      const RotatedCoefficients &rc, double tilt)
{
  const Vec2 &beta = bc.beta();
  const Vec2 &nu = bc.normal();
  if (beta[1] == 0.0)
    throw DegenerateBC("boundary operator needs beta2 != 0");
  if (!(tilt >= 0.0))
    throw InvalidTilt("tilt must be non-negative");

  const double tangential = nu[0] + tilt * nu[1];
  const double denominator = beta[1] - tilt * beta[0];
  if (!(tangential > 0.0))
    throw InvalidTilt("nu1 + tilt * nu2 must be positive");
  if (denominator == 0.0 || (denominator > 0.0) != (beta[1] > 0.0))
    throw InvalidTilt("beta2 - tilt * beta1 must keep the sign of beta2");

  const double eps = rc.obliqueness;
  const double ratio = rc.atilde(1, 1) / rc.atilde(0, 0);
  const double beta_tau = dot(beta, bc.tangent());

  // On the boundary beta0.Dv = r^{a-1}(-a beta0.tau F - eps F'),
  // tau.Dv = -a r^{a-1} F and y2 = r nu1.
  return F * (-alpha * beta_tau - alpha * (tangential / denominator) * ratio) - eps * dF -
         (1.0 / eps) * (tangential / nu[0]) * (beta[0] / denominator) * rc.b021 / rc.atilde(0, 0) *
           F;
}

double m2_coefficient(const MillerBarrier &barrier, const ObliqueBC &bc,
                      const RotatedCoefficients &rc, double tilt)
{
  const double theta0 = barrier.theta0();
  return m2_coefficient(barrier.alpha(), barrier.profile(theta0),
                        barrier.profile_derivative(theta0), bc, rc, tilt);
}

double m1_coefficient(double alpha, double F, double dF, const ObliqueBC &bc,
                      const RotatedCoefficients &rc)
{
  return m2_coefficient(alpha, F, dF, bc, rc, 0.0);
}

double m1_coefficient(const MillerBarrier &barrier, const ObliqueBC &bc,
                      const RotatedCoefficients &rc)
{
  return m2_coefficient(barrier, bc, rc, 0.0);
}

double max_admissible_tilt(const ObliqueBC &bc, const MillerBarrier &barrier,
                           const RotatedCoefficients &rc)
{
  if (!(m1_coefficient(barrier, bc, rc) < 0.0))
    throw NoAdmissibleTilt("M1 coefficient is not negative; no tilt can help");

  for (double tilt = 1.0; tilt >= kMinTilt; tilt *= 0.5) {
    try {
      if (m2_coefficient(barrier, bc, rc, tilt) < 0.0)
        return tilt;
    } catch (const InvalidTilt &) {
      // preconditions fail at this size; keep halving
    }
  }
  throw NoAdmissibleTilt("no tilt >= 1e-6 keeps M2 negative");
}

} // namespace conereg
