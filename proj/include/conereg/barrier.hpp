#pragma once

#include "conereg/exponent.hpp"
#include "conereg/geometry.hpp"

#include <Eigen/Core>

namespace conereg {

/**
 * Miller barrier v_a = r^a F_a(theta) for the Laplacian, with the exactly
 * harmonic profile F_a(theta) = P_a(cos theta).
 *
 * Instances are only produced by build_barrier, which certifies
 * c* <= F_a <= 1 and F_a' < 0 on (0, theta0].
 */
class MillerBarrier
{
public:
  double alpha() const { return alpha_; }
  double theta0() const { return theta0_; }
  /// c* = F_a(theta0).
  double cstar() const { return cstar_; }

  double profile(double theta) const;
  /// F_a'(theta) = -sin(theta) P_a'(cos theta); zero on the axis.
  double profile_derivative(double theta) const;
  double value(double r, double theta) const;

private:
  friend MillerBarrier build_barrier(const ConeGeometry &, double);
  MillerBarrier(double alpha, double theta0, double cstar)
    : alpha_(alpha), theta0_(theta0), cstar_(cstar)
  {
  }

  double alpha_;
  double theta0_;
  double cstar_;
};

/// Smallest a in (0, 1] with P_a(cos theta0) = 0, or 1 if P_a(cos theta0) stays positive.
double alpha0(const ConeGeometry &geometry);

/// Throws InvalidAlpha if alpha is not in (0, alpha0) or the profile checks fail.
MillerBarrier build_barrier(const ConeGeometry &geometry, double alpha);

struct RotatedCoefficients
{
  /// a~ = J a0 J^T with J = [[beta1, beta2], [nu2, -nu1]].
  Eigen::Matrix2d atilde;
  double obliqueness = 1.0;
  double b021 = 0.0;
};

/**
 * Principal coefficients in the (z1, z2) coordinates attached to beta0 and
 * the cone tangent. Checks that a0 is symmetric with eigenvalues in
 * [lambda, Lambda] and that lambda <= a~11, a~22 <= Lambda (the rows of J are
 * unit vectors); throws InvalidOperator otherwise.
 */
RotatedCoefficients rotate_coefficients(const ReducedOperator &op, const ObliqueBC &bc,
                                        const EllipticityBounds &bounds);

/// Overload taking the bounds from the eigenvalues of a0.
RotatedCoefficients rotate_coefficients(const ReducedOperator &op, const ObliqueBC &bc);

/**
 * Closed-form coefficient c with M1 v_a = c r^{a-1} on the lateral boundary,
 * given the profile values F = F_a(theta0) and dF = F_a'(theta0).
 */
double m1_coefficient(double alpha, double F, double dF, const ObliqueBC &bc,
                      const RotatedCoefficients &rc);
double m1_coefficient(const MillerBarrier &barrier, const ObliqueBC &bc,
                      const RotatedCoefficients &rc);

/// r^{a-1} coefficient of the tilted operator M2; equals m1_coefficient at tilt 0.
double m2_coefficient(double alpha, double F, double dF, const ObliqueBC &bc,
                      const RotatedCoefficients &rc, double tilt);
double m2_coefficient(const MillerBarrier &barrier, const ObliqueBC &bc,
                      const RotatedCoefficients &rc, double tilt);

inline constexpr double kMinTilt = 1e-6;

/**
 * Largest tilt in the dyadic sequence 1, 1/2, 1/4, ... (down to kMinTilt)
 * that keeps nu1 + tilt nu2 > 0, sign(beta2 - tilt beta1) = sign(beta2) and
 * m2_coefficient < 0. Throws NoAdmissibleTilt if none qualifies or if
 * m1_coefficient is not negative.
 */
double max_admissible_tilt(const ObliqueBC &bc, const MillerBarrier &barrier,
                           const RotatedCoefficients &rc);

} // namespace conereg
