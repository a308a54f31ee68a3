#pragma once

#include "conereg/geometry.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace conereg {

// ---------------------------------------------------------------------------
// Angular parts of the gradient of u_a = r^a P_a(cos theta)
// ---------------------------------------------------------------------------

/// (u_a)_{y1} / r^{a-1} = (2a+1) cos(theta) P_a(cos theta) - (a+1) P_{a+1}(cos theta).
double u1(double theta, double alpha);

/// (u_a)_{y2} / r^{a-1}.
double u2(double theta, double alpha);

/// B(theta0, a, s) = cos(s) U1(theta0, a) + sin(s) U2(theta0, a).
double boundary_mismatch(const ConeGeometry &geometry, double alpha, double s);

/// V(theta0, s) = dB/da at a = 0, in closed form.
double slope_at_zero(const ConeGeometry &geometry, double s);

/// Root s0 of V(theta0, .) on the inward-pointing interval, by bisection.
double critical_angle_s0(const ConeGeometry &geometry);

/// Lower end of the exponent search window; excludes the trivial root a = 0.
inline constexpr double kMinExponent = 1e-3;
inline constexpr int kExponentScanPoints = 2000;
inline constexpr double kExponentTolerance = 1e-12;

struct ExponentSearch
{
  std::optional<double> alpha;
  /// Sign changes of the scanned function on the search window.
  int sign_changes = 0;
  /// Function value at the returned root (0 when absent).
  double residual = 0.0;
};

/// Smallest root of B(theta0, ., s) on (kMinExponent, 1) with scan metadata.
ExponentSearch find_critical_exponent(const ConeGeometry &geometry, const ObliqueBC &bc);

/// Smallest root of B(theta0, ., s) on (kMinExponent, 1), if any.
std::optional<double> critical_exponent(const ConeGeometry &geometry, const ObliqueBC &bc);

// ---------------------------------------------------------------------------
// Non-axisymmetric (m = 1) Neumann analogue
// ---------------------------------------------------------------------------

/// W(theta0, a) = d/dz P^1_a at z = cos(theta0).
double neumann_mismatch(const ConeGeometry &geometry, double alpha);

/// Closed form of dW/da at a = 0: cosec^2(theta0) (1 - cos theta0) / sin theta0.
double neumann_slope_at_zero(const ConeGeometry &geometry);

/**
 * Smallest root of W(theta0, .) on (kMinExponent, 1].
 *
 * A value |W(theta0, 1)| <= 1e-12 is accepted as the root a = 1 (the
 * half-space case). Throws BracketError when W keeps its sign.
 */
double neumann_exponent(const ConeGeometry &geometry);

// ---------------------------------------------------------------------------
// Separable solutions r^a P^m_a(cos theta) (C sin(m phi) + D cos(m phi))
// ---------------------------------------------------------------------------

struct SeparableSolution
{
  double alpha = 1.0;
  int mode = 0;
  /// Azimuthal coefficients; ignored for mode 0.
  double c = 0.0;
  double d = 1.0;
};

struct SphericalPoint
{
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

struct SeparableValue
{
  double value = 0.0;
  /// Gradient in the meridian coordinates (y1, y2), azimuthal factor included.
  Vec2 gradient{0.0, 0.0};
};

/// Angular profile P^m_a(cos theta) of the solution.
double separable_profile(const SeparableSolution &sol, double theta);

/// Value and meridian gradient; throws DomainError for r <= 0 or theta outside [0, kMaxOpeningAngle].
SeparableValue separable_eval(const SeparableSolution &sol, const SphericalPoint &point);

// ---------------------------------------------------------------------------
// Regime classification
// ---------------------------------------------------------------------------

enum class RegimeLabel { RegularBarrier, Irregular, AxisContinuous, Unknown };

std::string to_string(RegimeLabel label);

struct Witness
{
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
};

struct RegimeReport
{
  RegimeLabel label = RegimeLabel::Unknown;
  std::optional<double> critical_exponent;
  double s0 = 0.0;
  std::vector<Witness> witnesses;
};

RegimeReport classify_regime(const ConeGeometry &geometry, const ObliqueBC &bc);

// ---------------------------------------------------------------------------
// Axisymmetric reduction of a constant principal part
// ---------------------------------------------------------------------------

struct EllipticityBounds
{
  double lambda = 1.0;
  double Lambda = 1.0;
};

struct ReducedOperator
{
  /// 2x2 principal coefficients a_0^{ij} in (y1, y2).
  Eigen::Matrix2d a0;
  /// Coefficient b_0^{2,1} of the singular term b_0^{2,1} / y2 * d_{y2}.
  double b021 = 0.0;
};

/**
 * Reduces a constant n x n coefficient matrix A^{ij}(0) (axis = last
 * coordinate) to the meridian half-plane, evaluating the x-dependent
 * formulas on the y2-axis x' = (y2, 0, ..., 0).
 *
 * Throws InvalidOperator if A is not symmetric, not invariant under rotations
 * about the axis, or violates the supplied ellipticity bounds.
 */
ReducedOperator reduce_to_axisymmetric(const Eigen::MatrixXd &A, const EllipticityBounds &bounds);

} // namespace conereg
