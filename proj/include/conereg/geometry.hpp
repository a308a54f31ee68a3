#pragma once

#include <array>
#include <numbers>

namespace conereg {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2 &a, const Vec2 &b) { return a[0] * b[0] + a[1] * b[1]; }

/// Largest admissible opening angle; keeps cos(theta0) inside the Legendre cutoff.
inline constexpr double kMaxOpeningAngle = std::numbers::pi - 0.045;

/**
 * Circular cone {0 <= theta < theta0} truncated at radius R in R^n.
 *
 * The meridian half-plane uses y1 = r cos(theta) along the axis and
 * y2 = r sin(theta) >= 0 as the distance to it.
 */
class ConeGeometry
{
public:
  /// Throws DomainError unless 0 < theta0 < kMaxOpeningAngle, R > 0, n >= 3.
  explicit ConeGeometry(double theta0, double radius = 1.0, int dimension = 3);

  double theta0() const { return theta0_; }
  double radius() const { return radius_; }
  int dimension() const { return dimension_; }

  /// Open interval (-pi + theta0, theta0) of inward-pointing oblique angles.
  double min_oblique_angle() const { return -std::numbers::pi + theta0_; }
  double max_oblique_angle() const { return theta0_; }
  bool admits(double s) const { return s > min_oblique_angle() && s < max_oblique_angle(); }

  /// Inward unit normal (sin theta0, -cos theta0) of the lateral boundary.
  Vec2 inward_normal() const;
  /// Unit tangent (nu2, -nu1) of the lateral boundary, pointing to the vertex.
  Vec2 tangent() const;

private:
  double theta0_;
  double radius_;
  int dimension_;
};

/**
 * Constant oblique vector beta0 = (cos s, sin s) on the lateral boundary.
 */
class ObliqueBC
{
public:
  /// Throws DomainError unless s lies in the open inward-pointing interval.
  ObliqueBC(const ConeGeometry &geometry, double s);

  double angle() const { return s_; }
  const Vec2 &beta() const { return beta_; }
  const Vec2 &normal() const { return nu_; }
  const Vec2 &tangent() const { return tau_; }
  /// beta0 . nu = sin(theta0 - s) > 0.
  double obliqueness() const { return obliqueness_; }

private:
  double s_;
  Vec2 beta_;
  Vec2 nu_;
  Vec2 tau_;
  double obliqueness_;
};

} // namespace conereg
