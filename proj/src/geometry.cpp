#include "conereg/geometry.hpp"

#include "conereg/errors.hpp"

#include <cmath>
#include <sstream>

namespace conereg {

ConeGeometry::ConeGeometry(double theta0, double radius, int dimension)
  : theta0_(theta0), radius_(radius), dimension_(dimension)
{
  if (!(theta0 > 0.0 && theta0 < kMaxOpeningAngle)) {
    std::ostringstream msg;
    msg << "opening angle must lie in (0, " << kMaxOpeningAngle << "), got " << theta0;
    throw DomainError(msg.str());
  }
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("cone radius must be positive and finite");
  if (dimension < 3)
    throw DomainError("ambient dimension must be at least 3");
}

Vec2 ConeGeometry::inward_normal() const
{
  return {std::sin(theta0_), -std::cos(theta0_)};
}

Vec2 ConeGeometry::tangent() const
{
  const Vec2 nu = inward_normal();
  return {nu[1], -nu[0]};
}

ObliqueBC::ObliqueBC(const ConeGeometry &geometry, double s) : s_(s)
{
  if (!std::isfinite(s) || !geometry.admits(s)) {
    std::ostringstream msg;
    msg << "oblique angle s must lie in (" << geometry.min_oblique_angle() << ", "
        << geometry.max_oblique_angle() << "), got " << s;
    throw DomainError(msg.str());
  }
  beta_ = {std::cos(s), std::sin(s)};
  nu_ = geometry.inward_normal();
  tau_ = geometry.tangent();
  obliqueness_ = dot(beta_, nu_);
  if (!(obliqueness_ > 0.0))
    throw DomainError("oblique vector is tangential to the cone");
}

} // namespace conereg
