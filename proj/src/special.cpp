#include "conereg/special.hpp"

#include "conereg/errors.hpp"

#include <cmath>
#include <sstream>

namespace conereg::special {

namespace {

void check_argument(double degree, double z)
{
  if (!std::isfinite(degree) || degree < -1.0) {
    std::ostringstream msg;
    msg << "Legendre degree must be finite and >= -1, got " << degree;
    throw DomainError(msg.str());
  }
  if (!std::isfinite(z) || z <= -1.0 + kArgumentCutoff || z > 1.0) {
    std::ostringstream msg;
    msg << "Legendre argument must lie in (" << -1.0 + kArgumentCutoff
        << ", 1], got " << z;
    throw DomainError(msg.str());
  }
}

} // namespace

double legendre_p(double degree, double z)
{
  check_argument(degree, z);

  const double x = 0.5 * (1.0 - z);
  if (x == 0.0)
    return 1.0;

  // Neumaier-compensated sum; all terms beyond k > degree share one sign, so
  // the compensation mostly matters for the long tails near z = -1.
  double sum = 1.0;
  double compensation = 0.0;
  double magnitude = 1.0;
  double term = 1.0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const double kd = static_cast<double>(k);
    term *= (kd - degree) * (kd + degree + 1.0) / ((kd + 1.0) * (kd + 1.0)) * x;

    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      compensation += (sum - t) + term;
    else
      compensation += (term - t) + sum;
    sum = t;

    magnitude += std::abs(term);
    if (std::abs(term) <= kSeriesTolerance * magnitude)
      return sum + compensation;
  }

  std::ostringstream msg;
  msg << "hypergeometric series for P_" << degree << "(" << z
      << ") did not converge within " << kMaxSeriesTerms << " terms";
  throw NonConvergence(msg.str());
}

double legendre_dp_dz(double degree, double z)
{
  check_argument(degree, z);
  if (z == 1.0)
    throw DomainError("dP/dz identity is singular at z = 1");

  const double p = legendre_p(degree, z);
  const double p_next = legendre_p(degree + 1.0, z);
  return (degree + 1.0) * (z * p - p_next) / ((1.0 - z) * (1.0 + z));
}

double legendre_p1(double degree, double z)
{
  check_argument(degree, z);
  if (z == 1.0)
    return 0.0;
  return -std::sqrt((1.0 - z) * (1.0 + z)) * legendre_dp_dz(degree, z);
}

double legendre_dp_dalpha(double degree, double z, double step)
{
  if (!(step > 0.0))
    throw DomainError("degree step must be positive");
  if (degree - step < -1.0)
    throw DomainError("degree - step must be >= -1");
  return (legendre_p(degree + step, z) - legendre_p(degree - step, z)) / (2.0 * step);
}

} // namespace conereg::special
