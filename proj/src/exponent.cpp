#include "conereg/exponent.hpp"

#include "conereg/errors.hpp"
#include "conereg/roots.hpp"
#include "conereg/special.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace conereg {

using special::legendre_p;
using special::legendre_p1;

namespace {

void check_angle(double theta)
{
  if (!(theta > 0.0 && theta < kMaxOpeningAngle)) {
    std::ostringstream msg;
    msg << "polar angle must lie in (0, " << kMaxOpeningAngle << "), got " << theta;
    throw DomainError(msg.str());
  }
}

void check_degree(double alpha, double lo, double hi)
{
  if (!(alpha >= lo && alpha <= hi)) {
    std::ostringstream msg;
    msg << "degree must lie in [" << lo << ", " << hi << "], got " << alpha;
    throw DomainError(msg.str());
  }
}

void check_oblique_angle(const ConeGeometry &geometry, double s)
{
  if (!std::isfinite(s) || !geometry.admits(s)) {
    std::ostringstream msg;
    msg << "oblique angle s must lie in (" << geometry.min_oblique_angle() << ", "
        << geometry.max_oblique_angle() << "), got " << s;
    throw DomainError(msg.str());
  }
}

// d/dz P^1_a(z) from the degree-raising identity; z in the open interval.
double dp1_dz(double alpha, double z)
{
  return ((alpha + 1.0) * z * legendre_p1(alpha, z) - alpha * legendre_p1(alpha + 1.0, z)) /
         ((1.0 - z) * (1.0 + z));
}

} // namespace

double u1(double theta, double alpha)
{
  check_angle(theta);
  check_degree(alpha, 0.0, 2.0);
  const double c = std::cos(theta);
  return (2.0 * alpha + 1.0) * c * legendre_p(alpha, c) -
         (alpha + 1.0) * legendre_p(alpha + 1.0, c);
}

double u2(double theta, double alpha)
{
  check_angle(theta);
  check_degree(alpha, 0.0, 2.0);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cot = c / s;
  return s * (alpha - (alpha + 1.0) * cot * cot) * legendre_p(alpha, c) +
         (alpha + 1.0) * cot * legendre_p(alpha + 1.0, c);
}

double boundary_mismatch(const ConeGeometry &geometry, double alpha, double s)
{
  check_degree(alpha, 0.0, 1.0);
  check_oblique_angle(geometry, s);
  const double theta0 = geometry.theta0();
  return std::cos(s) * u1(theta0, alpha) + std::sin(s) * u2(theta0, alpha);
}

double slope_at_zero(const ConeGeometry &geometry, double s)
{
  // The endpoint s = -pi + theta0 is accepted so the bracket of V is closed.
  if (!std::isfinite(s) || s < geometry.min_oblique_angle() || s > geometry.max_oblique_angle())
    check_oblique_angle(geometry, s);
  const double theta0 = geometry.theta0();
  return std::cos(s) + std::sin(s) * (1.0 - std::cos(theta0)) / std::sin(theta0);
}

double critical_angle_s0(const ConeGeometry &geometry)
{
  const double lo = geometry.min_oblique_angle();
  const double hi = geometry.max_oblique_angle();
  const auto v = [&](double s) { return slope_at_zero(geometry, s); };
  const double v_lo = v(lo);
  const double v_hi = v(hi);
  if (!(v_lo < 0.0 && v_hi > 0.0)) {
    std::ostringstream msg;
    msg << "V(theta0, s) does not change sign on the oblique interval (V(lo)=" << v_lo
        << ", V(hi)=" << v_hi << ")";
    throw BracketError(msg.str());
  }
  return roots::bisect(v, lo, hi, v_lo, 1e-14);
}

ExponentSearch find_critical_exponent(const ConeGeometry &geometry, const ObliqueBC &bc)
{
  const double s = bc.angle();
  const auto b = [&](double alpha) { return boundary_mismatch(geometry, alpha, s); };
  const auto scan =
    roots::scan_for_root(b, kMinExponent, 1.0, kExponentScanPoints, kExponentTolerance);

  ExponentSearch result;
  result.sign_changes = scan.sign_changes;
  if (scan.root) {
    result.alpha = *scan.root;
    result.residual = b(*scan.root);
  }
  return result;
}

std::optional<double> critical_exponent(const ConeGeometry &geometry, const ObliqueBC &bc)
{
  return find_critical_exponent(geometry, bc).alpha;
}

double neumann_mismatch(const ConeGeometry &geometry, double alpha)
{
  check_degree(alpha, 0.0, 1.0);
  return dp1_dz(alpha, std::cos(geometry.theta0()));
}

double neumann_slope_at_zero(const ConeGeometry &geometry)
{
  const double sn = std::sin(geometry.theta0());
  return (1.0 - std::cos(geometry.theta0())) / (sn * sn * sn);
}

double neumann_exponent(const ConeGeometry &geometry)
{
  const auto w = [&](double alpha) { return neumann_mismatch(geometry, alpha); };
  const auto scan =
    roots::scan_for_root(w, kMinExponent, 1.0, kExponentScanPoints, kExponentTolerance, true);
  if (scan.root)
    return *scan.root;
  if (std::abs(w(1.0)) <= 1e-12)
    return 1.0;

  std::ostringstream msg;
  msg << "W(theta0, .) has no sign change on (" << kMinExponent << ", 1] for theta0 = "
      << geometry.theta0();
  throw BracketError(msg.str());
}

double separable_profile(const SeparableSolution &sol, double theta)
{
  const double z = std::cos(theta);
  return sol.mode == 0 ? legendre_p(sol.alpha, z) : legendre_p1(sol.alpha, z);
}

SeparableValue separable_eval(const SeparableSolution &sol, const SphericalPoint &point)
{
  if (sol.mode != 0 && sol.mode != 1)
    throw DomainError("azimuthal mode must be 0 or 1");
  check_degree(sol.alpha, 0.0, 2.0);
  if (!(point.r > 0.0))
    throw DomainError("radius must be positive");
  if (!(point.theta >= 0.0 && point.theta < kMaxOpeningAngle))
    throw DomainError("polar angle outside [0, pi - 0.045)");

  const double alpha = sol.alpha;
  const double theta = point.theta;
  const double ra = std::pow(point.r, alpha);
  const double ra1 = ra / point.r;

  SeparableValue out;
  if (sol.mode == 0) {
    out.value = ra * legendre_p(alpha, std::cos(theta));
    if (theta == 0.0)
      out.gradient = {ra1 * alpha, 0.0};
    else
      out.gradient = {ra1 * u1(theta, alpha), ra1 * u2(theta, alpha)};
    return out;
  }

  const double azimuthal = sol.c * std::sin(point.phi) + sol.d * std::cos(point.phi);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double profile = legendre_p1(alpha, c);
  // Theta'(theta) = -sin(theta) dP^1/dz; at the axis the limit is -a(a+1)/2.
  const double dprofile = (theta == 0.0) ? -0.5 * alpha * (alpha + 1.0) : -s * dp1_dz(alpha, c);
  out.value = ra * profile * azimuthal;
  out.gradient = {ra1 * (alpha * c * profile - s * dprofile) * azimuthal,
                  ra1 * (alpha * s * profile + c * dprofile) * azimuthal};
  return out;
}

std::string to_string(RegimeLabel label)
{
  switch (label) {
  case RegimeLabel::RegularBarrier:
    return "REGULAR_BARRIER";
  case RegimeLabel::Irregular:
    return "IRREGULAR";
  case RegimeLabel::AxisContinuous:
    return "AXIS_CONTINUOUS";
  case RegimeLabel::Unknown:
    return "UNKNOWN";
  }
  return "UNKNOWN";
}

RegimeReport classify_regime(const ConeGeometry &geometry, const ObliqueBC &bc)
{
  const double s = bc.angle();
  RegimeReport report;
  report.s0 = critical_angle_s0(geometry);

  const double product = std::cos(s) * std::sin(s);
  const ExponentSearch search = find_critical_exponent(geometry, bc);

  report.witnesses.push_back({"s0", report.s0, 1e-10});
  report.witnesses.push_back({"V", slope_at_zero(geometry, s), 0.0});
  report.witnesses.push_back({"B_at_1", boundary_mismatch(geometry, 1.0, s), 1e-10});
  report.witnesses.push_back({"cos_s_sin_s", product, 0.0});
  report.witnesses.push_back({"sign_changes", static_cast<double>(search.sign_changes), 0.0});
  if (search.alpha) {
    report.witnesses.push_back({"alpha", *search.alpha, kExponentTolerance});
    report.witnesses.push_back({"B_at_alpha", search.residual, 1e-10});
  }

  const bool barrier_hypothesis = product > 0.0;
  if (search.alpha) {
    report.critical_exponent = search.alpha;
    // A root where the barrier argument applies would be a numerical inconsistency.
    report.label = (barrier_hypothesis || s == 0.0) ? RegimeLabel::Unknown : RegimeLabel::Irregular;
  } else if (s == 0.0) {
    report.label = RegimeLabel::AxisContinuous;
  } else if (barrier_hypothesis) {
    report.label = RegimeLabel::RegularBarrier;
  } else {
    report.label = RegimeLabel::Unknown;
  }
  return report;
}

ReducedOperator reduce_to_axisymmetric(const Eigen::MatrixXd &A, const EllipticityBounds &bounds)
{
  const Eigen::Index n = A.rows();
  if (A.cols() != n || n < 3)
    throw InvalidOperator("coefficient matrix must be square of size n >= 3");
  if (!(bounds.lambda > 0.0 && bounds.Lambda >= bounds.lambda))
    throw InvalidOperator("ellipticity bounds must satisfy 0 < lambda <= Lambda");

  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol)
    throw InvalidOperator("coefficient matrix is not symmetric");

  // Invariance under rotations about the x_n axis: no mixing with the axis and
  // an isotropic block transverse to it.
  const Eigen::Index m = n - 1;
  const double kappa = A(0, 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(A(i, m)) > tol)
      throw InvalidOperator("coefficients couple the axis to transverse directions");
    for (Eigen::Index j = 0; j < m; ++j) {
      const double expected = (i == j) ? kappa : 0.0;
      if (std::abs(A(i, j) - expected) > tol)
        throw InvalidOperator("transverse block is not invariant under rotations about the axis");
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < bounds.lambda - tol || hi > bounds.Lambda + tol) {
    std::ostringstream msg;
    msg << "eigenvalues [" << lo << ", " << hi << "] violate ellipticity bounds ["
        << bounds.lambda << ", " << bounds.Lambda << "]";
    throw InvalidOperator(msg.str());
  }

  // x' = (y2, 0, ..., 0): x_i / y2 = delta_{i1}.
  ReducedOperator out;
  out.a0(0, 0) = A(m, m);
  out.a0(0, 1) = out.a0(1, 0) = A(0, m);
  out.a0(1, 1) = A(0, 0);
  // sum_{i<n} A^{ii} - A^{ij} x_i x_j / y2^2 drops the i = j = 1 term.
  out.b021 = 0.0;
  for (Eigen::Index i = 1; i < m; ++i)
    out.b021 += A(i, i);

  const double dims = static_cast<double>(n - 2);
  if (out.b021 < dims * bounds.lambda - tol || out.b021 > dims * bounds.Lambda + tol)
    throw InvalidOperator("singular coefficient b^{2,1} outside [(n-2) lambda, (n-2) Lambda]");
  return out;
}

} // namespace conereg
