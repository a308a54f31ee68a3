#include "conereg/holder.hpp"

#include "conereg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conereg {

namespace {

double norm(const Vec2 &v)
{
  return std::hypot(v[0], v[1]);
}

const Vec2 &gradient_of(const HolderSample &s)
{
  if (!s.gradient)
    throw DomainError("first-order Hoelder norms need gradient samples");
  return *s.gradient;
}

void check_spec(const HolderSpec &spec)
{
  if (spec.k != 0 && spec.k != 1)
    throw DomainError("Hoelder order k must be 0 or 1");
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0))
    throw DomainError("Hoelder exponent must lie in (0, 1]");
  if (!std::isfinite(spec.beta))
    throw DomainError("Hoelder weight must be finite");
}

} // namespace

double holder_seminorm(std::span<const HolderSample> samples, const HolderSpec &spec)
{
  check_spec(spec);
  const double weight = std::max(spec.k + spec.alpha + spec.beta, 0.0);
  double best = 0.0;
  for (std::size_t a = 0; a < samples.size(); ++a) {
    const HolderSample &p = samples[a];
    const double dp = norm(p.x);
    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      const HolderSample &q = samples[b];
      const double dist = norm({p.x[0] - q.x[0], p.x[1] - q.x[1]});
      if (dist == 0.0)
        continue;
      double jump;
      if (spec.k == 0) {
        jump = std::abs(p.value - q.value);
      } else {
        const Vec2 &gp = gradient_of(p);
        const Vec2 &gq = gradient_of(q);
        jump = norm({gp[0] - gq[0], gp[1] - gq[1]});
      }
      if (jump == 0.0)
        continue;
      const double d = std::min(dp, norm(q.x));
      const double scale = weight == 0.0 ? 1.0 : std::pow(d, weight);
      best = std::max(best, scale * jump / std::pow(dist, spec.alpha));
    }
  }
  return best;
}

double weighted_sup_norm(std::span<const HolderSample> samples, int k, double beta)
{
  if (k != 0 && k != 1)
    throw DomainError("Hoelder order k must be 0 or 1");
  double total = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double weight = std::max(j + beta, 0.0);
    double best = 0.0;
    for (const auto &s : samples) {
      const double mag = j == 0 ? std::abs(s.value) : norm(gradient_of(s));
      const double scale = weight == 0.0 ? 1.0 : std::pow(norm(s.x), weight);
      best = std::max(best, scale * mag);
    }
    total += best;
  }
  return total;
}

double holder_norm(std::span<const HolderSample> samples, const HolderSpec &spec)
{
  return weighted_sup_norm(samples, spec.k, spec.beta) + holder_seminorm(samples, spec);
}

ProductReport product_inequality_check(std::span<const HolderSample> u,
                                       std::span<const HolderSample> v,
                                       const ProductExponents &e)
{
  const double a = e.alpha;
  if (!(a > 0.0 && a <= 1.0))
    throw HypothesisError("alpha must lie in (0, 1]");
  const double beta = e.beta1 + e.beta2;
  if (std::abs(beta - (e.beta1_prime + e.beta2_prime)) > 1e-12)
    throw HypothesisError("weights must satisfy b1 + b2 = b1' + b2'");
  if (beta < -a)
    throw HypothesisError("total weight must be >= -alpha");
  if (e.beta1 < -a || e.beta2_prime < -a)
    throw HypothesisError("b1 and b2' must be >= -alpha");
  if (e.beta2 < 0.0 || e.beta1_prime < 0.0)
    throw HypothesisError("b2 and b1' must be >= 0");
  if (u.size() != v.size())
    throw DomainError("u and v must be sampled at the same points");

  std::vector<HolderSample> uv(u.size());
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u[n].x != v[n].x)
      throw DomainError("u and v must be sampled at the same points");
    uv[n].x = u[n].x;
    uv[n].value = u[n].value * v[n].value;
  }

  ProductReport report;
  report.lhs = holder_seminorm(uv, {0, a, beta});
  report.rhs = holder_seminorm(u, {0, a, e.beta1}) * weighted_sup_norm(v, 0, e.beta2) +
               weighted_sup_norm(u, 0, e.beta1_prime) * holder_seminorm(v, {0, a, e.beta2_prime});
  // Pairwise bound; allow rounding in the last few bits only.
  report.holds = report.lhs <= report.rhs * (1.0 + 1e-12) + 1e-300;
  return report;
}

InterpolationReport interpolation_check(std::span<const HolderSample> samples,
                                        const HolderSpec &first, const HolderSpec &second,
                                        double theta)
{
  check_spec(first);
  check_spec(second);
  if (!(theta > 0.0 && theta < 1.0))
    throw HypothesisError("interpolation parameter must lie in (0, 1)");
  const double g1 = first.k + first.alpha + first.beta;
  const double g2 = second.k + second.alpha + second.beta;
  if (g1 < 0.0 || g2 < 0.0 || !(std::max(g1, g2) > 0.0))
    throw HypothesisError("need k_j + alpha_j + beta_j >= 0 with at least one positive");

  const double order =
    theta * (first.k + first.alpha) + (1.0 - theta) * (second.k + second.alpha);
  InterpolationReport report;
  report.target.k = static_cast<int>(std::ceil(order - 1e-12)) - 1;
  report.target.alpha = order - report.target.k;
  report.target.beta = theta * first.beta + (1.0 - theta) * second.beta;
  if (report.target.k > 1) {
    std::ostringstream msg;
    msg << "interpolated order " << order << " needs derivatives beyond the first";
    throw HypothesisError(msg.str());
  }

  report.lhs = holder_norm(samples, report.target);
  report.norm1 = holder_norm(samples, first);
  report.norm2 = holder_norm(samples, second);
  const double rhs = std::pow(report.norm1, theta) * std::pow(report.norm2, 1.0 - theta);
  report.empirical_constant = rhs > 0.0 ? report.lhs / rhs : 0.0;
  return report;
}

} // namespace conereg
