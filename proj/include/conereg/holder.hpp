#pragma once

#include "conereg/geometry.hpp"

#include <optional>
#include <span>

namespace conereg {

/// Point of the meridian half-plane with a value and, for k = 1 norms, a gradient.
struct HolderSample
{
  Vec2 x{0.0, 0.0};
  double value = 0.0;
  std::optional<Vec2> gradient;
};

/// Order k, Hoelder exponent alpha and vertex weight beta of a weighted norm.
struct HolderSpec
{
  int k = 0;
  double alpha = 1.0;
  double beta = 0.0;
};

/**
 * Discrete weighted seminorm
 *   max over pairs of d^{max(k + alpha + beta, 0)} |D^k u(x1) - D^k u(x2)| / |x1 - x2|^alpha
 * with d = min(|x1|, |x2|). Coincident points are skipped. Exact over the sample.
 */
double holder_seminorm(std::span<const HolderSample> samples, const HolderSpec &spec);

/// sum_{j <= k} max_x d^{max(j + beta, 0)} |D^j u(x)|.
double weighted_sup_norm(std::span<const HolderSample> samples, int k, double beta);

/// weighted_sup_norm(k, beta) + holder_seminorm(spec).
double holder_norm(std::span<const HolderSample> samples, const HolderSpec &spec);

// ---------------------------------------------------------------------------
// Product and interpolation inequalities
// ---------------------------------------------------------------------------

struct ProductExponents
{
  double alpha = 0.5;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta1_prime = 0.0;
  double beta2_prime = 0.0;
};

struct ProductReport
{
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/**
 * Evaluates [uv]^{(b)} against [u]^{(b1)} |v|^{(b2)} + |u|^{(b1')} [v]^{(b2')}
 * on samples of u and v at the same points, b = b1 + b2. Throws
 * HypothesisError if the exponents violate the hypotheses of the inequality
 * and DomainError if the two sample sets do not share their points.
 */
ProductReport product_inequality_check(std::span<const HolderSample> u,
                                       std::span<const HolderSample> v,
                                       const ProductExponents &exponents);

struct InterpolationReport
{
  /// Derived target norm: k + alpha = t (k1 + a1) + (1 - t)(k2 + a2), beta likewise.
  HolderSpec target;
  double lhs = 0.0;
  double norm1 = 0.0;
  double norm2 = 0.0;
  /// lhs / (norm1^t norm2^(1 - t)).
  double empirical_constant = 0.0;
};

InterpolationReport interpolation_check(std::span<const HolderSample> samples,
                                        const HolderSpec &first, const HolderSpec &second,
                                        double theta);

} // namespace conereg
