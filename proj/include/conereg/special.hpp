#pragma once

// Legendre functions of real degree on the cut (-1, 1].
//
// P_a(z) is evaluated from the Gauss hypergeometric series
//   P_a(z) = 2F1(-a, a + 1; 1; (1 - z) / 2),
// which converges for every z in the supported domain. The associated
// function of order one uses the Ferrers convention with the Condon-Shortley
// phase, P^1_a(z) = -(1 - z^2)^{1/2} dP_a/dz.

namespace conereg::special {

/// Arguments must satisfy z > -1 + kArgumentCutoff.
inline constexpr double kArgumentCutoff = 1e-3;

/// Series terms are summed until |term| <= kSeriesTolerance * sum_k |term_k|.
inline constexpr double kSeriesTolerance = 1e-16;

/// Hard cap on the number of series terms.
inline constexpr int kMaxSeriesTerms = 100000;

/// Default step of the degree finite difference.
inline constexpr double kDefaultDegreeStep = 1e-5;

/**
 * Legendre function P_a(z) of real degree a >= -1.
 *
 * Throws DomainError when z is outside (-1 + kArgumentCutoff, 1] or the degree
 * is not finite or below -1, and NonConvergence when the series does not
 * settle within kMaxSeriesTerms.
 */
double legendre_p(double degree, double z);

/// dP_a/dz from (a + 1)(z P_a(z) - P_{a+1}(z)) / (1 - z^2); requires z < 1.
double legendre_dp_dz(double degree, double z);

/// P^1_a(z) = -(1 - z^2)^{1/2} dP_a/dz, with P^1_a(1) = 0.
double legendre_p1(double degree, double z);

/// Central difference (P_{a+h}(z) - P_{a-h}(z)) / (2h) in the degree.
double legendre_dp_dalpha(double degree, double z, double step = kDefaultDegreeStep);

} // namespace conereg::special
