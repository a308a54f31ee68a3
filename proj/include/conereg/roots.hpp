#pragma once

#include <cmath>
#include <functional>
#include <optional>

namespace conereg::roots {

/// Bisection on [lo, hi] with f(lo) f(hi) <= 0 until the bracket is below tol.
double bisect(const std::function<double(double)> &f, double lo, double hi, double f_lo,
              double tol);

struct ScanResult
{
  /// Smallest root located, if any sign change occurred.
  std::optional<double> root;
  /// Number of grid cells on which f changed sign (or hit zero).
  int sign_changes = 0;
};

/**
 * Scans f on `points` uniformly spaced values of [lo, hi] and refines the
 * first sign change by bisection. An exact zero at an interior grid value
 * counts as a root; zeros exactly at `hi` are only reported when
 * `include_hi` is set.
 */
ScanResult scan_for_root(const std::function<double(double)> &f, double lo, double hi,
                         int points, double tol, bool include_hi = false);

} // namespace conereg::roots
