#include "conereg/roots.hpp"

#include "conereg/errors.hpp"

namespace conereg::roots {

double bisect(const std::function<double(double)> &f, double lo, double hi, double f_lo,
              double tol)
{
  if (f_lo == 0.0)
    return lo;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double f_mid = f(mid);
    if (f_mid == 0.0)
      return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScanResult scan_for_root(const std::function<double(double)> &f, double lo, double hi,
                         int points, double tol, bool include_hi)
{
  if (points < 2 || !(hi > lo))
    throw DomainError("root scan needs at least two points on a non-empty interval");

  ScanResult result;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  double a_prev = lo;
  double f_prev = f(lo);
  if (f_prev == 0.0) {
    result.root = lo;
    result.sign_changes = 1;
  }
  for (int i = 1; i < points; ++i) {
    const double a = (i == points - 1) ? hi : lo + step * static_cast<double>(i);
    const double f_a = f(a);
    const bool at_end = (i == points - 1);
    bool changed = false;
    if (f_a == 0.0) {
      if (!at_end || include_hi)
        changed = true;
    } else if (f_prev != 0.0 && (f_prev < 0.0) != (f_a < 0.0)) {
      changed = true;
    }
    if (changed) {
      ++result.sign_changes;
      if (!result.root)
        result.root = (f_a == 0.0) ? a : bisect(f, a_prev, a, f_prev, tol);
    }
    a_prev = a;
    f_prev = f_a;
  }
  return result;
}

} // namespace conereg::roots
