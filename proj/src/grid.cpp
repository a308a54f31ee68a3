#include "conereg/grid.hpp"

#include "conereg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace conereg {

namespace {

std::vector<double> uniform_nodes(double lo, double hi, int n)
{
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    nodes[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  nodes.back() = hi;
  return nodes;
}

} // namespace

SectorGrid SectorGrid::make(double r_min, double r_max, int n_r, int n_theta, double grading,
                            double theta0, int mode)
{
  if (!(r_min > 0.0 && r_max > r_min) || !std::isfinite(r_max))
    throw DomainError("sector grid needs 0 < r_min < r_max");
  if (n_r < 3 || n_theta < 3)
    throw DomainError("sector grid needs at least 3 nodes per direction");
  if (!(grading >= 1.0) || !std::isfinite(grading))
    throw DomainError("radial grading must be >= 1");
  if (!(theta0 > 0.0 && theta0 < std::numbers::pi))
    throw DomainError("sector opening angle must lie in (0, pi)");
  if (mode != 0 && mode != 1)
    throw DomainError("azimuthal mode must be 0 or 1");

  SectorGrid grid;
  grid.grading_ = grading;
  grid.mode_ = mode;
  grid.theta_ = uniform_nodes(0.0, theta0, n_theta);

  const double steps = static_cast<double>(n_r - 1);
  if (grading == 1.0) {
    grid.r_ = uniform_nodes(r_min, r_max, n_r);
  } else {
    // r_i = r_min + L (q^i - 1) / (q^{n-1} - 1)
    grid.r_.resize(static_cast<std::size_t>(n_r));
    const double total = std::expm1(steps * std::log(grading));
    for (int i = 0; i < n_r; ++i) {
      const double frac = std::expm1(static_cast<double>(i) * std::log(grading)) / total;
      grid.r_[static_cast<std::size_t>(i)] = r_min + (r_max - r_min) * frac;
    }
    grid.r_.front() = r_min;
    grid.r_.back() = r_max;
  }
  return grid;
}

SectorGrid SectorGrid::log_spaced(double r_min, double r_max, int n_r, int n_theta,
                                  double theta0, int mode)
{
  if (!(r_min > 0.0 && r_max > r_min))
    throw DomainError("sector grid needs 0 < r_min < r_max");
  if (n_r < 3)
    throw DomainError("sector grid needs at least 3 nodes per direction");
  const double q = std::pow(r_max / r_min, 1.0 / static_cast<double>(n_r - 1));
  SectorGrid grid = make(r_min, r_max, n_r, n_theta, q, theta0, mode);
  for (int i = 1; i + 1 < n_r; ++i)
    grid.r_[static_cast<std::size_t>(i)] =
      r_min * std::exp(std::log(r_max / r_min) * static_cast<double>(i) / (n_r - 1));
  return grid;
}

SectorGrid SectorGrid::standard(double r_max, int n_theta, double theta0, int mode)
{
  const double r_min = 1e-3 * r_max;
  const int n_r = 1 + static_cast<int>(std::ceil(std::log(r_max / r_min) / std::log(1.05)));
  return log_spaced(r_min, r_max, n_r, n_theta, theta0, mode);
}

SectorGrid SectorGrid::refined() const
{
  SectorGrid fine = make(r_min(), r_max(), 2 * n_r() - 1, 2 * n_theta() - 1,
                         std::sqrt(grading_), theta0(), mode_);
  // Keep the coarse nodes bit-identical so fields can be compared node by node.
  for (int i = 0; i < n_r(); ++i)
    fine.r_[static_cast<std::size_t>(2 * i)] = r_[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < n_r(); ++i) {
    const std::size_t k = static_cast<std::size_t>(2 * i + 1);
    const double lo = r_[static_cast<std::size_t>(i)];
    const double hi = r_[static_cast<std::size_t>(i + 1)];
    // Split each step in the ratio 1 : sqrt(q) of the refined progression.
    const double sq = std::sqrt(grading_);
    fine.r_[k] = lo + (hi - lo) / (1.0 + sq);
  }
  for (int j = 0; j < n_theta(); ++j)
    fine.theta_[static_cast<std::size_t>(2 * j)] = theta_[static_cast<std::size_t>(j)];
  return fine;
}

double DiscreteField::min() const
{
  return *std::min_element(values.begin(), values.end());
}

double DiscreteField::max_abs() const
{
  double m = 0.0;
  for (double v : values)
    m = std::max(m, std::abs(v));
  return m;
}

void write_csv(const DiscreteField &field, std::ostream &out)
{
  out << "r,theta,value\n";
  char buf[96];
  for (int i = 0; i < field.grid.n_r(); ++i) {
    for (int j = 0; j < field.grid.n_theta(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", field.grid.r(i), field.grid.theta(j),
                    field.at(i, j));
      out << buf;
    }
  }
}

} // namespace conereg
