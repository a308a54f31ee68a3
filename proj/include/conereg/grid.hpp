#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace conereg {

/**
 * Tensor grid on the annular sector r_min <= r <= r_max, 0 <= theta <= theta0
 * of the meridian half-plane.
 *
 * Radial steps form a geometric progression h_{i+1} = grading * h_i growing
 * away from r_min (grading = 1 gives uniform spacing); polar nodes are
 * uniform. Node (i, j) has index i * n_theta + j. Edges: i = 0 and
 * i = n_r - 1 are the inner and outer arcs, j = 0 the symmetry axis and
 * j = n_theta - 1 the lateral cone boundary.
 */
class SectorGrid
{
public:
  /// Throws DomainError on inconsistent parameters (node counts must be >= 3).
  static SectorGrid make(double r_min, double r_max, int n_r, int n_theta, double grading,
                         double theta0, int mode = 0);

  /// Geometric nodes r_i = r_min (r_max / r_min)^{i / (n_r - 1)}.
  static SectorGrid log_spaced(double r_min, double r_max, int n_r, int n_theta, double theta0,
                               int mode = 0);

  /**
   * Default verification grid: r_min = 1e-3 r_max and radial grading of at
   * most 1.05 with geometric nodes.
   */
  static SectorGrid standard(double r_max, int n_theta, double theta0, int mode = 0);

  /// Halves every step: n -> 2n - 1 nodes per direction, grading -> sqrt(grading).
  SectorGrid refined() const;

  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  int n_r() const { return static_cast<int>(r_.size()); }
  int n_theta() const { return static_cast<int>(theta_.size()); }
  std::size_t size() const { return r_.size() * theta_.size(); }
  double grading() const { return grading_; }
  double theta0() const { return theta_.back(); }
  double theta_step() const { return theta_[1] - theta_[0]; }
  int mode() const { return mode_; }

  double r(int i) const { return r_[static_cast<std::size_t>(i)]; }
  double theta(int j) const { return theta_[static_cast<std::size_t>(j)]; }
  const std::vector<double> &r_nodes() const { return r_; }
  const std::vector<double> &theta_nodes() const { return theta_; }

  std::size_t index(int i, int j) const
  {
    return static_cast<std::size_t>(i) * theta_.size() + static_cast<std::size_t>(j);
  }

private:
  SectorGrid() = default;

  std::vector<double> r_;
  std::vector<double> theta_;
  double grading_ = 1.0;
  int mode_ = 0;
};

/// Nodal values on a SectorGrid.
struct DiscreteField
{
  SectorGrid grid;
  std::vector<double> values;

  explicit DiscreteField(SectorGrid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

  double &at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
  double min() const;
  double max_abs() const;
};

/// Writes "r,theta,value" rows with 17 significant digits and LF endings.
void write_csv(const DiscreteField &field, std::ostream &out);

} // namespace conereg
