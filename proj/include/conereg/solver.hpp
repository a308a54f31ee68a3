#pragma once

#include "conereg/exponent.hpp"
#include "conereg/grid.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace conereg {

// ---------------------------------------------------------------------------
// Discrete spherical Laplacian
// ---------------------------------------------------------------------------
//
// At an interior node the operator
//   u_rr + (2/r) u_r + (u_tt + cot(t) u_t - m^2 u / sin^2 t) / r^2
// is discretised with second-order three-point differences. Radial
// differences use the non-uniform stencil. For m = 0 the polar differences
// are fitted to {1, cos, sin} (denominators 4 sin^2(k/2) and 2 sin k), so
// first-degree harmonics are reproduced exactly, and the axis row uses the
// reflected ghost node with cot(t) u_t -> u_tt. For m = 1 the polar part is
// written for w = u / sin(t), which is even and smooth across the axis:
//   u_tt + cot u_t - u / sin^2 = sin(t) (w_tt + 3 cot(t) w_t - 2 w),
// with the axis value of w eliminated by the even extrapolation
// w_0 = (4 w_1 - w_2) / 3; the axis itself carries u = 0.

struct StencilEntry
{
  std::size_t index;
  double weight;
};

/// Stencil of the unscaled discrete Laplacian at a PDE node.
std::vector<StencilEntry> laplacian_stencil(const SectorGrid &grid, int i, int j);

/// True when (i, j) carries the discrete PDE (not a boundary or axis-Dirichlet row).
bool is_pde_node(const SectorGrid &grid, int i, int j);

struct LaplacianResidual
{
  DiscreteField field;
  double max_abs = 0.0;
};

/**
 * Applies the discrete Laplacian to the exact nodal values r^a P^m_a(cos t)
 * of a separable solution (azimuthal factor 1) and returns the residual at
 * PDE nodes (zero elsewhere). The mode of the grid must match the solution.
 */
LaplacianResidual laplacian_residual(const SeparableSolution &sol, const SectorGrid &grid);

/// Nodal values u(r, theta) on every node of the grid.
DiscreteField sample_field(const SectorGrid &grid, const std::function<double(double, double)> &u);

/// Exact nodal values r^a P^m_a(cos t) of a separable solution (azimuthal factor 1).
DiscreteField sample_separable(const SeparableSolution &sol, const SectorGrid &grid);

/// Discrete Laplacian of a field at PDE nodes, zero elsewhere.
LaplacianResidual apply_laplacian(const DiscreteField &field);

/// log2(coarse / fine) for a mesh-halving study.
double observed_order(double coarse_error, double fine_error);

// ---------------------------------------------------------------------------
// Boundary configuration and linear solves
// ---------------------------------------------------------------------------

enum class ObliqueStencil {
  /// One-sided second-order polar difference, centred radial difference.
  SecondOrder,
  /// First-order differences taken along beta; gives a monotone boundary row.
  Upwind,
};

struct BoundaryConfig
{
  /// Oblique angle s on the lateral edge; Dirichlet data there when absent.
  std::optional<double> oblique_angle;
  ObliqueStencil oblique_stencil = ObliqueStencil::SecondOrder;
};

struct DirichletData
{
  /// Values on the inner arc r = r_min, as a function of theta.
  std::function<double(double)> inner;
  /// Values on the outer arc r = r_max, as a function of theta.
  std::function<double(double)> outer;
  /// Values on the lateral edge as a function of r (used when not oblique).
  std::function<double(double)> cone;
};

/// Dirichlet data sampled from a function of (r, theta) on every Dirichlet edge.
DirichletData dirichlet_from(const std::function<double(double, double)> &u,
                             const SectorGrid &grid);

struct LinearSystem
{
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

/**
 * Assembles the full nodal system: PDE rows -r^2 L_h u = -r^2 f, oblique
 * rows -r beta.Du = 0, identity rows for Dirichlet and axis nodes. Every row
 * is then divided by its diagonal entry. `source` holds the
 * right-hand side of Delta u = f at every node (empty means zero).
 */
LinearSystem assemble_system(const SectorGrid &grid, const BoundaryConfig &config,
                             const DirichletData &data, const std::vector<double> &source = {});

/// Sparse LU solve with iterative refinement to 1e-12 ||b|| + 1e-12; throws SingularSystem.
Eigen::VectorXd solve_linear_system(const Eigen::SparseMatrix<double> &matrix,
                                    const Eigen::VectorXd &rhs);

DiscreteField solve_dirichlet(const SectorGrid &grid, const BoundaryConfig &config,
                              const DirichletData &data, const std::vector<double> &source = {});

struct MMatrixViolation
{
  int i = 0;
  int j = 0;
  /// "offdiagonal", "diagonal" or "rowsum".
  std::string kind;
  double value = 0.0;
};

struct MMatrixReport
{
  bool pass = true;
  int rows_checked = 0;
  std::vector<MMatrixViolation> violations;
  /// False when any violation sits on an oblique boundary row.
  bool boundary_rows_monotone = true;
};

/**
 * Checks every PDE row and every oblique boundary row of the assembled
 * system for a positive diagonal, non-positive off-diagonal entries and a
 * non-negative row sum. Dirichlet rows are identity rows and are skipped.
 * The second-order oblique stencil carries a positive off-diagonal weight
 * and therefore never passes; use ObliqueStencil::Upwind for a monotone
 * boundary.
 */
MMatrixReport check_m_matrix(const SectorGrid &grid, const BoundaryConfig &config);

// ---------------------------------------------------------------------------
// Exponent fits along rays
// ---------------------------------------------------------------------------

struct ExponentFit
{
  double alpha_hat = 0.0;
  /// Fitted log|u| at r = 1.
  double log_coefficient = 0.0;
  /// Largest absolute residual of the log-log linear fit.
  double max_residual = 0.0;
  int samples = 0;
};

inline constexpr int kMinFitSamples = 10;

/// Least-squares slope of log|u| against log r on grid nodes of the ray (interpolated in theta).
ExponentFit fit_exponent(const DiscreteField &field, double theta, double r_lo, double r_hi);

/// Same fit on `samples` log-spaced radii of a callable u(r, theta).
ExponentFit fit_exponent(const std::function<double(double, double)> &u, double theta,
                         double r_lo, double r_hi, int samples = 64);

} // namespace conereg
