#include "conereg/solver.hpp"

#include "conereg/errors.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conereg {

namespace {

struct ThreePoint
{
  double lo, mid, hi;
};

// Non-uniform three-point weights for d2/dr2 and d/dr at node i.
ThreePoint radial_d2(const SectorGrid &g, int i)
{
  const double hm = g.r(i) - g.r(i - 1);
  const double hp = g.r(i + 1) - g.r(i);
  return {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
}

ThreePoint radial_d1(const SectorGrid &g, int i)
{
  const double hm = g.r(i) - g.r(i - 1);
  const double hp = g.r(i + 1) - g.r(i);
  return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

void add(std::vector<StencilEntry> &st, std::size_t index, double weight)
{
  for (auto &e : st) {
    if (e.index == index) {
      e.weight += weight;
      return;
    }
  }
  st.push_back({index, weight});
}

bool is_dirichlet_row(const SectorGrid &g, const BoundaryConfig &config, int i, int j)
{
  if (is_pde_node(g, i, j))
    return false;
  const bool oblique_row = config.oblique_angle && j == g.n_theta() - 1 && i > 0 &&
                           i < g.n_r() - 1;
  return !oblique_row;
}

std::vector<StencilEntry> oblique_stencil(const SectorGrid &g, const ObliqueBC &bc,
                                          ObliqueStencil kind, int i)
{
  // Row of r (-beta . Du) = -r (beta . e_r) u_r + eps u_theta at theta = theta0.
  const int n = g.n_theta() - 1;
  const double k = g.theta_step();
  const double theta0 = g.theta0();
  const double radial = bc.beta()[0] * std::cos(theta0) + bc.beta()[1] * std::sin(theta0);
  const double eps = bc.obliqueness();
  const double r = g.r(i);

  std::vector<StencilEntry> st;
  if (kind == ObliqueStencil::SecondOrder) {
    const ThreePoint d1 = radial_d1(g, i);
    add(st, g.index(i - 1, n), -r * radial * d1.lo);
    add(st, g.index(i, n), -r * radial * d1.mid);
    add(st, g.index(i + 1, n), -r * radial * d1.hi);
    add(st, g.index(i, n), eps * 1.5 / k);
    add(st, g.index(i, n - 1), -eps * 2.0 / k);
    add(st, g.index(i, n - 2), eps * 0.5 / k);
  } else {
    add(st, g.index(i, n), eps / k);
    add(st, g.index(i, n - 1), -eps / k);
    if (radial > 0.0) {
      const double hp = g.r(i + 1) - r;
      add(st, g.index(i, n), r * radial / hp);
      add(st, g.index(i + 1, n), -r * radial / hp);
    } else if (radial < 0.0) {
      const double hm = r - g.r(i - 1);
      add(st, g.index(i, n), -r * radial / hm);
      add(st, g.index(i - 1, n), r * radial / hm);
    }
  }
  return st;
}

} // namespace

bool is_pde_node(const SectorGrid &grid, int i, int j)
{
  if (i <= 0 || i >= grid.n_r() - 1)
    return false;
  if (j >= grid.n_theta() - 1)
    return false;
  return grid.mode() == 0 ? j >= 0 : j >= 1;
}

std::vector<StencilEntry> laplacian_stencil(const SectorGrid &g, int i, int j)
{
  if (!is_pde_node(g, i, j))
    throw DomainError("node is not a PDE node of the grid");

  std::vector<StencilEntry> st;
  const double r = g.r(i);
  const ThreePoint d2 = radial_d2(g, i);
  const ThreePoint d1 = radial_d1(g, i);
  add(st, g.index(i - 1, j), d2.lo + 2.0 / r * d1.lo);
  add(st, g.index(i, j), d2.mid + 2.0 / r * d1.mid);
  add(st, g.index(i + 1, j), d2.hi + 2.0 / r * d1.hi);

  const double k = g.theta_step();
  const double inv_r2 = 1.0 / (r * r);

  if (g.mode() == 0) {
    const double a = 1.0 / (4.0 * std::pow(std::sin(0.5 * k), 2));
    if (j == 0) {
      add(st, g.index(i, 0), -4.0 * a * inv_r2);
      add(st, g.index(i, 1), 4.0 * a * inv_r2);
      return st;
    }
    const double b = 1.0 / (std::tan(g.theta(j)) * 2.0 * std::sin(k));
    add(st, g.index(i, j - 1), (a - b) * inv_r2);
    add(st, g.index(i, j), -2.0 * a * inv_r2);
    add(st, g.index(i, j + 1), (a + b) * inv_r2);
    return st;
  }

  // m = 1 on w = u / sin(theta): sin(t) (w'' + 3 cot(t) w' - 2 w).
  const double cot = 1.0 / std::tan(g.theta(j));
  double c_lo = 1.0 / (k * k) - 1.5 * cot / k;
  double c_mid = -2.0 / (k * k) - 2.0;
  double c_hi = 1.0 / (k * k) + 1.5 * cot / k;
  const double sj = std::sin(g.theta(j));
  const auto w_weight = [&](int l) { return sj / std::sin(g.theta(l)) * inv_r2; };
  if (j == 1) {
    // Even extrapolation w_0 = (4 w_1 - w_2) / 3.
    c_mid += 4.0 / 3.0 * c_lo;
    c_hi -= c_lo / 3.0;
    add(st, g.index(i, 1), c_mid * w_weight(1));
    add(st, g.index(i, 2), c_hi * w_weight(2));
    return st;
  }
  add(st, g.index(i, j - 1), c_lo * w_weight(j - 1));
  add(st, g.index(i, j), c_mid * w_weight(j));
  add(st, g.index(i, j + 1), c_hi * w_weight(j + 1));
  return st;
}

DiscreteField sample_field(const SectorGrid &grid, const std::function<double(double, double)> &u)
{
  DiscreteField field(grid);
  for (int i = 0; i < grid.n_r(); ++i)
    for (int j = 0; j < grid.n_theta(); ++j)
      field.at(i, j) = u(grid.r(i), grid.theta(j));
  return field;
}

DiscreteField sample_separable(const SeparableSolution &sol, const SectorGrid &grid)
{
  if (sol.mode != grid.mode())
    throw DomainError("grid mode does not match the separable solution");
  std::vector<double> profile(static_cast<std::size_t>(grid.n_theta()));
  for (int j = 0; j < grid.n_theta(); ++j)
    profile[static_cast<std::size_t>(j)] = separable_profile(sol, grid.theta(j));
  DiscreteField field(grid);
  for (int i = 0; i < grid.n_r(); ++i) {
    const double ra = std::pow(grid.r(i), sol.alpha);
    for (int j = 0; j < grid.n_theta(); ++j)
      field.at(i, j) = ra * profile[static_cast<std::size_t>(j)];
  }
  return field;
}

LaplacianResidual apply_laplacian(const DiscreteField &field)
{
  const SectorGrid &g = field.grid;
  LaplacianResidual out{DiscreteField(g), 0.0};
  for (int i = 1; i + 1 < g.n_r(); ++i) {
    for (int j = 0; j + 1 < g.n_theta(); ++j) {
      if (!is_pde_node(g, i, j))
        continue;
      double acc = 0.0;
      for (const auto &e : laplacian_stencil(g, i, j))
        acc += e.weight * field.values[e.index];
      out.field.at(i, j) = acc;
      out.max_abs = std::max(out.max_abs, std::abs(acc));
    }
  }
  return out;
}

LaplacianResidual laplacian_residual(const SeparableSolution &sol, const SectorGrid &grid)
{
  return apply_laplacian(sample_separable(sol, grid));
}

double observed_order(double coarse_error, double fine_error)
{
  return std::log2(coarse_error / fine_error);
}

DirichletData dirichlet_from(const std::function<double(double, double)> &u,
                             const SectorGrid &grid)
{
  const double r_min = grid.r_min();
  const double r_max = grid.r_max();
  const double theta0 = grid.theta0();
  DirichletData data;
  data.inner = [u, r_min](double theta) { return u(r_min, theta); };
  data.outer = [u, r_max](double theta) { return u(r_max, theta); };
  data.cone = [u, theta0](double r) { return u(r, theta0); };
  return data;
}

LinearSystem assemble_system(const SectorGrid &g, const BoundaryConfig &config,
                             const DirichletData &data, const std::vector<double> &source)
{
  if (!source.empty() && source.size() != g.size())
    throw DomainError("source field does not match the grid");
  std::optional<ObliqueBC> bc;
  if (config.oblique_angle)
    bc.emplace(ConeGeometry(g.theta0()), *config.oblique_angle);

  const int n_r = g.n_r();
  const int n_t = g.n_theta();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.size() * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));

  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j < n_t; ++j) {
      const auto row = static_cast<Eigen::Index>(g.index(i, j));
      if (is_pde_node(g, i, j)) {
        const double r2 = g.r(i) * g.r(i);
        for (const auto &e : laplacian_stencil(g, i, j))
          triplets.emplace_back(row, static_cast<Eigen::Index>(e.index), -r2 * e.weight);
        if (!source.empty())
          rhs[row] = -r2 * source[g.index(i, j)];
        continue;
      }
      if (!is_dirichlet_row(g, config, i, j)) {
        for (const auto &e : oblique_stencil(g, *bc, config.oblique_stencil, i))
          triplets.emplace_back(row, static_cast<Eigen::Index>(e.index), e.weight);
        continue;
      }
      triplets.emplace_back(row, row, 1.0);
      if (g.mode() == 1 && j == 0)
        rhs[row] = 0.0;
      else if (i == 0)
        rhs[row] = data.inner ? data.inner(g.theta(j)) : 0.0;
      else if (i == n_r - 1)
        rhs[row] = data.outer ? data.outer(g.theta(j)) : 0.0;
      else
        rhs[row] = data.cone ? data.cone(g.r(i)) : 0.0;
    }
  }

  // Normalise every row to a unit diagonal; signs and row-sum signs are unchanged.
  std::vector<double> diag(g.size(), 0.0);
  for (const auto &t : triplets)
    if (t.row() == t.col())
      diag[static_cast<std::size_t>(t.row())] += t.value();
  for (auto &t : triplets) {
    const double d = diag[static_cast<std::size_t>(t.row())];
    if (d != 0.0)
      t = Eigen::Triplet<double>(t.row(), t.col(), t.value() / d);
  }
  for (Eigen::Index n = 0; n < rhs.size(); ++n)
    if (diag[static_cast<std::size_t>(n)] != 0.0)
      rhs[n] /= diag[static_cast<std::size_t>(n)];

  LinearSystem sys;
  sys.matrix.resize(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  sys.rhs = std::move(rhs);
  return sys;
}

Eigen::VectorXd solve_linear_system(const Eigen::SparseMatrix<double> &matrix,
                                    const Eigen::VectorXd &rhs)
{
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(matrix);
  lu.factorize(matrix);
  if (lu.info() != Eigen::Success)
    throw SingularSystem("sparse LU factorisation failed: " + lu.lastErrorMessage());

  Eigen::VectorXd x = lu.solve(rhs);
  const double target = 1e-12 * rhs.norm() + 1e-12;
  double res = (rhs - matrix * x).norm();
  for (int it = 0; it < 5 && res > target; ++it) {
    x += lu.solve(rhs - matrix * x);
    res = (rhs - matrix * x).norm();
  }
  if (!x.allFinite() || !(res <= target)) {
    std::ostringstream msg;
    msg << "linear solve stalled at residual " << res << " (target " << target << ")";
    throw SingularSystem(msg.str());
  }
  return x;
}

DiscreteField solve_dirichlet(const SectorGrid &grid, const BoundaryConfig &config,
                              const DirichletData &data, const std::vector<double> &source)
{
  const LinearSystem sys = assemble_system(grid, config, data, source);
  const Eigen::VectorXd x = solve_linear_system(sys.matrix, sys.rhs);
  DiscreteField field(grid);
  for (std::size_t n = 0; n < grid.size(); ++n)
    field.values[n] = x[static_cast<Eigen::Index>(n)];
  return field;
}

MMatrixReport check_m_matrix(const SectorGrid &grid, const BoundaryConfig &config)
{
  const LinearSystem sys = assemble_system(grid, config, DirichletData{});
  // Row-major copy so each row can be walked directly.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> a = sys.matrix;

  MMatrixReport report;
  for (int i = 0; i < grid.n_r(); ++i) {
    for (int j = 0; j < grid.n_theta(); ++j) {
      const bool pde = is_pde_node(grid, i, j);
      if (!pde && is_dirichlet_row(grid, config, i, j))
        continue;
      const auto row = static_cast<Eigen::Index>(grid.index(i, j));
      double diag = 0.0;
      double sum = 0.0;
      double scale = 0.0;
      std::vector<MMatrixViolation> found;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, row); it; ++it) {
        sum += it.value();
        scale = std::max(scale, std::abs(it.value()));
        if (it.col() == row)
          diag = it.value();
      }
      const double tol = 1e-12 * scale;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, row); it; ++it)
        if (it.col() != row && it.value() > tol)
          found.push_back({i, j, "offdiagonal", it.value()});
      if (!(diag > 0.0))
        found.push_back({i, j, "diagonal", diag});
      if (sum < -tol)
        found.push_back({i, j, "rowsum", sum});

      ++report.rows_checked;
      if (found.empty())
        continue;
      report.pass = false;
      if (!pde)
        report.boundary_rows_monotone = false;
      report.violations.insert(report.violations.end(), found.begin(), found.end());
    }
  }
  return report;
}

namespace {

ExponentFit fit_log_log(const std::vector<double> &radii, const std::vector<double> &values)
{
  if (static_cast<int>(radii.size()) < kMinFitSamples) {
    std::ostringstream msg;
    msg << "fit window holds " << radii.size() << " samples, need " << kMinFitSamples;
    throw DegenerateFit(msg.str());
  }
  double peak = 0.0;
  for (double v : values)
    peak = std::max(peak, std::abs(v));
  const bool positive = values.front() > 0.0;
  for (double v : values) {
    if ((v > 0.0) != positive || !std::isfinite(v))
      throw DegenerateFit("field changes sign inside the fit window");
    if (std::abs(v) <= 1e-14 * peak || std::abs(v) < 1e-300)
      throw DegenerateFit("field nearly vanishes inside the fit window");
  }

  const std::size_t n = radii.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] = std::log(radii[k]);
    ys[k] = std::log(std::abs(values[k]));
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (!(sxx > 0.0))
    throw DegenerateFit("fit window has no radial extent");

  ExponentFit fit;
  fit.alpha_hat = sxy / sxx;
  fit.log_coefficient = my - fit.alpha_hat * mx;
  fit.samples = static_cast<int>(n);
  for (std::size_t k = 0; k < n; ++k)
    fit.max_residual =
      std::max(fit.max_residual, std::abs(ys[k] - fit.log_coefficient - fit.alpha_hat * xs[k]));
  return fit;
}

} // namespace

ExponentFit fit_exponent(const DiscreteField &field, double theta, double r_lo, double r_hi)
{
  const SectorGrid &g = field.grid;
  if (!(theta >= 0.0 && theta <= g.theta0()))
    throw DomainError("fit ray lies outside the sector");
  if (!(r_lo < r_hi))
    throw DomainError("fit window needs r_lo < r_hi");

  const double k = g.theta_step();
  int j = std::min(static_cast<int>(std::floor(theta / k)), g.n_theta() - 2);
  const double t = (theta - g.theta(j)) / k;

  std::vector<double> radii, values;
  const double slack = 1e-12 * r_hi;
  for (int i = 0; i < g.n_r(); ++i) {
    const double r = g.r(i);
    if (r < r_lo - slack || r > r_hi + slack)
      continue;
    radii.push_back(r);
    values.push_back((1.0 - t) * field.at(i, j) + t * field.at(i, j + 1));
  }
  return fit_log_log(radii, values);
}

ExponentFit fit_exponent(const std::function<double(double, double)> &u, double theta,
                         double r_lo, double r_hi, int samples)
{
  if (!(r_lo > 0.0 && r_lo < r_hi))
    throw DomainError("fit window needs 0 < r_lo < r_hi");
  std::vector<double> radii, values;
  for (int k = 0; k < samples; ++k) {
    const double r =
      samples == 1 ? r_lo : r_lo * std::pow(r_hi / r_lo, static_cast<double>(k) / (samples - 1));
    radii.push_back(r);
    values.push_back(u(r, theta));
  }
  return fit_log_log(radii, values);
}

} // namespace conereg
