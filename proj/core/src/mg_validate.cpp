#include "lfa/mg_validate.hpp"

#include <cmath>
#include <random>

namespace lfa {

int Grid1D::points() const {
  const double inv = 1.0 / h;
  const int n = static_cast<int>(std::lround(inv));
  if (n < 3 || std::abs(inv - n) > 1e-9 * inv)
    throw std::invalid_argument("Grid1D: 1/h must be an integer >= 3");
  return n;
}

int Grid1D::unknowns() const {
  const int n = points();
  const int u = boundary == Boundary::Dirichlet ? n - 1 : n;
  if (u < 3) throw std::invalid_argument("Grid1D: too few unknowns");
  return u;
}

void Grid1D::validate() const { (void)unknowns(); }

Eigen::MatrixXd assemble_p1_laplace(const Grid1D& grid) {
  const int n = grid.unknowns();
  const double s = 1.0 / grid.h;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0 * s;
    if (i + 1 < n) {
      a(i, i + 1) = -s;
      a(i + 1, i) = -s;
    }
  }
  if (grid.boundary == Boundary::Periodic) {
    a(0, n - 1) += -s;
    a(n - 1, 0) += -s;
  }
  return a;
}

MgVariant MgVariant::from_problem(std::string_view name) {
  if (name == "laplace1d-p1") return MgVariant{1, 0, false, 2};
  if (name == "laplace1d-p1-2sweep") return MgVariant{1, 1, true, 2};
  if (name == "laplace1d-p1-c3") return MgVariant{1, 1, false, 3};
  throw std::invalid_argument("no discrete two-grid variant for problem '" + std::string(name) +
                              "'");
}

namespace {

// Interpolation matrix from the coarse grid; restriction is its transpose
// (the scaling that matches the rediscretized coarse operator).
Eigen::MatrixXd build_prolongation(const Grid1D& grid, int c) {
  const int nf = grid.unknowns();
  if (grid.boundary == Boundary::Dirichlet) {
    const int npts = grid.points();
    if (npts % c != 0) throw std::invalid_argument("Grid1D: 1/h must be divisible by the coarsening factor");
    const int nc = npts / c - 1;
    if (nc < 1) throw std::invalid_argument("Grid1D: coarse grid too small");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(nf, nc);
    for (int j = 0; j < nc; ++j) {
      const int center = c * (j + 1);  // fine point index (1-based position center)
      if (c == 2) {
        p(center - 1, j) = 1.0;
        p(center - 2, j) = 0.5;
        if (center < npts) p(center, j) = 0.5;
      } else {
        p(center - 1, j) = 1.0;
        p(center - 2, j) = 1.0;
        if (center < npts) p(center, j) = 1.0;
      }
    }
    return p;
  }
  const int npts = nf;
  if (npts % c != 0) throw std::invalid_argument("Grid1D: point count must be divisible by the coarsening factor");
  const int nc = npts / c;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(nf, nc);
  const double side = c == 2 ? 0.5 : 1.0;
  for (int j = 0; j < nc; ++j) {
    const int center = c * j;
    p(center, j) = 1.0;
    p((center + 1) % npts, j) += side;
    p((center - 1 + npts) % npts, j) += side;
  }
  return p;
}

}  // namespace

TwoGridSolver::TwoGridSolver(const Grid1D& grid, const MgVariant& variant)
    : grid_(grid), variant_(variant) {
  grid.validate();
  fine_ = assemble_p1_laplace(grid);
  prolong_ = build_prolongation(grid, variant.coarsening);
  restrict_ = prolong_.transpose();
  jacobi_diag_ = 2.0 / grid.h;

  if (variant.coarsening == 2) {
    Grid1D coarse_grid{grid.h * 2.0, grid.boundary};
    coarse_ = assemble_p1_laplace(coarse_grid);
  } else {
    coarse_ = restrict_ * fine_ * prolong_;
  }

  coarse_singular_ = grid.boundary == Boundary::Periodic;
  if (coarse_singular_)
    coarse_cod_.compute(coarse_);
  else
    coarse_lu_.compute(coarse_);
}

Eigen::VectorXd TwoGridSolver::coarse_solve(const Eigen::VectorXd& rhs) const {
  if (!coarse_singular_) return coarse_lu_.solve(rhs);
  // Periodic coarse operator has the constant vector in its kernel; solve on
  // the mean-zero complement.
  Eigen::VectorXd r = rhs;
  r.array() -= r.mean();
  Eigen::VectorXd u = coarse_cod_.solve(r);
  u.array() -= u.mean();
  return u;
}

Eigen::VectorXd TwoGridSolver::coarse_correction(const Eigen::VectorXd& b, Eigen::VectorXd u,
                                                 double damping) const {
  const Eigen::VectorXd residual = b - fine_ * u;
  const Eigen::VectorXd coarse_err = coarse_solve(restrict_ * residual);
  u += damping * (prolong_ * coarse_err);
  return u;
}

Eigen::VectorXd TwoGridSolver::cycle(const ParameterVector& p, const Eigen::VectorXd& b,
                                     Eigen::VectorXd u) const {
  if (static_cast<int>(p.size()) != variant_.param_count())
    throw std::invalid_argument("two_grid_cycle: parameter count mismatch");
  const double w_pre = p[0];
  const double w_post = variant_.separate_weights ? p[1] : p[0];
  const double damping = variant_.coarsening == 3 ? p[1] : 1.0;

  auto jacobi = [&](double w) {
    const Eigen::VectorXd r = b - fine_ * u;
    u += (w / jacobi_diag_) * r;
  };

  for (int s = 0; s < variant_.nu1; ++s) jacobi(w_pre);
  u = coarse_correction(b, std::move(u), damping);
  for (int s = 0; s < variant_.nu2; ++s) jacobi(w_post);
  return u;
}

CycleReport measure_convergence(const MgVariant& variant, const Grid1D& grid,
                                const ParameterVector& p, std::uint64_t seed) {
  const TwoGridSolver solver(grid, variant);
  const int n = solver.unknowns();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = unif(rng);
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

  CycleReport report;
  const double d0 = (solver.fine_operator() * u).norm();
  report.defect_norms.push_back(d0);
  const double floor = 1e-14 * d0;
  const double ceiling = 1e6 * d0;

  constexpr int kCycles = 100;
  for (int k = 1; k <= kCycles; ++k) {
    u = solver.cycle(p, b, u);
    const double d = (solver.fine_operator() * u).norm();
    report.defect_norms.push_back(d);
    if (d > ceiling) {
      report.diverged = true;
      break;
    }
    if (d < floor) {
      report.floored = true;
      break;
    }
  }

  const int recorded = static_cast<int>(report.defect_norms.size()) - 1;
  int m = recorded;
  if (report.floored && recorded > 1) m = recorded - 1;  // last cycle above the floor
  m = std::max(m, 1);
  report.last_cycle = m;
  const double dm = report.defect_norms[static_cast<std::size_t>(m)];
  report.rho_m2 = dm / report.defect_norms[static_cast<std::size_t>(m - 1)];
  report.rho_m1 = std::pow(dm / d0, 1.0 / m);
  return report;
}

Grid1D default_grid(const MgVariant& variant, Boundary boundary) {
  Grid1D grid;
  grid.boundary = boundary;
  grid.h = variant.coarsening == 3 ? 1.0 / 63.0 : 1.0 / 64.0;
  return grid;
}

}  // namespace lfa
