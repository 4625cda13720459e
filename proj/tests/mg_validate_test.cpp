#include <doctest.h>

#include <cmath>
#include <random>

#include "lfa/mg_validate.hpp"
#include "lfa/problems.hpp"

using namespace lfa;

TEST_CASE("fine-grid operator assembly") {
  {
    const Grid1D grid{0.25, Boundary::Dirichlet};
    const Eigen::MatrixXd a = assemble_p1_laplace(grid);
    REQUIRE(a.rows() == 3);
    Eigen::MatrixXd expect(3, 3);
    expect << 8, -4, 0, -4, 8, -4, 0, -4, 8;
    CHECK((a - expect).norm() < 1e-14);
  }
  {
    const Grid1D grid{0.25, Boundary::Periodic};
    const Eigen::MatrixXd a = assemble_p1_laplace(grid);
    REQUIRE(a.rows() == 4);
    CHECK(a(0, 3) == doctest::Approx(-4.0));
    CHECK(a(3, 0) == doctest::Approx(-4.0));
    // Constant vectors lie in the kernel.
    CHECK((a * Eigen::VectorXd::Ones(4)).norm() < 1e-13);
  }
  const Grid1D bad{0.3, Boundary::Dirichlet};
  CHECK_THROWS_AS((void)bad.points(), std::invalid_argument);
}

TEST_CASE("two-grid cycle keeps the exact solution fixed") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1");
  const TwoGridSolver solver(Grid1D{1.0 / 64.0, Boundary::Dirichlet}, variant);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(solver.unknowns());
  const Eigen::VectorXd u = solver.cycle({2.0 / 3.0}, zero, zero);
  CHECK(u.norm() == doctest::Approx(0.0));
}

TEST_CASE("defect reduction per cycle near the predicted factor") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1");
  const CycleReport rep =
      measure_convergence(variant, Grid1D{1.0 / 64.0, Boundary::Dirichlet}, {2.0 / 3.0}, 42);
  CHECK(rep.rho_m2 == doctest::Approx(1.0 / 3.0).epsilon(0.02 / 0.333));
  CHECK_FALSE(rep.diverged);
}

TEST_CASE("exact two-sweep parameters drain the defect within two cycles") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1-2sweep");
  const CycleReport rep =
      measure_convergence(variant, Grid1D{1.0 / 64.0, Boundary::Dirichlet}, {1.0, 0.5}, 42);
  CHECK(rep.floored);
  CHECK(rep.defect_norms.size() <= 4);  // d0, d1, d2 at the floor
  CHECK(rep.defect_norms.back() <= 1e-12 * rep.defect_norms.front());
}

TEST_CASE("LFA sharpness across a weight sweep") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1");
  const ProblemSpec pr = laplace1d_p1(1, 0, WeightMode::Shared);
  const Grid1D grid{1.0 / 64.0, Boundary::Dirichlet};
  for (double p : {0.4, 0.5, 2.0 / 3.0, 0.8}) {
    const CycleReport rep = measure_convergence(variant, grid, {p}, 42);
    CHECK(std::abs(rep.rho_m2 - rho_psi_star(pr, {p})) <= 0.02);
  }
}

TEST_CASE("divergence is flagged, not thrown") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1");
  const CycleReport rep =
      measure_convergence(variant, Grid1D{1.0 / 64.0, Boundary::Dirichlet}, {1.2}, 42);
  CHECK(rep.diverged);
  CHECK(rep.rho_m2 > 1.0);
}

TEST_CASE("mesh independence of the measured factor") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1");
  const CycleReport a =
      measure_convergence(variant, Grid1D{1.0 / 64.0, Boundary::Dirichlet}, {2.0 / 3.0}, 42);
  const CycleReport b =
      measure_convergence(variant, Grid1D{1.0 / 128.0, Boundary::Dirichlet}, {2.0 / 3.0}, 42);
  CHECK(std::abs(a.rho_m2 - b.rho_m2) <= 0.02);
}

TEST_CASE("coarsen-by-three measured factors confirm the LFA prediction") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1-c3");
  for (const Boundary boundary : {Boundary::Dirichlet, Boundary::Periodic}) {
    const Grid1D grid = default_grid(variant, boundary);
    const CycleReport rep = measure_convergence(variant, grid, {0.72, 2.30}, 42);
    CHECK(rep.rho_m2 == doctest::Approx(0.42).epsilon(0.03 / 0.42));
  }
}

TEST_CASE("pure coarse-grid correction is a projection") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1");
  const TwoGridSolver solver(Grid1D{1.0 / 32.0, Boundary::Dirichlet}, variant);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd u(solver.unknowns());
  for (int i = 0; i < u.size(); ++i) u(i) = unif(rng);
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(solver.unknowns());
  const Eigen::VectorXd once = solver.coarse_correction(b, u);
  const Eigen::VectorXd twice = solver.coarse_correction(b, once);
  CHECK((twice - once).norm() <= 1e-10 * std::max(1.0, once.norm()));
}

TEST_CASE("measurements are bitwise deterministic in the seed") {
  const MgVariant variant = MgVariant::from_problem("laplace1d-p1");
  const Grid1D grid{1.0 / 64.0, Boundary::Dirichlet};
  const CycleReport a = measure_convergence(variant, grid, {0.6}, 9001);
  const CycleReport b = measure_convergence(variant, grid, {0.6}, 9001);
  REQUIRE(a.defect_norms.size() == b.defect_norms.size());
  for (std::size_t i = 0; i < a.defect_norms.size(); ++i)
    CHECK(a.defect_norms[i] == b.defect_norms[i]);
  CHECK(a.rho_m1 == b.rho_m1);
  CHECK(a.rho_m2 == b.rho_m2);
}

TEST_CASE("unsupported problems are rejected") {
  CHECK_THROWS_AS(MgVariant::from_problem("stokes-mac-bsr"), std::invalid_argument);
}
