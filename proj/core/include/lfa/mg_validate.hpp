#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "lfa/problems.hpp"

namespace lfa {

enum class Boundary { Dirichlet, Periodic };

struct Grid1D {
  double h = 1.0 / 64.0;
  Boundary boundary = Boundary::Dirichlet;

  int points() const;    // 1/h, validated to be an integer
  int unknowns() const;  // interior points for Dirichlet, all points for Periodic
  void validate() const;
};

/// Fine-grid operator with stencil (1/h)[-1 2 -1]: Dirichlet rows eliminate
/// the boundary unknowns, Periodic wraps around.
Eigen::MatrixXd assemble_p1_laplace(const Grid1D& grid);

/// Discrete counterpart of a registered 1D problem variant.
struct MgVariant {
  int nu1 = 1;
  int nu2 = 0;
  bool separate_weights = false;  // post-sweeps use p2 instead of p1
  int coarsening = 2;             // 3 selects Galerkin coarse + damped CGC (p2)

  int param_count() const { return (separate_weights || coarsening == 3) ? 2 : 1; }
  static MgVariant from_problem(std::string_view name);
};

/// Two-grid method with weighted Jacobi relaxation and an exact coarse
/// solve; factor-2 coarse operator by rediscretization, factor-3 by the
/// Galerkin product. Periodic coarse systems are solved on the mean-zero
/// complement.
class TwoGridSolver {
 public:
  TwoGridSolver(const Grid1D& grid, const MgVariant& variant);

  Eigen::VectorXd cycle(const ParameterVector& p, const Eigen::VectorXd& b,
                        Eigen::VectorXd u) const;

  const Eigen::MatrixXd& fine_operator() const { return fine_; }
  const Eigen::MatrixXd& prolongation() const { return prolong_; }
  const Eigen::MatrixXd& coarse_operator() const { return coarse_; }
  int unknowns() const { return static_cast<int>(fine_.rows()); }

  /// Coarse-grid correction only (no relaxation), used by the projection test.
  Eigen::VectorXd coarse_correction(const Eigen::VectorXd& b, Eigen::VectorXd u,
                                    double damping = 1.0) const;

 private:
  Eigen::VectorXd coarse_solve(const Eigen::VectorXd& rhs) const;

  Grid1D grid_;
  MgVariant variant_;
  Eigen::MatrixXd fine_;
  Eigen::MatrixXd prolong_;
  Eigen::MatrixXd restrict_;
  Eigen::MatrixXd coarse_;
  Eigen::FullPivLU<Eigen::MatrixXd> coarse_lu_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> coarse_cod_;
  bool coarse_singular_ = false;
  double jacobi_diag_ = 0.0;
};

struct CycleReport {
  std::vector<double> defect_norms;  // ||d_h^{(k)}||_2 for k = 0..last recorded
  double rho_m1 = 0.0;               // (d_K / d_0)^{1/K}
  double rho_m2 = 0.0;               // d_K / d_{K-1}
  int last_cycle = 0;                // K used for the ratios
  bool diverged = false;
  bool floored = false;  // defect hit the 1e-14 * d_0 floor early
};

/// Homogeneous problem, random initial guess from the seed, 100 cycles.
CycleReport measure_convergence(const MgVariant& variant, const Grid1D& grid,
                                const ParameterVector& p, std::uint64_t seed);

/// Grid whose point count suits the variant's coarsening (1/64 for factor-2
/// problems, 1/63 for factor-3).
Grid1D default_grid(const MgVariant& variant, Boundary boundary = Boundary::Dirichlet);

}  // namespace lfa
