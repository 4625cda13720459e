#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfa/fourier.hpp"

namespace lfa {

using ParameterVector = std::vector<double>;

/// A registered model problem: symbol callbacks plus parameter domain
/// metadata. Callbacks are pure and safe to call concurrently.
struct ProblemSpec {
  std::string name;
  int d = 1;  // frequency dimension
  int c = 2;  // coarsening factor
  int q = 1;  // components per unknown (block size of scalar symbols)
  int n = 1;  // parameter count
  std::vector<std::pair<double, double>> box;
  ParameterVector initial;

  std::function<ComplexMatrix(const ParameterVector&, const Frequency&)> error_symbol;
  std::function<ComplexMatrix(const ParameterVector&, const Frequency&)> relaxation_symbol;
  /// dE/dp_j, optional; index j in [0, n).
  std::function<ComplexMatrix(const ParameterVector&, const Frequency&, int)> error_symbol_derivative;

  std::optional<std::pair<ParameterVector, double>> reference_optimum;

  int symbol_size() const { return static_cast<int>(detail::ipow(c, d)) * q; }
  FrequencyRegion low_region() const { return {RegionKind::LowClosed, c, d}; }
  FrequencyRegion high_region() const { return {RegionKind::High, c, d}; }
  void validate_params(const ParameterVector& p) const;
};

enum class WeightMode { Shared, Separate };

/// 1D P1 Laplace with weighted Jacobi and a TG(nu1, nu2) cycle; linear
/// interpolation, restriction its transpose, rediscretized coarse operator.
ProblemSpec laplace1d_p1(int nu1, int nu2, WeightMode weights);

/// 1D P1 Laplace, coarsening by three with piecewise-constant interpolation,
/// Galerkin coarse operator, and damped coarse-grid correction.
ProblemSpec laplace1d_p1_coarsen3();

/// MAC Stokes with inexact Braess-Sarazin relaxation (one weighted Jacobi
/// sweep on the approximate Schur complement).
ProblemSpec stokes_mac_bsr(double h = 1.0);

/// MAC Stokes with Uzawa (block lower-triangular) relaxation.
ProblemSpec stokes_mac_uzawa(double h = 1.0);

/// 3D Q1 optimal-control saddle system with block Jacobi relaxation.
ProblemSpec control3d_q1(double beta = 1e-2, double h = 1.0 / 64.0);

const std::vector<std::string>& problem_names();
ProblemSpec make_problem(std::string_view name,
                         std::optional<double> beta = std::nullopt,
                         std::optional<double> h = std::nullopt);

/// rho(E(p, guard(theta))); charges one evaluation.
double rho_at(const ProblemSpec& problem, const ParameterVector& p, const Frequency& theta,
              EvalCounter& counter);

struct PsiValue {
  double value = 0.0;
  std::size_t argmax = 0;  // lowest index on ties
};

/// max over freqs of rho(E(p, theta)); charges |freqs| evaluations.
PsiValue psi(const ProblemSpec& problem, const ParameterVector& p,
             std::span<const Frequency> freqs, EvalCounter& counter);

/// Worst-case relaxation amplification over the sampled high-frequency grid.
double smoothing_factor(const ProblemSpec& problem, const ParameterVector& p, int n_theta);

/// Reporting metric: psi over the closed low-frequency grid with n_theta
/// points per dimension (33 by default). Never charged to optimizer counters.
double rho_psi_star(const ProblemSpec& problem, const ParameterVector& p, int n_theta = 33);

}  // namespace lfa
