#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>

#include "lfa/problems.hpp"
#include "lfa/spectrum.hpp"

namespace lfa {

inline constexpr std::uint64_t kNoBudget = std::numeric_limits<std::uint64_t>::max();

/// One optimizer progress sample: cumulative charged evaluations, the
/// candidate point, and the solver-internal objective value there.
struct TraceRecord {
  std::uint64_t fevals = 0;
  ParameterVector candidate;
  double objective_estimate = 0.0;
};
using Trace = std::vector<TraceRecord>;

struct BruteForceOptions {
  /// Override of the parameter box (defaults to the problem box).
  std::optional<std::vector<std::pair<double, double>>> box;
  std::uint64_t budget = kNoBudget;
};

struct BruteForceResult {
  ParameterVector p;
  double rho = 0.0;
  std::uint64_t evals = 0;
};

/// Exhaustive minimax scan: np points per parameter dimension (the box lower
/// edge excluded, the upper edge included), n_theta guarded points per
/// frequency dimension over the closed low region. Ties keep the first
/// minimizer in lexicographic scan order. Throws BudgetExceededError with the
/// best point so far if the budget runs out mid-scan.
BruteForceResult brute_force(const ProblemSpec& problem, int np, int n_theta,
                             EvalCounter& counter, const BruteForceOptions& opts = {});

struct GsOptions {
  double eps0 = 0.1;        // initial sampling radius
  double nu0 = 1e-2;        // initial stationarity tolerance
  double shrink = 0.1;      // radius/tolerance shrink factor
  double eps_min = 1e-6;
  int max_shrinks = 50;
  int max_backtracks = 30;
  int max_iters = 100000;
  double armijo_c1 = 1e-4;
  double initial_step = 1.0;
  /// On a stationarity test, move to the best sampled point when it improves
  /// on the incumbent instead of shrinking. Lets the iteration slide off
  /// saddle points at the cost of certifying them.
  bool sample_jump = false;
  std::uint64_t budget = kNoBudget;
  std::uint64_t seed = 0x5eed;
};

struct GsEval {
  double value = 0.0;
  std::vector<double> gradient;
};
using GsObjective = std::function<GsEval(const ParameterVector&)>;
using ValueObjective = std::function<double(const ParameterVector&)>;

struct MinimizeResult {
  ParameterVector p;
  double value = 0.0;
  Trace trace;
  bool complete = true;           // false when stopped by budget or iteration cap
  bool gradient_fallback = false; // an analytic gradient degraded to central differences
};

/// Gradient sampling: at each iterate evaluate the center and 2n points
/// uniform in the eps-ball (projected onto the box), take the min-norm
/// element g of the sampled gradients' convex hull, and either shrink
/// (||g|| <= nu) or run an Armijo backtracking line search along -g/||g||.
/// The counter is only consulted for the budget; charging is done by the
/// objective itself.
MinimizeResult gradient_sampling_minimize(const GsObjective& objective, ParameterVector p0,
                                          std::span<const std::pair<double, double>> box,
                                          const GsOptions& opts, EvalCounter& counter,
                                          Trace* shared_trace = nullptr);

struct PatternOptions {
  double step0 = 0.25;
  double step_min = 1e-5;
  double sufficient_decrease = 1e-8;
  double step_max = 1.0;
  int max_iters = 100000;
  std::uint64_t budget = kNoBudget;
};

/// Derivative-free pattern search over the coordinate directions plus the
/// pairwise diagonals, with sufficient decrease and step halving.
MinimizeResult pattern_search_minimize(const ValueObjective& objective, ParameterVector p0,
                                       std::span<const std::pair<double, double>> box,
                                       const PatternOptions& opts, EvalCounter& counter,
                                       Trace* shared_trace = nullptr);

/// Minimize the fixed-inner-discretization relaxation of the minimax problem:
/// psi over the n_theta^d guarded low grid, driven by gradient sampling.
/// Each objective call charges n_theta^d; analytic gradients charge nothing,
/// central differences charge 2n grid sweeps.
MinimizeResult fixed_inner_minimize(const ProblemSpec& problem, int n_theta,
                                    const GradientMode& mode, ParameterVector p0,
                                    const GsOptions& opts, EvalCounter& counter);

/// Grows monotonically; members stay pairwise distinct.
struct FrequencyCutSet {
  std::vector<Frequency> members;
  /// Returns false (and leaves the set unchanged) when the point duplicates
  /// an existing member within 1e-10.
  bool add(const Frequency& theta);
};

struct InnerMaxResult {
  Frequency theta;
  double rho = 0.0;
};

/// Multistart ascent of rho(E(p, .)) over the closed low region: 5^d guarded
/// grid seeds plus the given cut-set members, each refined by coordinate-wise
/// golden-section ascent with shrinking step. Every evaluation is charged.
InnerMaxResult inner_maximize(const ProblemSpec& problem, const ParameterVector& p,
                              std::span<const Frequency> seeds, EvalCounter& counter,
                              std::uint64_t budget = kNoBudget);

struct OuterOptions {
  double tol_add = 1e-4;
  int max_outer = 50;
  std::uint64_t budget = kNoBudget;
  /// Per-call cap on inner_maximize evaluations (0: scale with dimension).
  std::uint64_t inner_max_budget = 0;
  std::uint64_t seed = 0x5eed;
  GsOptions gs;             // inner solver for gradient modes
  PatternOptions pattern;   // inner solver for the derivative-free mode
};

/// Outer approximation: alternately minimize the cut-set relaxation
/// Psi_{U_k} (gradient sampling, or pattern search in derivative-free mode)
/// and maximize over frequency; stop when the inner maximizer no longer
/// exceeds the relaxation by more than tol_add.
MinimizeResult outer_approx_minimize(const ProblemSpec& problem, const GradientMode& mode,
                                     ParameterVector p0, const OuterOptions& opts,
                                     EvalCounter& counter);

struct MinNormResult {
  std::vector<double> coefficients;  // lambda >= 0 summing to 1 over the inputs
  std::vector<double> point;         // sum lambda_i g_i
  double norm = 0.0;
};

/// Wolfe's minimum-norm-point algorithm on the convex hull of the input
/// vectors, to 1e-12 on the Wolfe criterion residual.
MinNormResult min_norm_point(std::span<const std::vector<double>> vectors);

struct SigmaResult {
  double value = 0.0;
  bool gradient_fallback = false;
};

/// Approximate Clarke stationarity measure: norm of the min-norm element of
/// the convex hull of grid-argmax gradients sampled at p and p +- 1e-3 e_j.
SigmaResult sigma_stationarity(const ProblemSpec& problem, const ParameterVector& p,
                               int n_theta, EvalCounter& counter);

enum class Method { BruteForce, FixedInner, OuterApprox };

/// One optimizer run description: method, gradient mode, sampling sizes,
/// budget, and RNG seed. Identical options and seed give identical traces.
struct RunOptions {
  Method method = Method::OuterApprox;
  GradientMode mode = GradientMode::analytic();
  int ntheta = 3;  // fixed-inner grid, per dimension
  int np = 20;     // brute-force parameter samples per dimension
  std::uint64_t budget = kNoBudget;
  std::uint64_t seed = 42;
};

/// Runs the selected optimizer from p0 (problem default when empty) with the
/// project-default solver settings.
MinimizeResult run_optimizer(const ProblemSpec& problem, const RunOptions& opts,
                             ParameterVector p0, EvalCounter& counter);

}  // namespace lfa
