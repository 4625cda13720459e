#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lfa/mg_validate.hpp"
#include "lfa/optimizers.hpp"

namespace lfa {

/// Bad command line / configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem;
  std::string method = "outer-approx";  // brute-force | fixed-inner | outer-approx
  std::string grad = "analytic";        // analytic | fd:<t> | none
  std::optional<int> ntheta;            // fixed-inner grid / report grid override
  int np = 20;
  std::optional<std::uint64_t> budget;  // default depends on problem and method
  std::uint64_t seed = 42;
  std::optional<ParameterVector> params;
  std::optional<double> beta;
  std::optional<double> h;
  std::string output_dir;  // empty: nothing persisted
};

struct ResultSummary {
  RunConfig config;
  ParameterVector p_hat;
  double rho_psi_star = 0.0;
  std::optional<double> smoothing;
  double sigma = 0.0;
  std::uint64_t fevals = 0;
  double wall_seconds = 0.0;  // presentation only; not serialized
  std::vector<std::string> flags;

  bool incomplete() const;
};

/// JSON round-trip for machine consumption (wall_seconds excluded).
std::string to_json_string(const ResultSummary& summary);
ResultSummary summary_from_json_string(const std::string& text);

GradientMode parse_grad(const std::string& text);
Method parse_method(const std::string& text);

/// Loads config values from a JSON file; fields present in `base` that were
/// set on the command line take precedence at the call site.
RunConfig config_from_json_file(const std::string& path);

std::uint64_t default_budget(const ProblemSpec& problem, Method method, const GradientMode& mode);

/// Report-grid resolution used for rho_psi_star in summaries and curve
/// files: 33 per dimension, reduced to 9 for 3D problems to keep
/// post-processing desk-scale.
int report_ntheta(const ProblemSpec& problem);

ResultSummary cmd_evaluate(const RunConfig& config);
ResultSummary cmd_optimize(const RunConfig& config);
ResultSummary cmd_sigma(const RunConfig& config);
CycleReport cmd_validate(const RunConfig& config);

const std::vector<std::string>& reproduce_ids();
void cmd_reproduce(const std::string& id, const std::string& out_dir);

/// (fevals, best-so-far rho_psi_star) computed after a run from its trace;
/// evaluations here are never charged.
std::vector<std::pair<std::uint64_t, double>> best_so_far_curve(const ProblemSpec& problem,
                                                                const Trace& trace,
                                                                int n_theta_report);

void write_trace_csv(const std::filesystem::path& path, const Trace& trace);
void write_curve_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::uint64_t, double>>& curve);

}  // namespace lfa
