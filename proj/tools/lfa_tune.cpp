// lfa-tune: evaluate, optimize, and validate two-grid convergence-factor
// predictions for the registered model problems.

#include <cstdio>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lfa/driver.hpp"

namespace {

lfa::ParameterVector parse_param_list(const std::string& text) {
  lfa::ParameterVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw lfa::UsageError("cannot parse --params entry '" + item + "'");
    }
  }
  if (out.empty()) throw lfa::UsageError("--params must list at least one value");
  return out;
}

void print_summary(const lfa::ResultSummary& s) {
  std::printf("problem         %s\n", s.config.problem.c_str());
  std::printf("p_hat          ");
  for (double v : s.p_hat) std::printf(" %.6f", v);
  std::printf("\n");
  std::printf("rho_psi_star    %.6f\n", s.rho_psi_star);
  if (s.smoothing) std::printf("smoothing       %.6f\n", *s.smoothing);
  std::printf("sigma           %.6e\n", s.sigma);
  std::printf("fevals          %llu\n", static_cast<unsigned long long>(s.fevals));
  std::printf("wall            %.2fs\n", s.wall_seconds);
  if (!s.flags.empty()) {
    std::printf("flags          ");
    for (const auto& f : s.flags) std::printf(" %s", f.c_str());
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LFA two-grid convergence-factor tuning"};
  app.require_subcommand(1);
  // Free the short -h for the mesh-size flag.
  app.set_help_flag("--help", "print help");

  lfa::RunConfig cli;
  std::string params_text;
  std::string config_file;
  std::string reproduce_id;
  bool method_set = false;
  bool grad_set = false;
  bool np_set = false;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--problem", cli.problem, "problem name from the registry");
    cmd->add_option("--method", [&](const CLI::results_t& res) {
      cli.method = res[0];
      method_set = true;
      return true;
    }, "brute-force | fixed-inner | outer-approx");
    cmd->add_option("--grad", [&](const CLI::results_t& res) {
      cli.grad = res[0];
      grad_set = true;
      return true;
    }, "analytic | fd:<t> | none");
    cmd->add_option("--ntheta", [&cli](const CLI::results_t& res) {
      cli.ntheta = std::stoi(res[0]);
      return true;
    }, "frequency samples per dimension");
    cmd->add_option("--np", [&](const CLI::results_t& res) {
      cli.np = std::stoi(res[0]);
      np_set = true;
      return true;
    }, "brute-force parameter samples per dimension");
    cmd->add_option("--budget", [&cli](const CLI::results_t& res) {
      cli.budget = std::stoull(res[0]);
      return true;
    }, "evaluation budget");
    cmd->add_option("--seed", [&](const CLI::results_t& res) {
      cli.seed = std::stoull(res[0]);
      seed_set = true;
      return true;
    }, "RNG seed");
    cmd->add_option("--params", params_text, "comma-separated parameter values");
    cmd->add_option("--beta", [&cli](const CLI::results_t& res) {
      cli.beta = std::stod(res[0]);
      return true;
    }, "control-problem regularization weight");
    cmd->add_option("--h", [&cli](const CLI::results_t& res) {
      cli.h = std::stod(res[0]);
      return true;
    }, "mesh size override");
    cmd->add_option("--out", cli.output_dir, "output directory");
    cmd->add_option("--config", config_file, "JSON config file (flags take precedence)");
  };

  CLI::App* evaluate = app.add_subcommand("evaluate", "rho_psi_star at given parameters");
  CLI::App* optimize = app.add_subcommand("optimize", "run an optimizer");
  CLI::App* sigma = app.add_subcommand("sigma", "stationarity measure at given parameters");
  CLI::App* validate = app.add_subcommand("validate", "measured two-grid convergence factors");
  CLI::App* reproduce = app.add_subcommand("reproduce", "desk-scale experiment batches");
  for (CLI::App* cmd : {evaluate, optimize, sigma, validate}) add_common(cmd);
  reproduce->add_option("id", reproduce_id, "experiment id")->required();
  reproduce->add_option("--out", cli.output_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    lfa::RunConfig config;
    if (!config_file.empty()) config = lfa::config_from_json_file(config_file);
    // Command-line flags override config-file values.
    if (!cli.problem.empty()) config.problem = cli.problem;
    if (method_set) config.method = cli.method;
    if (grad_set) config.grad = cli.grad;
    if (cli.ntheta) config.ntheta = cli.ntheta;
    if (np_set) config.np = cli.np;
    if (cli.budget) config.budget = cli.budget;
    if (seed_set) config.seed = cli.seed;
    if (!params_text.empty()) config.params = parse_param_list(params_text);
    if (cli.beta) config.beta = cli.beta;
    if (cli.h) config.h = cli.h;
    if (!cli.output_dir.empty()) config.output_dir = cli.output_dir;

    if (evaluate->parsed()) {
      print_summary(lfa::cmd_evaluate(config));
      return 0;
    }
    if (optimize->parsed()) {
      const lfa::ResultSummary s = lfa::cmd_optimize(config);
      print_summary(s);
      return s.incomplete() ? 4 : 0;
    }
    if (sigma->parsed()) {
      print_summary(lfa::cmd_sigma(config));
      return 0;
    }
    if (validate->parsed()) {
      const lfa::CycleReport r = lfa::cmd_validate(config);
      std::printf("rho_m1          %.6f\n", r.rho_m1);
      std::printf("rho_m2          %.6f\n", r.rho_m2);
      std::printf("last_cycle      %d\n", r.last_cycle);
      if (r.diverged) std::printf("flags           diverged\n");
      if (r.floored) std::printf("flags           defect-floor\n");
      return 0;
    }
    if (reproduce->parsed()) {
      lfa::cmd_reproduce(reproduce_id, cli.output_dir);
      return 0;
    }
  } catch (const lfa::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const lfa::BudgetExceededError& e) {
    std::fprintf(stderr, "incomplete: %s\n", e.what());
    return 4;
  } catch (const lfa::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
