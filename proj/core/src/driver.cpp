#include "lfa/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lfa {

namespace {

using nlohmann::json;

ProblemSpec problem_from_config(const RunConfig& config) {
  if (config.problem.empty()) throw UsageError("no problem given; use --problem <name>");
  try {
    return make_problem(config.problem, config.beta, config.h);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

ParameterVector required_params(const RunConfig& config, const ProblemSpec& problem) {
  if (!config.params) throw UsageError("this command requires --params v1[,v2,...]");
  if (static_cast<int>(config.params->size()) != problem.n)
    throw UsageError(problem.name + " takes " + std::to_string(problem.n) + " parameters");
  return *config.params;
}

std::string format_params(const ParameterVector& p) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  return os.str();
}

void write_summary_files(const ResultSummary& summary, const std::string& label) {
  if (summary.config.output_dir.empty()) return;
  namespace fs = std::filesystem;
  const fs::path dir(summary.config.output_dir);
  fs::create_directories(dir);

  {
    std::ofstream out(dir / (label + ".json"));
    out << to_json_string(summary) << "\n";
  }
  std::ofstream out(dir / (label + ".txt"));
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&now));
  out << "# generated " << stamp << " wall " << summary.wall_seconds << "s\n";
  out << "problem: " << summary.config.problem << "\n";
  out << "method: " << summary.config.method << "\n";
  out << "grad: " << summary.config.grad << "\n";
  out << "seed: " << summary.config.seed << "\n";
  out << "fevals: " << summary.fevals << "\n";
  out.precision(12);
  out << "p_hat: " << format_params(summary.p_hat) << "\n";
  out << "rho_psi_star: " << summary.rho_psi_star << "\n";
  if (summary.smoothing) out << "smoothing_factor: " << *summary.smoothing << "\n";
  out << "sigma: " << summary.sigma << "\n";
  out << "flags:";
  if (summary.flags.empty()) out << " -";
  for (const auto& f : summary.flags) out << " " << f;
  out << "\n";
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace

bool ResultSummary::incomplete() const {
  return std::find(flags.begin(), flags.end(), "incomplete") != flags.end();
}

std::string to_json_string(const ResultSummary& summary) {
  json j;
  j["config"]["problem"] = summary.config.problem;
  j["config"]["method"] = summary.config.method;
  j["config"]["grad"] = summary.config.grad;
  if (summary.config.ntheta) j["config"]["ntheta"] = *summary.config.ntheta;
  j["config"]["np"] = summary.config.np;
  if (summary.config.budget) j["config"]["budget"] = *summary.config.budget;
  j["config"]["seed"] = summary.config.seed;
  if (summary.config.params) j["config"]["params"] = *summary.config.params;
  if (summary.config.beta) j["config"]["beta"] = *summary.config.beta;
  if (summary.config.h) j["config"]["h"] = *summary.config.h;
  if (!summary.config.output_dir.empty()) j["config"]["out"] = summary.config.output_dir;
  j["p_hat"] = summary.p_hat;
  j["rho_psi_star"] = summary.rho_psi_star;
  if (summary.smoothing) j["smoothing_factor"] = *summary.smoothing;
  j["sigma"] = summary.sigma;
  j["fevals"] = summary.fevals;
  j["flags"] = summary.flags;
  return j.dump(2);
}

ResultSummary summary_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ResultSummary s;
  const json& c = j.at("config");
  s.config.problem = c.at("problem").get<std::string>();
  s.config.method = c.at("method").get<std::string>();
  s.config.grad = c.at("grad").get<std::string>();
  if (c.contains("ntheta")) s.config.ntheta = c.at("ntheta").get<int>();
  if (c.contains("np")) s.config.np = c.at("np").get<int>();
  if (c.contains("budget")) s.config.budget = c.at("budget").get<std::uint64_t>();
  if (c.contains("seed")) s.config.seed = c.at("seed").get<std::uint64_t>();
  if (c.contains("params")) s.config.params = c.at("params").get<ParameterVector>();
  if (c.contains("beta")) s.config.beta = c.at("beta").get<double>();
  if (c.contains("h")) s.config.h = c.at("h").get<double>();
  if (c.contains("out")) s.config.output_dir = c.at("out").get<std::string>();
  s.p_hat = j.at("p_hat").get<ParameterVector>();
  s.rho_psi_star = j.at("rho_psi_star").get<double>();
  if (j.contains("smoothing_factor")) s.smoothing = j.at("smoothing_factor").get<double>();
  s.sigma = j.at("sigma").get<double>();
  s.fevals = j.at("fevals").get<std::uint64_t>();
  s.flags = j.at("flags").get<std::vector<std::string>>();
  return s;
}

GradientMode parse_grad(const std::string& text) {
  if (text == "analytic") return GradientMode::analytic();
  if (text == "none") return GradientMode::none();
  if (text.rfind("fd:", 0) == 0) {
    const double t = std::stod(text.substr(3));
    if (!(t > 0.0)) throw UsageError("fd step must be positive in --grad fd:<t>");
    return GradientMode::central_diff(t);
  }
  throw UsageError("unknown gradient mode '" + text + "' (use analytic, fd:<t>, or none)");
}

Method parse_method(const std::string& text) {
  if (text == "brute-force") return Method::BruteForce;
  if (text == "fixed-inner") return Method::FixedInner;
  if (text == "outer-approx") return Method::OuterApprox;
  throw UsageError("unknown method '" + text + "' (use brute-force, fixed-inner, or outer-approx)");
}

RunConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  RunConfig c;
  if (j.contains("problem")) c.problem = j.at("problem").get<std::string>();
  if (j.contains("method")) c.method = j.at("method").get<std::string>();
  if (j.contains("grad")) c.grad = j.at("grad").get<std::string>();
  if (j.contains("ntheta")) c.ntheta = j.at("ntheta").get<int>();
  if (j.contains("np")) c.np = j.at("np").get<int>();
  if (j.contains("budget")) c.budget = j.at("budget").get<std::uint64_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("params")) c.params = j.at("params").get<ParameterVector>();
  if (j.contains("beta")) c.beta = j.at("beta").get<double>();
  if (j.contains("h")) c.h = j.at("h").get<double>();
  if (j.contains("out")) c.output_dir = j.at("out").get<std::string>();
  return c;
}

std::uint64_t default_budget(const ProblemSpec& problem, Method method, const GradientMode& mode) {
  if (method == Method::BruteForce) return kNoBudget;
  if (problem.name == "laplace1d-p1") return 1000;
  if (problem.name == "laplace1d-p1-2sweep") return 1500;
  if (problem.name == "laplace1d-p1-c3") return 1500;
  if (problem.name == "stokes-mac-uzawa")
    return mode.kind == GradientKind::CentralDiff ? 4000 : 2000;
  if (problem.name == "stokes-mac-bsr") return 2000;
  if (problem.name == "control3d-q1") return 2000;
  return 2000;
}

int report_ntheta(const ProblemSpec& problem) { return problem.d >= 3 ? 9 : 33; }

std::vector<std::pair<std::uint64_t, double>> best_so_far_curve(const ProblemSpec& problem,
                                                                const Trace& trace,
                                                                int n_theta_report) {
  std::vector<std::pair<std::uint64_t, double>> curve;
  double best = std::numeric_limits<double>::infinity();
  for (const TraceRecord& rec : trace) {
    best = std::min(best, rho_psi_star(problem, rec.candidate, n_theta_report));
    curve.emplace_back(rec.fevals, best);
  }
  return curve;
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path);
  out << "fevals,objective";
  const std::size_t n = trace.empty() ? 0 : trace.front().candidate.size();
  for (std::size_t i = 1; i <= n; ++i) out << ",p" << i;
  out << "\n";
  out.precision(12);
  for (const TraceRecord& rec : trace) {
    out << rec.fevals << "," << rec.objective_estimate;
    for (double v : rec.candidate) out << "," << v;
    out << "\n";
  }
}

void write_curve_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::uint64_t, double>>& curve) {
  std::ofstream out(path);
  out << "fevals,rho_psi_star\n";
  out.precision(12);
  for (const auto& [fe, rho] : curve) out << fe << "," << rho << "\n";
}

ResultSummary cmd_evaluate(const RunConfig& config) {
  const Timer timer;
  const ProblemSpec problem = problem_from_config(config);
  const ParameterVector p = required_params(config, problem);
  const int nt = config.ntheta.value_or(report_ntheta(problem));

  ResultSummary s;
  s.config = config;
  s.p_hat = p;
  s.rho_psi_star = rho_psi_star(problem, p, nt);
  if (problem.relaxation_symbol) s.smoothing = smoothing_factor(problem, p, nt);
  EvalCounter scratch;
  const SigmaResult sigma = sigma_stationarity(problem, p, nt, scratch);
  s.sigma = sigma.value;
  if (sigma.gradient_fallback) s.flags.push_back("gradient-fallback");
  s.fevals = 0;
  s.wall_seconds = timer.seconds();
  write_summary_files(s, "evaluate");
  return s;
}

ResultSummary cmd_optimize(const RunConfig& config) {
  const Timer timer;
  const ProblemSpec problem = problem_from_config(config);
  const Method method = parse_method(config.method);
  const GradientMode mode = parse_grad(config.grad);
  if (mode.kind == GradientKind::None && method != Method::OuterApprox &&
      method != Method::BruteForce)
    throw UsageError("--grad none is only valid with --method outer-approx");
  if (config.budget && *config.budget == 0) throw UsageError("--budget must be positive");

  RunOptions opts;
  opts.method = method;
  opts.mode = mode;
  opts.ntheta = config.ntheta.value_or(method == Method::BruteForce ? 33 : 3);
  opts.np = config.np;
  opts.budget = config.budget.value_or(default_budget(problem, method, mode));
  opts.seed = config.seed;

  if (method == Method::BruteForce) {
    const double est = std::pow(static_cast<double>(opts.np), problem.n) *
                       std::pow(static_cast<double>(opts.ntheta), problem.d);
    if (est > 1e6)
      std::fprintf(stderr, "warning: brute force will take about %.3g evaluations\n", est);
  }

  EvalCounter counter;
  ParameterVector p0 = config.params.value_or(ParameterVector{});
  const MinimizeResult res = run_optimizer(problem, opts, std::move(p0), counter);

  const int nt_report = report_ntheta(problem);
  ResultSummary s;
  s.config = config;
  s.p_hat = res.p;
  s.rho_psi_star = rho_psi_star(problem, res.p, nt_report);
  s.fevals = counter.count();
  EvalCounter scratch;
  const SigmaResult sigma = sigma_stationarity(problem, res.p, nt_report, scratch);
  s.sigma = sigma.value;
  if (!res.complete) s.flags.push_back("incomplete");
  if (res.gradient_fallback || sigma.gradient_fallback) s.flags.push_back("gradient-fallback");
  s.wall_seconds = timer.seconds();

  if (!config.output_dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    write_trace_csv(dir / "trace.csv", res.trace);
    write_curve_csv(dir / "curve.csv", best_so_far_curve(problem, res.trace, nt_report));
  }
  write_summary_files(s, "summary");
  return s;
}

ResultSummary cmd_sigma(const RunConfig& config) {
  const Timer timer;
  const ProblemSpec problem = problem_from_config(config);
  const ParameterVector p = required_params(config, problem);
  const int nt = config.ntheta.value_or(report_ntheta(problem));

  ResultSummary s;
  s.config = config;
  s.p_hat = p;
  EvalCounter scratch;
  const SigmaResult sigma = sigma_stationarity(problem, p, nt, scratch);
  s.sigma = sigma.value;
  s.rho_psi_star = rho_psi_star(problem, p, nt);
  if (sigma.gradient_fallback) s.flags.push_back("gradient-fallback");
  s.wall_seconds = timer.seconds();
  write_summary_files(s, "sigma");
  return s;
}

CycleReport cmd_validate(const RunConfig& config) {
  const ProblemSpec problem = problem_from_config(config);
  MgVariant variant;
  try {
    variant = MgVariant::from_problem(problem.name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ParameterVector p = required_params(config, problem);
  Grid1D grid = default_grid(variant);
  if (config.h) grid.h = *config.h;

  const CycleReport report = measure_convergence(variant, grid, p, config.seed);

  if (!config.output_dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    std::ofstream cycles(dir / "cycles.csv");
    cycles << "cycle,defect\n";
    cycles.precision(12);
    for (std::size_t k = 0; k < report.defect_norms.size(); ++k)
      cycles << k << "," << report.defect_norms[k] << "\n";

    json j;
    j["problem"] = problem.name;
    j["params"] = p;
    j["h"] = grid.h;
    j["seed"] = config.seed;
    j["rho_m1"] = report.rho_m1;
    j["rho_m2"] = report.rho_m2;
    j["rho_psi_star"] = rho_psi_star(problem, p);
    j["last_cycle"] = report.last_cycle;
    j["diverged"] = report.diverged;
    j["floored"] = report.floored;
    std::ofstream out(dir / "validate.json");
    out << j.dump(2) << "\n";
  }
  return report;
}

namespace {

struct ReproduceRun {
  std::string label;
  RunConfig config;
};

std::vector<ReproduceRun> reproduce_matrix(const std::string& id) {
  auto run = [](std::string label, std::string problem, std::string method, std::string grad,
                int ntheta, std::uint64_t budget) {
    ReproduceRun r;
    r.label = std::move(label);
    r.config.problem = std::move(problem);
    r.config.method = std::move(method);
    r.config.grad = std::move(grad);
    r.config.ntheta = ntheta;
    r.config.budget = budget;
    return r;
  };

  if (id == "fig-4.2")
    return {run("outer-ag", "laplace1d-p1", "outer-approx", "analytic", 3, 1000),
            run("outer-df", "laplace1d-p1", "outer-approx", "none", 3, 1000),
            run("fixed-inner-n3", "laplace1d-p1", "fixed-inner", "analytic", 3, 1000),
            run("fixed-inner-n33", "laplace1d-p1", "fixed-inner", "analytic", 33, 2000)};
  if (id == "fig-4.3")
    return {run("outer-ag", "laplace1d-p1-2sweep", "outer-approx", "analytic", 3, 500),
            run("outer-df", "laplace1d-p1-2sweep", "outer-approx", "none", 3, 1500),
            run("fixed-inner-n3", "laplace1d-p1-2sweep", "fixed-inner", "analytic", 3, 1500)};
  if (id == "fig-4.5")
    return {run("outer-fd8", "laplace1d-p1-c3", "outer-approx", "fd:1e-8", 3, 1500),
            run("outer-df", "laplace1d-p1-c3", "outer-approx", "none", 3, 1500),
            run("fixed-inner-fd8", "laplace1d-p1-c3", "fixed-inner", "fd:1e-8", 3, 1500)};
  if (id == "fig-4.6")
    return {run("outer-ag", "stokes-mac-bsr", "outer-approx", "analytic", 3, 2000),
            run("outer-df", "stokes-mac-bsr", "outer-approx", "none", 3, 2000),
            run("fixed-inner-n3", "stokes-mac-bsr", "fixed-inner", "analytic", 3, 2000),
            run("fixed-inner-n9", "stokes-mac-bsr", "fixed-inner", "analytic", 9, 2000)};
  if (id == "fig-4.7")
    return {run("outer-ag", "stokes-mac-uzawa", "outer-approx", "analytic", 3, 1000),
            run("outer-df", "stokes-mac-uzawa", "outer-approx", "none", 3, 2000),
            run("fixed-inner-n3", "stokes-mac-uzawa", "fixed-inner", "analytic", 3, 1000),
            run("fixed-inner-n3-fd12", "stokes-mac-uzawa", "fixed-inner", "fd:1e-12", 3, 4000)};
  if (id == "table-b1") {
    std::vector<ReproduceRun> runs;
    for (const char* problem :
         {"laplace1d-p1", "laplace1d-p1-2sweep", "stokes-mac-bsr", "stokes-mac-uzawa"}) {
      const bool mac = std::string(problem).rfind("stokes", 0) == 0;
      const std::uint64_t grad_budget = mac ? 2000 : 1000;
      const std::uint64_t df_budget = mac ? 3000 : 1500;
      const std::string tag = problem;
      runs.push_back(run(tag + "-outer-ag", problem, "outer-approx", "analytic", 3, grad_budget));
      runs.push_back(run(tag + "-outer-df", problem, "outer-approx", "none", 3, df_budget));
      runs.push_back(
          run(tag + "-fixed-inner-n3", problem, "fixed-inner", "analytic", 3, grad_budget));
    }
    return runs;
  }
  if (id == "table-b2-subset")
    return {run("c3-outer-fd8", "laplace1d-p1-c3", "outer-approx", "fd:1e-8", 3, 1500),
            run("c3-outer-df", "laplace1d-p1-c3", "outer-approx", "none", 3, 1500),
            run("c3-fixed-inner-fd8", "laplace1d-p1-c3", "fixed-inner", "fd:1e-8", 3, 1500),
            run("control3d-fixed-inner-fd12", "control3d-q1", "fixed-inner", "fd:1e-12", 3, 2000)};
  std::string msg = "unknown reproduce id '" + id + "'; known ids:";
  for (const auto& known : reproduce_ids()) msg += " " + known;
  throw UsageError(msg);
}

}  // namespace

const std::vector<std::string>& reproduce_ids() {
  static const std::vector<std::string> ids = {"fig-4.2",  "fig-4.3", "fig-4.5",        "fig-4.6",
                                               "fig-4.7",  "table-b1", "table-b2-subset"};
  return ids;
}

void cmd_reproduce(const std::string& id, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const auto runs = reproduce_matrix(id);
  const fs::path root = fs::path(out_dir.empty() ? "." : out_dir) / id;
  fs::create_directories(root);

  std::ofstream report(root / "report.txt");
  report.precision(6);
  report << "run matrix " << id << "\n";
  for (const ReproduceRun& r : runs) {
    RunConfig config = r.config;
    config.output_dir = (root / r.label).string();
    const ResultSummary s = cmd_optimize(config);
    report << r.label << ": p_hat=(" << format_params(s.p_hat) << ") rho_psi_star=" << s.rho_psi_star
           << " sigma=" << s.sigma << " fevals=" << s.fevals;
    for (const auto& f : s.flags) report << " [" << f << "]";
    report << "\n";
  }
}

}  // namespace lfa
