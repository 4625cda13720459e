#include <benchmark/benchmark.h>

#include "lfa/optimizers.hpp"
#include "lfa/problems.hpp"
#include "lfa/spectrum.hpp"

namespace {

void BM_ErrorSymbol(benchmark::State& state, const char* name) {
  const lfa::ProblemSpec problem = lfa::make_problem(name);
  const lfa::ParameterVector p = problem.initial;
  const lfa::Frequency theta = lfa::guard_frequency(lfa::Frequency::zero(problem.d));
  for (auto _ : state) {
    benchmark::DoNotOptimize(problem.error_symbol(p, theta));
  }
}
BENCHMARK_CAPTURE(BM_ErrorSymbol, laplace1d, "laplace1d-p1");
BENCHMARK_CAPTURE(BM_ErrorSymbol, mac_bsr, "stokes-mac-bsr");
BENCHMARK_CAPTURE(BM_ErrorSymbol, control3d, "control3d-q1");

void BM_SpectralRadius(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  lfa::ComplexMatrix a = lfa::ComplexMatrix::Random(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lfa::spectral_radius(a));
  }
}
BENCHMARK(BM_SpectralRadius)->Arg(4)->Arg(12)->Arg(24)->Arg(36);

void BM_RhoPsiStar(benchmark::State& state, const char* name, int ntheta) {
  const lfa::ProblemSpec problem = lfa::make_problem(name);
  const lfa::ParameterVector p = problem.initial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lfa::rho_psi_star(problem, p, ntheta));
  }
}
BENCHMARK_CAPTURE(BM_RhoPsiStar, laplace1d_33, "laplace1d-p1", 33);
BENCHMARK_CAPTURE(BM_RhoPsiStar, mac_bsr_33, "stokes-mac-bsr", 33);
BENCHMARK_CAPTURE(BM_RhoPsiStar, control3d_9, "control3d-q1", 9);

void BM_MinNormPoint(benchmark::State& state) {
  std::vector<std::vector<double>> vectors;
  for (int i = 0; i < 7; ++i)
    vectors.push_back({std::sin(1.0 + i), std::cos(2.0 + i), std::sin(3.0 * i)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(lfa::min_norm_point(vectors));
  }
}
BENCHMARK(BM_MinNormPoint);

}  // namespace

BENCHMARK_MAIN();
