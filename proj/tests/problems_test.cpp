#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lfa/problems.hpp"
#include "lfa/spectrum.hpp"

using namespace lfa;

namespace {

ParameterVector random_point(const ProblemSpec& pr, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ParameterVector p(static_cast<std::size_t>(pr.n));
  for (int j = 0; j < pr.n; ++j) {
    const auto [a, b] = pr.box[static_cast<std::size_t>(j)];
    p[static_cast<std::size_t>(j)] = a + (b - a) * unif(rng);
  }
  return p;
}

Frequency random_low_frequency(const ProblemSpec& pr, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(pr.d));
  const double edge = pr.low_region().low_edge();
  for (auto& v : c) v = edge * unif(rng);
  return guard_frequency(Frequency(c));
}

}  // namespace

TEST_CASE("registry names and lookup") {
  CHECK(problem_names().size() == 6);
  for (const auto& name : problem_names()) CHECK(make_problem(name).name == name);
  CHECK_THROWS_AS(make_problem("laplace9d"), std::invalid_argument);
}

TEST_CASE("single-sweep Laplace problem hits the analytical optimum") {
  const ProblemSpec pr = laplace1d_p1(1, 0, WeightMode::Shared);
  CHECK(pr.n == 1);
  CHECK(pr.initial[0] == doctest::Approx(0.1));
  CHECK(rho_psi_star(pr, {2.0 / 3.0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(rho_psi_star(pr, {0.65}) == doctest::Approx(0.35));
  for (double p : {0.3, 0.5, 0.8, 1.0}) CHECK(rho_psi_star(pr, {p}) > 1.0 / 3.0 + 1e-6);
}

TEST_CASE("two-sweep variants") {
  const ProblemSpec shared = laplace1d_p1(1, 1, WeightMode::Shared);
  CHECK(rho_psi_star(shared, {2.0 / 3.0}) == doctest::Approx(1.0 / 9.0).epsilon(1e-9));

  const ProblemSpec split = laplace1d_p1(1, 1, WeightMode::Separate);
  CHECK(split.n == 2);
  CHECK(split.initial[0] == doctest::Approx(0.5));
  CHECK(rho_psi_star(split, {1.0, 0.5}) < 1e-6);
  CHECK_THROWS_AS(laplace1d_p1(0, 0, WeightMode::Shared), std::invalid_argument);
}

TEST_CASE("two-sweep symbol is symmetric in the weights") {
  const ProblemSpec pr = laplace1d_p1(1, 1, WeightMode::Separate);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const ParameterVector p = random_point(pr, rng);
    const Frequency th = random_low_frequency(pr, rng);
    const double r1 = spectral_radius(pr.error_symbol(p, th));
    const double r2 = spectral_radius(pr.error_symbol({p[1], p[0]}, th));
    CHECK(std::abs(r1 - r2) < 1e-10);
  }
}

TEST_CASE("single-sweep spectral radius equals the scalar closed form") {
  const ProblemSpec pr = laplace1d_p1(1, 0, WeightMode::Shared);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> up(0.05, 2.4);
  for (int trial = 0; trial < 60; ++trial) {
    const double p = up(rng);
    const Frequency th = random_low_frequency(pr, rng);
    const double s2 = std::sin(th[0] / 2) * std::sin(th[0] / 2);
    const double lam2 = std::abs(1 - 4 * p * ((s2 - 0.5) * (s2 - 0.5) + 0.25));
    CHECK(std::abs(spectral_radius(pr.error_symbol({p}, th)) - lam2) < 1e-10);
  }
}

TEST_CASE("coarsen-by-three anchors") {
  const ProblemSpec pr = laplace1d_p1_coarsen3();
  CHECK(pr.c == 3);
  CHECK(pr.symbol_size() == 3);
  CHECK(rho_psi_star(pr, {0.72, 2.30}) == doctest::Approx(0.421).epsilon(0.01));
  CHECK(rho_psi_star(pr, {0.741, 2.249}) == doctest::Approx(0.429).epsilon(0.01));

  // Without coarse-grid correction smooth modes survive: rho -> 1 as theta -> 0.
  EvalCounter c;
  CHECK(rho_at(pr, {0.7, 0.0}, Frequency::zero(1), c) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("MAC Braess-Sarazin anchors") {
  const ProblemSpec pr = stokes_mac_bsr();
  CHECK(pr.symbol_size() == 12);
  CHECK(rho_psi_star(pr, {1.0, 1.25, 0.8}) == doctest::Approx(0.6).epsilon(0.005 / 0.6));
  // Reported near-optimal point (parameters in this problem's ordering).
  CHECK(rho_psi_star(pr, {0.967, 1.208, 0.799}) == doctest::Approx(0.601).epsilon(0.01));
  // No relaxation leaves high-frequency error untouched.
  EvalCounter c;
  CHECK(rho_at(pr, {0.0, 1.25, 0.8}, Frequency{0.5, 0.5}, c) >= 1.0 - 1e-12);
}

TEST_CASE("MAC Uzawa anchors") {
  const ProblemSpec pr = stokes_mac_uzawa();
  CHECK(rho_psi_star(pr, {1.0, 1.25, 0.25}) ==
        doctest::Approx(std::sqrt(3.0 / 5.0)).epsilon(0.005));
  CHECK(rho_psi_star(pr, {0.937, 1.191, 0.272}) == doctest::Approx(0.775).epsilon(0.01));
  // p3 = 0 never updates the pressure; its error is invariant.
  EvalCounter c;
  CHECK(rho_at(pr, {1.0, 1.25, 0.0}, Frequency::zero(2), c) >= 1.0 - 1e-12);
}

TEST_CASE("MAC spectral radius is mesh-size independent") {
  const ProblemSpec a = stokes_mac_bsr(1.0);
  const ProblemSpec b = stokes_mac_bsr(1.0 / 64.0);
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const ParameterVector p = random_point(a, rng);
    const Frequency th = random_low_frequency(a, rng);
    CHECK(std::abs(spectral_radius(a.error_symbol(p, th)) -
                   spectral_radius(b.error_symbol(p, th))) < 1e-10);
  }
}

TEST_CASE("3D control problem anchors") {
  const ProblemSpec pr = control3d_q1();
  CHECK(pr.symbol_size() == 24);
  CHECK(pr.box[1].second == doctest::Approx(4.5));
  CHECK(smoothing_factor(pr, {16.0 / 19.0, 1.0}, 17) ==
        doctest::Approx(17.0 / 19.0).epsilon(5e-3 / 0.89));
  CHECK(smoothing_factor(pr, {16.0 / 19.0, 2.0 / 3.0}, 17) ==
        doctest::Approx(17.0 / 19.0).epsilon(5e-3 / 0.89));
  CHECK(smoothing_factor(pr, {16.0 / 19.0, 4.0}, 17) ==
        doctest::Approx(17.0 / 19.0).epsilon(5e-3 / 0.89));
  // Two-grid reporting anchor (damping 16/19, preconditioner scaling 1.527).
  CHECK(rho_psi_star(pr, {16.0 / 19.0, 1.527}, 9) == doctest::Approx(0.895).epsilon(0.01 / 0.895));
  CHECK_THROWS_AS(control3d_q1(-1.0, 1.0 / 64.0), std::invalid_argument);
  CHECK_THROWS_AS(control3d_q1(1e-2, 0.0), std::invalid_argument);
}

TEST_CASE("problem callbacks are finite and deterministic on the box") {
  std::mt19937_64 rng(2718);
  for (const auto& name : problem_names()) {
    const ProblemSpec pr = make_problem(name);
    const int trials = pr.d >= 3 ? 100 : 1000;
    for (int trial = 0; trial < trials; ++trial) {
      const ParameterVector p = random_point(pr, rng);
      const Frequency th = random_low_frequency(pr, rng);
      const ComplexMatrix e1 = pr.error_symbol(p, th);
      const ComplexMatrix e2 = pr.error_symbol(p, th);
      REQUIRE(e1.allFinite());
      REQUIRE((e1 - e2).norm() == 0.0);  // bitwise reproducible
      REQUIRE(e1.rows() == pr.symbol_size());
    }
  }
}

TEST_CASE("zero-frequency guard keeps every problem finite") {
  std::mt19937_64 rng(13);
  for (const auto& name : problem_names()) {
    const ProblemSpec pr = make_problem(name);
    EvalCounter c;
    for (int trial = 0; trial < 5; ++trial) {
      const double r = rho_at(pr, random_point(pr, rng), Frequency::zero(pr.d), c);
      CHECK(std::isfinite(r));
    }
  }
}

TEST_CASE("analytic matrix derivatives match entry-wise differencing") {
  std::mt19937_64 rng(1234);
  for (const auto& name : problem_names()) {
    const ProblemSpec pr = make_problem(name);
    REQUIRE(pr.error_symbol_derivative);
    for (int trial = 0; trial < 20; ++trial) {
      const ParameterVector p = random_point(pr, rng);
      const Frequency th = random_low_frequency(pr, rng);
      for (int j = 0; j < pr.n; ++j) {
        const ComplexMatrix da = pr.error_symbol_derivative(p, th, j);
        ParameterVector pp = p, pm = p;
        pp[static_cast<std::size_t>(j)] += 1e-7;
        pm[static_cast<std::size_t>(j)] -= 1e-7;
        const ComplexMatrix fd = (pr.error_symbol(pp, th) - pr.error_symbol(pm, th)) / 2e-7;
        const double scale = std::max(1.0, da.norm());
        CHECK((da - fd).norm() <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("psi takes the max and reports the lowest argmax index") {
  const ProblemSpec pr = laplace1d_p1(1, 0, WeightMode::Shared);
  EvalCounter c;
  const std::vector<Frequency> freqs = {guard_frequency(Frequency{0.0}), Frequency{kPi / 2},
                                        Frequency{kPi / 2}};
  const PsiValue v = psi(pr, {0.9}, freqs, c);
  CHECK(v.value == doctest::Approx(0.8));
  CHECK(v.argmax == 0);  // theta ~ 0 realizes |1 - 2p| at p = 0.9
  CHECK(c.count() == 3);

  const PsiValue tie =
      psi(pr, {0.9}, std::vector<Frequency>{Frequency{kPi / 2}, Frequency{kPi / 2}}, c);
  CHECK(tie.argmax == 0);  // exact tie broken to the lowest index

  const PsiValue single = psi(pr, {0.4}, std::vector<Frequency>{Frequency{kPi / 2}}, c);
  CHECK(single.value == doctest::Approx(0.6));
  CHECK_THROWS_AS(psi(pr, {0.4}, std::vector<Frequency>{}, c), std::invalid_argument);
}

TEST_CASE("psi propagates the singular-coarse error for unguarded zero") {
  const ProblemSpec pr = laplace1d_p1(1, 0, WeightMode::Shared);
  EvalCounter c;
  // Bypass rho_at's guard by calling the symbol directly through psi's path.
  CHECK_THROWS_AS((void)pr.error_symbol({0.7}, Frequency::zero(1)), SingularCoarseError);
}

TEST_CASE("psi is monotone in the frequency set") {
  const ProblemSpec pr = stokes_mac_bsr();
  std::mt19937_64 rng(404);
  EvalCounter c;
  for (int trial = 0; trial < 10; ++trial) {
    const ParameterVector p = random_point(pr, rng);
    std::vector<Frequency> big;
    for (int i = 0; i < 12; ++i) big.push_back(random_low_frequency(pr, rng));
    const std::vector<Frequency> small(big.begin(), big.begin() + 5);
    CHECK(psi(pr, p, small, c).value <= psi(pr, p, big, c).value + 1e-14);
  }
}

TEST_CASE("smoothing factor of weighted Jacobi matches a dense scan") {
  const ProblemSpec pr = laplace1d_p1(1, 0, WeightMode::Shared);
  double oracle = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double th = kPi / 2 + kPi * k / 9999.0;
    oracle = std::max(oracle, std::abs(1.0 - (4.0 / 3.0) * std::sin(th / 2) * std::sin(th / 2)));
  }
  CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(smoothing_factor(pr, {2.0 / 3.0}, 257) == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("smoothing factor edge cases") {
  ProblemSpec zero;
  zero.name = "zero";
  zero.d = 1;
  zero.n = 1;
  zero.box = {{0.0, 1.0}};
  zero.relaxation_symbol = [](const ParameterVector&, const Frequency&) {
    return ComplexMatrix::Zero(1, 1);
  };
  CHECK(smoothing_factor(zero, {0.5}, 9) == doctest::Approx(0.0));

  ProblemSpec none = zero;
  none.relaxation_symbol = nullptr;
  CHECK_THROWS_AS(smoothing_factor(none, {0.5}, 9), UnsupportedOperationError);
}

TEST_CASE("permuting the harmonic ordering leaves the spectral radius unchanged") {
  const ProblemSpec pr = stokes_mac_bsr();
  const ParameterVector p = {0.9, 1.1, 0.7};
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    const Frequency th = random_low_frequency(pr, rng);
    const ComplexMatrix e = pr.error_symbol(p, th);
    const double rho = spectral_radius(e);

    // Consistent reordering of the 4 harmonic blocks is a permutation
    // similarity of the 12x12 symbol.
    const std::array<int, 4> perm = {2, 0, 3, 1};
    ComplexMatrix pm = ComplexMatrix::Zero(12, 12);
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 3; ++i) pm(3 * perm[static_cast<std::size_t>(b)] + i, 3 * b + i) = 1.0;
    const ComplexMatrix shuffled = pm * e * pm.transpose();
    CHECK(std::abs(spectral_radius(shuffled) - rho) < 1e-10);
  }
}
