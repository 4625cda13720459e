#include <doctest.h>

#include <cmath>
#include <random>

#include "lfa/fourier.hpp"

using namespace lfa;

namespace {

Stencil laplace_stencil_1d() {
  Stencil st;
  st.dim = 1;
  st.offsets = {{-1, 0, 0}, {0, 0, 0}, {1, 0, 0}};
  st.coefficients = {-1.0, 2.0, -1.0};
  return st;
}

ComplexMatrix one(Complex v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

// Hand-built two-grid parts for the 1D P1 problem (h = 1), independent of
// the problems module.
TwoGridSymbolParts p1_parts(double p, double theta, int nu1, int nu2) {
  TwoGridSymbolParts parts;
  parts.base = Frequency{theta};
  parts.pre_sweeps = nu1;
  parts.post_sweeps = nu2;
  for (double th : {theta, theta + kPi}) {
    parts.fine_blocks.push_back(one(2.0 - 2.0 * std::cos(th)));
    parts.relax_blocks.push_back(one(1.0 - p * (1.0 - std::cos(th))));
    parts.prolongation_blocks.push_back(one(0.5 * (1.0 + std::cos(th))));
    parts.restriction_blocks.push_back(one(1.0 + std::cos(th)));
  }
  parts.coarse = one(1.0 - std::cos(2.0 * theta));
  return parts;
}

}  // namespace

TEST_CASE("stencil symbol of the 1D P1 Laplacian") {
  const Stencil st = laplace_stencil_1d();
  CHECK(std::abs(evaluate_stencil_symbol(st, Frequency{0.0})) < 1e-15);
  CHECK(std::abs(evaluate_stencil_symbol(st, Frequency{kPi}) - 4.0) < 1e-14);
  CHECK(std::abs(evaluate_stencil_symbol(st, Frequency{kPi / 2}) - 2.0) < 1e-14);
}

TEST_CASE("stencil symbol dimension mismatch") {
  const Stencil st = laplace_stencil_1d();
  CHECK_THROWS_AS(evaluate_stencil_symbol(st, Frequency{0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("stencil symbol linearity") {
  std::mt19937_64 rng(991);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Stencil s1, s2;
    s1.dim = s2.dim = 2;
    for (int k = -2; k <= 2; ++k) {
      s1.offsets.push_back({k, 1, 0});
      s1.coefficients.push_back({unif(rng), unif(rng)});
      s2.offsets.push_back({k, k == 0 ? -1 : k, 0});
      s2.coefficients.push_back({unif(rng), unif(rng)});
    }
    const Complex a{unif(rng), unif(rng)};
    const Complex b{unif(rng), unif(rng)};
    const Frequency th{unif(rng), unif(rng)};
    const Complex combined =
        evaluate_stencil_symbol(added(scaled(s1, a), scaled(s2, b)), th);
    const Complex split =
        a * evaluate_stencil_symbol(s1, th) + b * evaluate_stencil_symbol(s2, th);
    CHECK(std::abs(combined - split) < 1e-12);
  }
}

TEST_CASE("hermitian stencils have real symbols") {
  std::mt19937_64 rng(313);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Stencil st;
  st.dim = 1;
  st.offsets.push_back({0, 0, 0});
  st.coefficients.push_back(unif(rng));
  for (int k = 1; k <= 3; ++k) {
    const Complex c{unif(rng), unif(rng)};
    st.offsets.push_back({k, 0, 0});
    st.coefficients.push_back(c);
    st.offsets.push_back({-k, 0, 0});
    st.coefficients.push_back(std::conj(c));
  }
  for (int i = 0; i < 50; ++i) {
    const Complex v = evaluate_stencil_symbol(st, Frequency{unif(rng) * 4.0});
    CHECK(std::abs(v.imag()) <= 1e-12);
  }
}

TEST_CASE("harmonics for factor-2 coarsening") {
  const HarmonicSet one_d = build_harmonics(Frequency{0.3}, 1, 2);
  REQUIRE(one_d.members.size() == 2);
  CHECK(one_d.members[0][0] == doctest::Approx(0.3));
  CHECK(one_d.members[1][0] == doctest::Approx(0.3 + kPi));

  const HarmonicSet two_d = build_harmonics(Frequency{0.0, 0.0}, 2, 2);
  REQUIRE(two_d.members.size() == 4);
  // Lexicographic alpha order: (0,0), (0,1), (1,0), (1,1).
  CHECK(two_d.members[1][1] == doctest::Approx(kPi));
  CHECK(two_d.members[2][0] == doctest::Approx(kPi));
  CHECK(two_d.members[3][0] == doctest::Approx(kPi));
  CHECK(two_d.members[3][1] == doctest::Approx(kPi));
}

TEST_CASE("harmonics for factor-3 coarsening") {
  const HarmonicSet hs = build_harmonics(Frequency{0.1}, 1, 3);
  REQUIRE(hs.members.size() == 3);
  CHECK(hs.members[0][0] == doctest::Approx(0.1));
  CHECK(hs.members[1][0] == doctest::Approx(0.1 + 2.0 * kPi / 3.0));
  CHECK(hs.members[2][0] == doctest::Approx(0.1 + 4.0 * kPi / 3.0));
}

TEST_CASE("harmonics reject bases outside the low region") {
  CHECK_THROWS_AS(build_harmonics(Frequency{2.0}, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_harmonics(Frequency{1.2}, 1, 3), std::invalid_argument);
}

TEST_CASE("zero-frequency guard") {
  const Frequency a = guard_frequency(Frequency{0.0, 0.5});
  CHECK(a[0] == doctest::Approx(1e-7));
  CHECK(a[1] == doctest::Approx(0.5));

  const Frequency b = guard_frequency(Frequency{0.3});
  CHECK(b[0] == doctest::Approx(0.3));

  const Frequency c = guard_frequency(Frequency{0.0, 0.0, 0.0});
  for (int i = 0; i < 3; ++i) CHECK(c[i] == doctest::Approx(1e-7));
}

TEST_CASE("low-frequency grids") {
  const FrequencyRegion low{RegionKind::LowClosed, 2, 1};
  const auto grid3 = sample_frequency_grid(low, 3);
  REQUIRE(grid3.size() == 3);
  CHECK(grid3[0][0] == doctest::Approx(-kPi / 2));
  CHECK(grid3[1][0] == doctest::Approx(1e-7));  // guarded zero
  CHECK(grid3[2][0] == doctest::Approx(kPi / 2));

  const FrequencyRegion low2{RegionKind::LowClosed, 2, 2};
  CHECK(sample_frequency_grid(low2, 33).size() == 33 * 33);

  const FrequencyRegion low_c3{RegionKind::LowClosed, 3, 1};
  const auto c3 = sample_frequency_grid(low_c3, 5);
  CHECK(c3.front()[0] == doctest::Approx(-kPi / 3));
  CHECK(c3.back()[0] == doctest::Approx(kPi / 3));
}

TEST_CASE("high-frequency grids exclude the low sub-grid") {
  const FrequencyRegion high{RegionKind::High, 2, 1};
  const auto grid = sample_frequency_grid(high, 4);
  REQUIRE(grid.size() == 2);
  for (const Frequency& f : grid) {
    CHECK(f[0] >= kPi / 2 - 1e-12);
    CHECK(f[0] < 3 * kPi / 2);
  }

  const FrequencyRegion high2{RegionKind::High, 2, 2};
  const auto grid2 = sample_frequency_grid(high2, 8);
  // 8^2 total minus the 4^2 points with both components in the low interval.
  CHECK(grid2.size() == 64 - 16);
}

TEST_CASE("two-grid symbol matches the explicit 1D P1 matrix") {
  const ComplexMatrix e = assemble_two_grid_symbol(p1_parts(2.0 / 3.0, kPi / 2, 1, 0));
  REQUIRE(e.rows() == 2);
  CHECK(std::abs(e(0, 0) - Complex(1.0 / 6.0)) < 1e-14);
  CHECK(std::abs(e(0, 1) - Complex(-1.0 / 6.0)) < 1e-14);
  CHECK(std::abs(e(1, 0) - Complex(-1.0 / 6.0)) < 1e-14);
  CHECK(std::abs(e(1, 1) - Complex(1.0 / 6.0)) < 1e-14);
}

TEST_CASE("two-grid symbol entries match the closed form over a (p, theta) sample") {
  std::mt19937_64 rng(7781);
  std::uniform_real_distribution<double> up(0.05, 2.4);
  std::uniform_real_distribution<double> uth(-kPi / 2 + 0.01, kPi / 2 - 0.01);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = up(rng);
    const double th = uth(rng);
    if (std::abs(th) < 1e-3) continue;  // coarse symbol ill-conditioned near zero
    const double s2 = std::sin(th / 2) * std::sin(th / 2);
    const double c2 = std::cos(th / 2) * std::cos(th / 2);
    const ComplexMatrix e = assemble_two_grid_symbol(p1_parts(p, th, 1, 0));
    CHECK(std::abs(e(0, 0) - Complex(s2 * (1 - 2 * p * s2))) < 1e-12);
    CHECK(std::abs(e(0, 1) - Complex(-c2 * (1 - 2 * p * c2))) < 1e-12);
    CHECK(std::abs(e(1, 0) - Complex(-s2 * (1 - 2 * p * s2))) < 1e-12);
    CHECK(std::abs(e(1, 1) - Complex(c2 * (1 - 2 * p * c2))) < 1e-12);
  }
}

TEST_CASE("exact coarse-grid correction gives the zero symbol") {
  TwoGridSymbolParts parts;
  parts.base = Frequency{0.4};
  parts.pre_sweeps = 0;
  parts.post_sweeps = 0;
  ComplexMatrix l(2, 2);
  l << Complex(2.0, 0.3), Complex(0.1, -0.2), Complex(-0.4, 0.0), Complex(1.5, 0.1);
  parts.fine_blocks = {l};
  parts.relax_blocks = {ComplexMatrix::Identity(2, 2)};
  parts.prolongation_blocks = {ComplexMatrix::Identity(2, 2)};
  parts.restriction_blocks = {ComplexMatrix::Identity(2, 2)};
  parts.coarse = l;
  const ComplexMatrix e = assemble_two_grid_symbol(parts);
  CHECK(e.norm() < 1e-13);
}

TEST_CASE("singular coarse symbol is reported with the frequency") {
  TwoGridSymbolParts parts = p1_parts(0.7, 0.0, 1, 0);  // unguarded zero
  try {
    assemble_two_grid_symbol(parts);
    FAIL("expected SingularCoarseError");
  } catch (const SingularCoarseError& e) {
    REQUIRE(e.frequency().size() == 1);
    CHECK(e.frequency()[0] == doctest::Approx(0.0));
  }
}

TEST_CASE("evaluation counter accumulates across threads of work") {
  EvalCounter counter;
  counter.add();
  counter.add(12);
  CHECK(counter.count() == 13);
}
