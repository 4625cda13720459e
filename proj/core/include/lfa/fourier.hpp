#pragma once

#include <array>
#include <atomic>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lfa/errors.hpp"

namespace lfa {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Components below this magnitude are treated as the zero frequency and
/// replaced by the guard value, which approximates the (existing) limit of
/// the two-grid symbol without making the coarse symbol exactly singular.
inline constexpr double kZeroGuardThreshold = 1e-9;
inline constexpr double kZeroGuardValue = 1e-7;

inline constexpr double kPi = 3.14159265358979323846;

/// A Fourier frequency with 1 to 3 components, canonically reduced into
/// [-pi/2, 3pi/2) per component.
class Frequency {
 public:
  Frequency() = default;
  Frequency(std::initializer_list<double> components);
  explicit Frequency(const std::vector<double>& components);

  static Frequency zero(int dim);

  int dim() const noexcept { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  /// this + unit * alpha, reduced back into the canonical window.
  Frequency shifted(const std::array<int, 3>& alpha, double unit) const;
  /// factor * this (the frequency seen by a factor-`factor` coarse grid).
  Frequency scaled(double factor) const;
  /// Component-wise clamp into [-edge, edge].
  Frequency clamped(double edge) const;

  std::vector<double> components() const;
  std::string str() const;

  friend bool operator==(const Frequency& a, const Frequency& b);

 private:
  int dim_ = 0;
  std::array<double, 3> c_{};
};

double frequency_distance(const Frequency& a, const Frequency& b);

enum class RegionKind { LowClosed, High };

/// Low/high frequency region for factor-c coarsening in d dimensions.
/// The low region is [-pi/c, pi/c]^d (closed for optimization purposes);
/// high is the rest of [-pi/2, 3pi/2)^d.
struct FrequencyRegion {
  RegionKind kind = RegionKind::LowClosed;
  int coarsening = 2;
  int dim = 1;

  double low_edge() const { return kPi / coarsening; }
};

/// Replaces near-zero components by the guard value.
Frequency guard_frequency(const Frequency& theta);

/// True if every component of theta lies in the closed low interval.
bool in_low_region(const Frequency& theta, const FrequencyRegion& region, double slack = 1e-12);

/// Equally spaced sampling of a frequency region, n_theta points per
/// dimension. Low grids span the closed interval with both endpoints; high
/// grids cover [-pi/2, 3pi/2) (half-open) with the low sub-grid removed.
/// Every returned point is guarded.
std::vector<Frequency> sample_frequency_grid(const FrequencyRegion& region, int n_theta);

/// Constant-coefficient operator given by offset -> coefficient pairs.
/// Any mesh-size factors are expected to be folded into the coefficients;
/// mesh_scale is carried as metadata only.
struct Stencil {
  int dim = 1;
  double mesh_scale = 1.0;
  std::vector<std::array<int, 3>> offsets;
  std::vector<Complex> coefficients;

  void validate() const;
};

Stencil scaled(const Stencil& st, Complex factor);
Stencil added(const Stencil& a, const Stencil& b);

/// Symbol of the stencil at theta: sum_k s_k exp(i theta . k).
Complex evaluate_stencil_symbol(const Stencil& st, const Frequency& theta);

/// The c^d frequencies coupled by factor-c coarse-grid correction for a
/// base frequency in the low region. Member 0 is the base; the shift
/// multi-indices alpha are enumerated lexicographically.
struct HarmonicSet {
  Frequency base;
  std::vector<Frequency> members;
  std::vector<std::array<int, 3>> shifts;
};

HarmonicSet build_harmonics(const Frequency& theta, int d, int c);

/// Block operands of the two-grid error-propagation symbol. All blocks are
/// q x q; there are c^d of each harmonic-indexed kind, ordered like the
/// HarmonicSet that produced them. post_relax_blocks may be left empty when
/// pre- and post-relaxation use the same symbol.
struct TwoGridSymbolParts {
  std::vector<ComplexMatrix> fine_blocks;
  std::vector<ComplexMatrix> relax_blocks;
  std::vector<ComplexMatrix> post_relax_blocks;
  std::vector<ComplexMatrix> prolongation_blocks;
  std::vector<ComplexMatrix> restriction_blocks;
  ComplexMatrix coarse;
  int pre_sweeps = 1;
  int post_sweeps = 0;
  Frequency base;
};

/// S^nu2 [I - P LH^{-1} R Ldiag] S^nu1 assembled over the harmonics.
/// Throws SingularCoarseError if the coarse block cannot be inverted.
ComplexMatrix assemble_two_grid_symbol(const TwoGridSymbolParts& parts);

/// Count of rho(E(p, theta)) evaluations, shared across concurrent
/// frequency evaluations.
class EvalCounter {
 public:
  EvalCounter() = default;
  EvalCounter(const EvalCounter&) = delete;
  EvalCounter& operator=(const EvalCounter&) = delete;

  void add(std::uint64_t n = 1) noexcept { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t count() const noexcept { return count_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

namespace detail {
std::int64_t ipow(std::int64_t base, int exp);
}

}  // namespace lfa
