#include "lfa/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lfa {

namespace {

// Reduce into [-pi/2, 3pi/2).
double canonical(double x) {
  double y = std::fmod(x + kPi / 2.0, 2.0 * kPi);
  if (y < 0.0) y += 2.0 * kPi;
  return y - kPi / 2.0;
}

void check_dim(int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("frequency dimension must be 1, 2, or 3");
}

}  // namespace

namespace detail {
std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}
}  // namespace detail

Frequency::Frequency(std::initializer_list<double> components) {
  check_dim(static_cast<int>(components.size()));
  dim_ = static_cast<int>(components.size());
  int i = 0;
  for (double v : components) c_[i++] = canonical(v);
}

Frequency::Frequency(const std::vector<double>& components) {
  check_dim(static_cast<int>(components.size()));
  dim_ = static_cast<int>(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) c_[i] = canonical(components[i]);
}

Frequency Frequency::zero(int dim) {
  check_dim(dim);
  Frequency f;
  f.dim_ = dim;
  return f;
}

Frequency Frequency::shifted(const std::array<int, 3>& alpha, double unit) const {
  Frequency f = *this;
  for (int i = 0; i < dim_; ++i) f.c_[i] = canonical(c_[i] + unit * alpha[i]);
  return f;
}

Frequency Frequency::scaled(double factor) const {
  Frequency f = *this;
  for (int i = 0; i < dim_; ++i) f.c_[i] = canonical(factor * c_[i]);
  return f;
}

Frequency Frequency::clamped(double edge) const {
  Frequency f = *this;
  for (int i = 0; i < dim_; ++i) f.c_[i] = std::clamp(c_[i], -edge, edge);
  return f;
}

std::vector<double> Frequency::components() const {
  return std::vector<double>(c_.begin(), c_.begin() + dim_);
}

std::string Frequency::str() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < dim_; ++i) os << (i ? ", " : "") << c_[i];
  os << ")";
  return os.str();
}

bool operator==(const Frequency& a, const Frequency& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

double frequency_distance(const Frequency& a, const Frequency& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("frequency dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Frequency guard_frequency(const Frequency& theta) {
  std::vector<double> c = theta.components();
  for (double& v : c)
    if (std::abs(v) < kZeroGuardThreshold) v = kZeroGuardValue;
  return Frequency(c);
}

bool in_low_region(const Frequency& theta, const FrequencyRegion& region, double slack) {
  const double edge = region.low_edge();
  for (int i = 0; i < theta.dim(); ++i)
    if (std::abs(theta[i]) > edge + slack) return false;
  return true;
}

std::vector<Frequency> sample_frequency_grid(const FrequencyRegion& region, int n_theta) {
  if (n_theta < 1) throw std::invalid_argument("n_theta must be positive");
  const int d = region.dim;
  check_dim(d);

  std::vector<double> axis;
  std::vector<bool> axis_low;  // per-point: lies in the half-open low interval
  const double lo = region.low_edge();
  if (region.kind == RegionKind::LowClosed) {
    if (n_theta == 1) {
      axis.push_back(0.0);
    } else {
      for (int k = 0; k < n_theta; ++k)
        axis.push_back(-lo + 2.0 * lo * static_cast<double>(k) / (n_theta - 1));
    }
  } else {
    const double span = 2.0 * kPi;
    for (int k = 0; k < n_theta; ++k) {
      const double x = -kPi / 2.0 + span * static_cast<double>(k) / n_theta;
      axis.push_back(x);
      axis_low.push_back(x >= -lo - 1e-14 && x < lo - 1e-14);
    }
  }

  const std::int64_t total = detail::ipow(static_cast<std::int64_t>(axis.size()), d);
  std::vector<Frequency> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<double> point(static_cast<std::size_t>(d), 0.0);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rest = idx;
    bool all_low = true;
    for (int i = d - 1; i >= 0; --i) {
      const auto k = static_cast<std::size_t>(rest % static_cast<std::int64_t>(axis.size()));
      rest /= static_cast<std::int64_t>(axis.size());
      point[static_cast<std::size_t>(i)] = axis[k];
      if (region.kind == RegionKind::High && !axis_low[k]) all_low = false;
    }
    if (region.kind == RegionKind::High && all_low) continue;
    out.push_back(guard_frequency(Frequency(point)));
  }
  return out;
}

void Stencil::validate() const {
  check_dim(dim);
  if (mesh_scale <= 0.0) throw std::invalid_argument("stencil mesh_scale must be positive");
  if (offsets.size() != coefficients.size())
    throw std::invalid_argument("stencil offsets/coefficients size mismatch");
  for (std::size_t i = 0; i < offsets.size(); ++i)
    for (std::size_t j = i + 1; j < offsets.size(); ++j)
      if (offsets[i] == offsets[j]) throw std::invalid_argument("stencil offsets must be distinct");
}

Stencil scaled(const Stencil& st, Complex factor) {
  Stencil r = st;
  for (auto& c : r.coefficients) c *= factor;
  return r;
}

Stencil added(const Stencil& a, const Stencil& b) {
  if (a.dim != b.dim) throw std::invalid_argument("stencil dimension mismatch");
  Stencil r = a;
  for (std::size_t i = 0; i < b.offsets.size(); ++i) {
    auto it = std::find(r.offsets.begin(), r.offsets.end(), b.offsets[i]);
    if (it == r.offsets.end()) {
      r.offsets.push_back(b.offsets[i]);
      r.coefficients.push_back(b.coefficients[i]);
    } else {
      r.coefficients[static_cast<std::size_t>(it - r.offsets.begin())] += b.coefficients[i];
    }
  }
  return r;
}

Complex evaluate_stencil_symbol(const Stencil& st, const Frequency& theta) {
  if (theta.dim() != st.dim)
    throw std::invalid_argument("stencil/frequency dimension mismatch");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < st.offsets.size(); ++i) {
    double phase = 0.0;
    for (int k = 0; k < st.dim; ++k) phase += theta[k] * st.offsets[i][static_cast<std::size_t>(k)];
    sum += st.coefficients[i] * std::polar(1.0, phase);
  }
  return sum;
}

HarmonicSet build_harmonics(const Frequency& theta, int d, int c) {
  if (theta.dim() != d) throw std::invalid_argument("harmonics: frequency dimension mismatch");
  if (c != 2 && c != 3) throw std::invalid_argument("harmonics: coarsening factor must be 2 or 3");
  FrequencyRegion low{RegionKind::LowClosed, c, d};
  if (!in_low_region(theta, low))
    throw std::invalid_argument("harmonics: base frequency outside the low region " + theta.str());

  const double unit = 2.0 * kPi / c;
  HarmonicSet hs;
  hs.base = theta;
  const std::int64_t count = detail::ipow(c, d);
  hs.members.reserve(static_cast<std::size_t>(count));
  hs.shifts.reserve(static_cast<std::size_t>(count));
  for (std::int64_t idx = 0; idx < count; ++idx) {
    std::array<int, 3> alpha{0, 0, 0};
    std::int64_t rest = idx;
    for (int i = d - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] = static_cast<int>(rest % c);
      rest /= c;
    }
    hs.shifts.push_back(alpha);
    hs.members.push_back(theta.shifted(alpha, unit));
  }
  return hs;
}

ComplexMatrix assemble_two_grid_symbol(const TwoGridSymbolParts& parts) {
  const auto m = parts.fine_blocks.size();
  if (m == 0) throw std::invalid_argument("two-grid symbol: no harmonic blocks");
  const auto q = static_cast<Eigen::Index>(parts.coarse.rows());
  if (parts.coarse.cols() != q) throw std::invalid_argument("two-grid symbol: coarse block not square");
  if (parts.relax_blocks.size() != m || parts.prolongation_blocks.size() != m ||
      parts.restriction_blocks.size() != m)
    throw std::invalid_argument("two-grid symbol: block count mismatch");
  const auto& post = parts.post_relax_blocks.empty() ? parts.relax_blocks : parts.post_relax_blocks;
  if (post.size() != m) throw std::invalid_argument("two-grid symbol: post-relaxation block count mismatch");
  for (const auto& b : parts.fine_blocks)
    if (b.rows() != q || b.cols() != q)
      throw std::invalid_argument("two-grid symbol: fine block dimensions do not conform");
  if (parts.pre_sweeps < 0 || parts.post_sweeps < 0)
    throw std::invalid_argument("two-grid symbol: sweep counts must be non-negative");

  const auto n = static_cast<Eigen::Index>(m) * q;

  Eigen::FullPivLU<ComplexMatrix> coarse_lu(parts.coarse);
  if (!coarse_lu.isInvertible())
    throw SingularCoarseError("two-grid symbol: singular coarse symbol at theta=" + parts.base.str(),
                              parts.base.components());

  // CGC block row: LH^{-1} R_a L_a for each harmonic a.
  ComplexMatrix cgc = ComplexMatrix::Identity(n, n);
  for (std::size_t a = 0; a < m; ++a) {
    const ComplexMatrix rl = coarse_lu.solve(parts.restriction_blocks[a] * parts.fine_blocks[a]);
    for (std::size_t b = 0; b < m; ++b) {
      cgc.block(static_cast<Eigen::Index>(b) * q, static_cast<Eigen::Index>(a) * q, q, q) -=
          parts.prolongation_blocks[b] * rl;
    }
  }

  auto apply_sweeps = [&](const std::vector<ComplexMatrix>& blocks, int sweeps,
                          const ComplexMatrix& rhs, bool left) {
    ComplexMatrix r = rhs;
    for (int s = 0; s < sweeps; ++s) {
      for (std::size_t b = 0; b < m; ++b) {
        const auto row = static_cast<Eigen::Index>(b) * q;
        if (left)
          r.middleRows(row, q) = blocks[b] * r.middleRows(row, q);
        else
          r.middleCols(row, q) = r.middleCols(row, q) * blocks[b];
      }
    }
    return r;
  };

  ComplexMatrix e = apply_sweeps(parts.relax_blocks, parts.pre_sweeps, cgc, /*left=*/false);
  e = apply_sweeps(post, parts.post_sweeps, e, /*left=*/true);
  if (!e.allFinite())
    throw NumericalError("two-grid symbol: non-finite entries at theta=" + parts.base.str());
  return e;
}

}  // namespace lfa
