#include "lfa/problems.hpp"

#include <algorithm>
#include <cmath>

#include "lfa/spectrum.hpp"

namespace lfa {

namespace {

constexpr Complex kImag{0.0, 1.0};

ComplexMatrix one_by_one(Complex v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

// ---- 1D P1 Laplace scalar symbols (h = 1; h cancels in the two-grid symbol).

double p1_operator(double th) { return 2.0 - 2.0 * std::cos(th); }
double p1_jacobi(double w, double th) { return 1.0 - w * (1.0 - std::cos(th)); }
double p1_jacobi_dw(double th) { return -(1.0 - std::cos(th)); }
// Linear interpolation stencil symbol (before the 1/2^d normalization).
double p1_transfer(double th) { return 1.0 + std::cos(th); }

ComplexMatrix diag_of(const std::vector<double>& values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return m;
}

// CGC matrix I - P LH^{-1} R L for the 1D P1 factor-2 problem, 2x2.
ComplexMatrix p1_cgc(const Frequency& th) {
  const HarmonicSet hs = build_harmonics(th, 1, 2);
  TwoGridSymbolParts parts;
  parts.base = th;
  parts.pre_sweeps = 0;
  parts.post_sweeps = 0;
  for (const Frequency& f : hs.members) {
    parts.fine_blocks.push_back(one_by_one(p1_operator(f[0])));
    parts.relax_blocks.push_back(one_by_one(1.0));
    parts.prolongation_blocks.push_back(one_by_one(0.5 * p1_transfer(f[0])));
    parts.restriction_blocks.push_back(one_by_one(p1_transfer(f[0])));
  }
  // Rediscretized coarse operator on mesh 2h at frequency 2*theta.
  parts.coarse = one_by_one(1.0 - std::cos(2.0 * th[0]));
  return assemble_two_grid_symbol(parts);
}

std::vector<double> p1_relax_column(const HarmonicSet& hs, double w) {
  std::vector<double> v;
  v.reserve(hs.members.size());
  for (const Frequency& f : hs.members) v.push_back(p1_jacobi(w, f[0]));
  return v;
}

std::vector<double> p1_relax_dw_column(const HarmonicSet& hs) {
  std::vector<double> v;
  v.reserve(hs.members.size());
  for (const Frequency& f : hs.members) v.push_back(p1_jacobi_dw(f[0]));
  return v;
}

ComplexMatrix matrix_power(const ComplexMatrix& a, int n) {
  ComplexMatrix r = ComplexMatrix::Identity(a.rows(), a.cols());
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

// ---- MAC staggered Stokes blocks.

struct MacSymbols {
  double h;

  ComplexMatrix fine(const Frequency& f) const {
    const double a = (4.0 - 2.0 * std::cos(f[0]) - 2.0 * std::cos(f[1])) / (h * h);
    const Complex b1 = (2.0 * kImag / h) * std::sin(f[0] / 2.0);
    const Complex b2 = (2.0 * kImag / h) * std::sin(f[1] / 2.0);
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = a;
    m(0, 2) = std::conj(b1);
    m(1, 2) = std::conj(b2);
    m(2, 0) = b1;
    m(2, 1) = b2;
    return m;
  }

  // Rediscretized coarse symbol at frequency 2*theta on mesh 2h; trig is
  // taken on the unreduced base angles so staggered half-angle factors keep
  // a consistent sign.
  ComplexMatrix coarse(const Frequency& th) const {
    const double hh = 2.0 * h;
    const double a =
        (4.0 - 2.0 * std::cos(2.0 * th[0]) - 2.0 * std::cos(2.0 * th[1])) / (hh * hh);
    const Complex b1 = (2.0 * kImag / hh) * std::sin(th[0]);
    const Complex b2 = (2.0 * kImag / hh) * std::sin(th[1]);
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = a;
    m(0, 2) = std::conj(b1);
    m(1, 2) = std::conj(b2);
    m(2, 0) = b1;
    m(2, 1) = b2;
    return m;
  }

  // Component-wise transfers on the staggered layout; edge components use
  // the 6-point stencil, pressures the 4-point piecewise-constant one. The
  // per-harmonic signs come from the coarse points sitting on odd cosets.
  ComplexMatrix transfer(const Frequency& f, const std::array<int, 3>& alpha) const {
    const double pu = (1.0 + std::cos(f[0])) * 2.0 * std::cos(f[1] / 2.0);
    const double pv = 2.0 * std::cos(f[0] / 2.0) * (1.0 + std::cos(f[1]));
    const double pp = 4.0 * std::cos(f[0] / 2.0) * std::cos(f[1] / 2.0);
    const double su = (alpha[1] % 2) ? -1.0 : 1.0;
    const double sv = (alpha[0] % 2) ? -1.0 : 1.0;
    const double sp = ((alpha[0] + alpha[1]) % 2) ? -1.0 : 1.0;
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = su * pu / 4.0;
    m(1, 1) = sv * pv / 4.0;
    m(2, 2) = sp * pp / 4.0;
    return m;
  }

  ComplexMatrix b_row(const Frequency& f) const {
    ComplexMatrix b(1, 2);
    b(0, 0) = (2.0 * kImag / h) * std::sin(f[0] / 2.0);
    b(0, 1) = (2.0 * kImag / h) * std::sin(f[1] / 2.0);
    return b;
  }
};

enum class MacRelax { BraessSarazin, Uzawa };

// Inverse of the relaxation preconditioner as an explicit 3x3 symbol.
ComplexMatrix mac_minv(const MacSymbols& sym, MacRelax kind, const ParameterVector& p,
                       const Frequency& f) {
  const double p2 = p[1];
  const double p3 = p[2];
  const double dinv = sym.h * sym.h / 4.0;
  const ComplexMatrix b = sym.b_row(f);
  const ComplexMatrix bh = b.adjoint();
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  if (kind == MacRelax::BraessSarazin) {
    // Two-stage solve with one weighted Jacobi sweep (weight p3, zero start)
    // on B D^{-1} B^T, whose Jacobi diagonal is the constant 1.
    m.block(0, 0, 2, 2) =
        (dinv / p2) * ComplexMatrix::Identity(2, 2) - (p3 / p2) * dinv * dinv * (bh * b);
    m.block(0, 2, 2, 1) = p3 * dinv * bh;
    m.block(2, 0, 1, 2) = p3 * dinv * b;
    m(2, 2) = -p3 * p2;
  } else {
    // Pressure Richardson update dp = p3 (B dU - r_p); the sign makes the
    // preconditioned spectrum positive, which is what the analytical optimum
    // sqrt(3/5) at (1, 5/4, 1/4) requires.
    m.block(0, 0, 2, 2) = (dinv / p2) * ComplexMatrix::Identity(2, 2);
    m.block(2, 0, 1, 2) = (p3 / p2) * dinv * b;
    m(2, 2) = -p3;
  }
  return m;
}

ComplexMatrix mac_minv_dp(const MacSymbols& sym, MacRelax kind, const ParameterVector& p,
                          const Frequency& f, int j) {
  const double p2 = p[1];
  const double p3 = p[2];
  const double dinv = sym.h * sym.h / 4.0;
  const ComplexMatrix b = sym.b_row(f);
  const ComplexMatrix bh = b.adjoint();
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  if (kind == MacRelax::BraessSarazin) {
    if (j == 1) {
      m.block(0, 0, 2, 2) = -(dinv / (p2 * p2)) * ComplexMatrix::Identity(2, 2) +
                            (p3 / (p2 * p2)) * dinv * dinv * (bh * b);
      m(2, 2) = -p3;
    } else {
      m.block(0, 0, 2, 2) = -(dinv * dinv / p2) * (bh * b);
      m.block(0, 2, 2, 1) = dinv * bh;
      m.block(2, 0, 1, 2) = dinv * b;
      m(2, 2) = -p2;
    }
  } else {
    if (j == 1) {
      m.block(0, 0, 2, 2) = -(dinv / (p2 * p2)) * ComplexMatrix::Identity(2, 2);
      m.block(2, 0, 1, 2) = -(p3 / (p2 * p2)) * dinv * b;
    } else {
      m.block(2, 0, 1, 2) = (dinv / p2) * b;
      m(2, 2) = -1.0;
    }
  }
  return m;
}

ComplexMatrix mac_cgc(const MacSymbols& sym, const Frequency& th) {
  const HarmonicSet hs = build_harmonics(th, 2, 2);
  TwoGridSymbolParts parts;
  parts.base = th;
  parts.pre_sweeps = 0;
  parts.post_sweeps = 0;
  for (std::size_t a = 0; a < hs.members.size(); ++a) {
    const Frequency& f = hs.members[a];
    parts.fine_blocks.push_back(sym.fine(f));
    parts.relax_blocks.push_back(ComplexMatrix::Identity(3, 3));
    const ComplexMatrix t = sym.transfer(f, hs.shifts[a]);
    parts.prolongation_blocks.push_back(t);
    parts.restriction_blocks.push_back(t);
  }
  parts.coarse = sym.coarse(th);
  return assemble_two_grid_symbol(parts);
}

ProblemSpec stokes_mac(MacRelax kind, double h) {
  if (h <= 0.0) throw std::invalid_argument("stokes_mac: h must be positive");
  ProblemSpec pr;
  pr.name = kind == MacRelax::BraessSarazin ? "stokes-mac-bsr" : "stokes-mac-uzawa";
  pr.d = 2;
  pr.c = 2;
  pr.q = 3;
  pr.n = 3;
  pr.box.assign(3, {0.0, 2.5});
  pr.initial.assign(3, 0.5);

  const MacSymbols sym{h};

  auto relax = [sym, kind](const ParameterVector& p, const Frequency& f) {
    return (ComplexMatrix::Identity(3, 3) - p[0] * mac_minv(sym, kind, p, f) * sym.fine(f)).eval();
  };

  pr.relaxation_symbol = relax;

  pr.error_symbol = [sym, kind, relax](const ParameterVector& p, const Frequency& th) {
    const HarmonicSet hs = build_harmonics(th, 2, 2);
    TwoGridSymbolParts parts;
    parts.base = th;
    parts.pre_sweeps = 1;
    parts.post_sweeps = 0;
    for (std::size_t a = 0; a < hs.members.size(); ++a) {
      const Frequency& f = hs.members[a];
      parts.fine_blocks.push_back(sym.fine(f));
      parts.relax_blocks.push_back(relax(p, f));
      const ComplexMatrix t = sym.transfer(f, hs.shifts[a]);
      parts.prolongation_blocks.push_back(t);
      parts.restriction_blocks.push_back(t);
    }
    parts.coarse = sym.coarse(th);
    return assemble_two_grid_symbol(parts);
  };

  pr.error_symbol_derivative = [sym, kind](const ParameterVector& p, const Frequency& th, int j) {
    const HarmonicSet hs = build_harmonics(th, 2, 2);
    const ComplexMatrix cgc = mac_cgc(sym, th);
    const auto m = hs.members.size();
    ComplexMatrix ds = ComplexMatrix::Zero(static_cast<Eigen::Index>(3 * m),
                                           static_cast<Eigen::Index>(3 * m));
    for (std::size_t a = 0; a < m; ++a) {
      const Frequency& f = hs.members[a];
      ComplexMatrix block;
      if (j == 0) {
        block = (-mac_minv(sym, kind, p, f) * sym.fine(f)).eval();
      } else {
        block = (-p[0] * mac_minv_dp(sym, kind, p, f, j) * sym.fine(f)).eval();
      }
      ds.block(static_cast<Eigen::Index>(3 * a), static_cast<Eigen::Index>(3 * a), 3, 3) = block;
    }
    return (cgc * ds).eval();
  };

  if (kind == MacRelax::BraessSarazin)
    pr.reference_optimum = {{{1.0, 1.25, 0.8}}, 0.6};
  else
    pr.reference_optimum = {{{1.0, 1.25, 0.25}}, std::sqrt(3.0 / 5.0)};
  return pr;
}

// ---- 3D Q1 control problem blocks.

struct ControlSymbols {
  double beta;
  double h;

  static double mass1(double t, double h) { return h * (2.0 + std::cos(t)) / 3.0; }
  static double stiff1(double t, double h) { return 2.0 * (1.0 - std::cos(t)) / h; }

  ComplexMatrix saddle(double m3, double k3) const {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = m3;
    a(0, 1) = k3;
    a(1, 0) = k3;
    a(1, 2) = -m3;
    a(2, 1) = -m3;
    a(2, 2) = beta * m3;
    return a;
  }

  ComplexMatrix fine(const Frequency& f) const { return at_mesh(f, h, 1.0); }

  ComplexMatrix coarse(const Frequency& th) const { return at_mesh(th, 2.0 * h, 2.0); }

  ComplexMatrix at_mesh(const Frequency& f, double mesh, double freq_scale) const {
    double m[3], k[3];
    for (int i = 0; i < 3; ++i) {
      m[i] = mass1(freq_scale * f[i], mesh);
      k[i] = stiff1(freq_scale * f[i], mesh);
    }
    const double m3 = m[0] * m[1] * m[2];
    const double k3 = k[0] * m[1] * m[2] + m[0] * k[1] * m[2] + m[0] * m[1] * k[2];
    return saddle(m3, k3);
  }

  // Block Jacobi preconditioner built from the stencil diagonals of M and K,
  // with the K diagonal scaled by p2.
  ComplexMatrix ahat(double p2) const {
    const double md = std::pow(2.0 * h / 3.0, 3);
    const double kd = 8.0 * h / 3.0;
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = md;
    a(0, 1) = p2 * kd;
    a(1, 0) = p2 * kd;
    a(1, 2) = -md;
    a(2, 1) = -md;
    a(2, 2) = beta * md;
    return a;
  }

  double transfer_hat(const Frequency& f) const {
    return (1.0 + std::cos(f[0])) * (1.0 + std::cos(f[1])) * (1.0 + std::cos(f[2]));
  }
};

}  // namespace

void ProblemSpec::validate_params(const ParameterVector& p) const {
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument(name + ": expected " + std::to_string(n) + " parameters, got " +
                                std::to_string(p.size()));
}

ProblemSpec laplace1d_p1(int nu1, int nu2, WeightMode weights) {
  if (nu1 + nu2 < 1) throw std::invalid_argument("laplace1d_p1: nu1 + nu2 must be at least 1");
  if (nu1 < 0 || nu2 < 0) throw std::invalid_argument("laplace1d_p1: negative sweep count");
  const bool separate = weights == WeightMode::Separate;

  ProblemSpec pr;
  pr.d = 1;
  pr.c = 2;
  pr.q = 1;
  pr.n = separate ? 2 : 1;
  if (nu1 == 1 && nu2 == 0 && !separate) {
    pr.name = "laplace1d-p1";
  } else if (nu1 == 1 && nu2 == 1 && separate) {
    pr.name = "laplace1d-p1-2sweep";
  } else {
    pr.name = "laplace1d-p1-tg" + std::to_string(nu1) + std::to_string(nu2) +
              (separate ? "-sep" : "");
  }
  pr.box.assign(static_cast<std::size_t>(pr.n), {0.0, 2.5});
  const double start = (nu1 == 1 && nu2 == 0) ? 0.1 : 0.5;
  pr.initial.assign(static_cast<std::size_t>(pr.n), start);

  pr.error_symbol = [nu1, nu2, separate](const ParameterVector& p, const Frequency& th) {
    const HarmonicSet hs = build_harmonics(th, 1, 2);
    const double w1 = p[0];
    const double w2 = separate ? p[1] : p[0];
    TwoGridSymbolParts parts;
    parts.base = th;
    parts.pre_sweeps = nu1;
    parts.post_sweeps = nu2;
    for (const Frequency& f : hs.members) {
      parts.fine_blocks.push_back(one_by_one(p1_operator(f[0])));
      parts.relax_blocks.push_back(one_by_one(p1_jacobi(w1, f[0])));
      parts.post_relax_blocks.push_back(one_by_one(p1_jacobi(w2, f[0])));
      parts.prolongation_blocks.push_back(one_by_one(0.5 * p1_transfer(f[0])));
      parts.restriction_blocks.push_back(one_by_one(p1_transfer(f[0])));
    }
    parts.coarse = one_by_one(1.0 - std::cos(2.0 * th[0]));
    return assemble_two_grid_symbol(parts);
  };

  pr.error_symbol_derivative = [nu1, nu2, separate](const ParameterVector& p, const Frequency& th,
                                                    int j) {
    const HarmonicSet hs = build_harmonics(th, 1, 2);
    const double w1 = p[0];
    const double w2 = separate ? p[1] : p[0];
    const ComplexMatrix cgc = p1_cgc(th);
    const ComplexMatrix s1 = diag_of(p1_relax_column(hs, w1));
    const ComplexMatrix s2 = diag_of(p1_relax_column(hs, w2));
    const ComplexMatrix sd = diag_of(p1_relax_dw_column(hs));
    const ComplexMatrix s1p = matrix_power(s1, nu1);
    const ComplexMatrix s2p = matrix_power(s2, nu2);
    // d(S^nu)/dw = nu S^{nu-1} S' for diagonal S.
    const ComplexMatrix ds1 =
        nu1 > 0 ? (static_cast<double>(nu1) * matrix_power(s1, nu1 - 1) * sd).eval()
                : ComplexMatrix::Zero(s1.rows(), s1.cols());
    const ComplexMatrix ds2 =
        nu2 > 0 ? (static_cast<double>(nu2) * matrix_power(s2, nu2 - 1) * sd).eval()
                : ComplexMatrix::Zero(s2.rows(), s2.cols());
    if (separate) {
      if (j == 0) return (s2p * cgc * ds1).eval();
      return (ds2 * cgc * s1p).eval();
    }
    return (ds2 * cgc * s1p + s2p * cgc * ds1).eval();
  };

  pr.relaxation_symbol = [](const ParameterVector& p, const Frequency& f) {
    return one_by_one(p1_jacobi(p[0], f[0]));
  };

  if (nu1 == 1 && nu2 == 0 && !separate)
    pr.reference_optimum = {{{2.0 / 3.0}}, 1.0 / 3.0};
  else if (nu1 == 1 && nu2 == 1 && separate)
    pr.reference_optimum = {{{1.0, 0.5}}, 0.0};
  return pr;
}

ProblemSpec laplace1d_p1_coarsen3() {
  ProblemSpec pr;
  pr.name = "laplace1d-p1-c3";
  pr.d = 1;
  pr.c = 3;
  pr.q = 1;
  pr.n = 2;
  pr.box.assign(2, {0.0, 2.5});
  pr.initial.assign(2, 0.5);

  // Piecewise-constant interpolation stencil symbol.
  auto phat = [](double th) { return 1.0 + 2.0 * std::cos(th); };

  // Undamped CGC correction term C = P (R L P)^{-1} R L with Galerkin
  // coarse symbol; the damped CGC is I - p2 C.
  auto correction = [phat](const Frequency& th) {
    const HarmonicSet hs = build_harmonics(th, 1, 3);
    Eigen::Vector3cd pcol, rrow, lvec;
    for (int a = 0; a < 3; ++a) {
      const double f = hs.members[static_cast<std::size_t>(a)][0];
      pcol(a) = phat(f) / 3.0;
      rrow(a) = phat(f);
      lvec(a) = p1_operator(f);
    }
    Complex lh = 0.0;
    for (int a = 0; a < 3; ++a) lh += rrow(a) * lvec(a) * pcol(a);
    if (std::abs(lh) < 1e-300)
      throw SingularCoarseError("coarsen-3 Galerkin coarse symbol vanishes at theta=" + th.str(),
                                th.components());
    ComplexMatrix c(3, 3);
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a) c(b, a) = pcol(b) * rrow(a) * lvec(a) / lh;
    return c;
  };

  pr.error_symbol = [correction](const ParameterVector& p, const Frequency& th) {
    const HarmonicSet hs = build_harmonics(th, 1, 3);
    const ComplexMatrix s = diag_of(p1_relax_column(hs, p[0]));
    const ComplexMatrix q = ComplexMatrix::Identity(3, 3) - p[1] * correction(th);
    ComplexMatrix e = s * q * s;
    if (!e.allFinite())
      throw NumericalError("coarsen-3 symbol has non-finite entries at theta=" + th.str());
    return e;
  };

  pr.error_symbol_derivative = [correction](const ParameterVector& p, const Frequency& th, int j) {
    const HarmonicSet hs = build_harmonics(th, 1, 3);
    const ComplexMatrix s = diag_of(p1_relax_column(hs, p[0]));
    const ComplexMatrix c = correction(th);
    if (j == 1) return (-s * c * s).eval();
    const ComplexMatrix sd = diag_of(p1_relax_dw_column(hs));
    const ComplexMatrix q = ComplexMatrix::Identity(3, 3) - p[1] * c;
    return (sd * q * s + s * q * sd).eval();
  };

  pr.relaxation_symbol = [](const ParameterVector& p, const Frequency& f) {
    return one_by_one(p1_jacobi(p[0], f[0]));
  };

  pr.reference_optimum = {{{0.72, 2.30}}, 0.421};
  return pr;
}

ProblemSpec stokes_mac_bsr(double h) { return stokes_mac(MacRelax::BraessSarazin, h); }

ProblemSpec stokes_mac_uzawa(double h) { return stokes_mac(MacRelax::Uzawa, h); }

ProblemSpec control3d_q1(double beta, double h) {
  if (beta <= 0.0) throw std::invalid_argument("control3d_q1: beta must be positive");
  if (h <= 0.0) throw std::invalid_argument("control3d_q1: h must be positive");

  ProblemSpec pr;
  pr.name = "control3d-q1";
  pr.d = 3;
  pr.c = 2;
  pr.q = 3;
  pr.n = 2;
  pr.box = {{0.0, 2.5}, {0.0, 4.5}};
  pr.initial = {0.5, 0.5};

  const ControlSymbols sym{beta, h};

  auto relax = [sym](const ParameterVector& p, const Frequency& f) {
    const ComplexMatrix ahat = sym.ahat(p[1]);
    Eigen::FullPivLU<ComplexMatrix> lu(ahat);
    if (!lu.isInvertible())
      throw NumericalError("control3d: block Jacobi preconditioner is singular");
    return (ComplexMatrix::Identity(3, 3) - p[0] * lu.solve(sym.fine(f))).eval();
  };

  pr.relaxation_symbol = relax;

  pr.error_symbol = [sym, relax](const ParameterVector& p, const Frequency& th) {
    const HarmonicSet hs = build_harmonics(th, 3, 2);
    TwoGridSymbolParts parts;
    parts.base = th;
    parts.pre_sweeps = 1;
    parts.post_sweeps = 0;
    for (const Frequency& f : hs.members) {
      parts.fine_blocks.push_back(sym.fine(f));
      parts.relax_blocks.push_back(relax(p, f));
      const double hat = sym.transfer_hat(f);
      parts.prolongation_blocks.push_back((hat / 8.0) * ComplexMatrix::Identity(3, 3));
      parts.restriction_blocks.push_back(hat * ComplexMatrix::Identity(3, 3));
    }
    parts.coarse = sym.coarse(th);
    return assemble_two_grid_symbol(parts);
  };

  pr.error_symbol_derivative = [sym, relax](const ParameterVector& p, const Frequency& th, int j) {
    const HarmonicSet hs = build_harmonics(th, 3, 2);
    const auto m = hs.members.size();
    // CGC with identity relaxation.
    TwoGridSymbolParts parts;
    parts.base = th;
    parts.pre_sweeps = 0;
    parts.post_sweeps = 0;
    for (const Frequency& f : hs.members) {
      parts.fine_blocks.push_back(sym.fine(f));
      parts.relax_blocks.push_back(ComplexMatrix::Identity(3, 3));
      const double hat = sym.transfer_hat(f);
      parts.prolongation_blocks.push_back((hat / 8.0) * ComplexMatrix::Identity(3, 3));
      parts.restriction_blocks.push_back(hat * ComplexMatrix::Identity(3, 3));
    }
    parts.coarse = sym.coarse(th);
    const ComplexMatrix cgc = assemble_two_grid_symbol(parts);

    const ComplexMatrix ahat = sym.ahat(p[1]);
    Eigen::FullPivLU<ComplexMatrix> lu(ahat);
    ComplexMatrix dahat = ComplexMatrix::Zero(3, 3);
    dahat(0, 1) = 8.0 * sym.h / 3.0;
    dahat(1, 0) = 8.0 * sym.h / 3.0;

    ComplexMatrix ds = ComplexMatrix::Zero(static_cast<Eigen::Index>(3 * m),
                                           static_cast<Eigen::Index>(3 * m));
    for (std::size_t a = 0; a < m; ++a) {
      const ComplexMatrix fine = sym.fine(hs.members[a]);
      ComplexMatrix block;
      if (j == 0) {
        block = (-lu.solve(fine)).eval();
      } else {
        block = (p[0] * lu.solve(dahat * lu.solve(fine))).eval();
      }
      ds.block(static_cast<Eigen::Index>(3 * a), static_cast<Eigen::Index>(3 * a), 3, 3) = block;
    }
    return (cgc * ds).eval();
  };

  pr.reference_optimum = {{{1.527, 0.842}}, 0.895};
  return pr;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "laplace1d-p1",   "laplace1d-p1-2sweep", "laplace1d-p1-c3",
      "stokes-mac-bsr", "stokes-mac-uzawa",    "control3d-q1"};
  return names;
}

ProblemSpec make_problem(std::string_view name, std::optional<double> beta,
                         std::optional<double> h) {
  if (name == "laplace1d-p1") return laplace1d_p1(1, 0, WeightMode::Shared);
  if (name == "laplace1d-p1-2sweep") return laplace1d_p1(1, 1, WeightMode::Separate);
  if (name == "laplace1d-p1-c3") return laplace1d_p1_coarsen3();
  if (name == "stokes-mac-bsr") return stokes_mac_bsr(h.value_or(1.0));
  if (name == "stokes-mac-uzawa") return stokes_mac_uzawa(h.value_or(1.0));
  if (name == "control3d-q1") return control3d_q1(beta.value_or(1e-2), h.value_or(1.0 / 64.0));
  std::string msg = "unknown problem '" + std::string(name) + "'; registered problems:";
  for (const auto& n : problem_names()) msg += " " + n;
  throw std::invalid_argument(msg);
}

double rho_at(const ProblemSpec& problem, const ParameterVector& p, const Frequency& theta,
              EvalCounter& counter) {
  problem.validate_params(p);
  const double r = spectral_radius(problem.error_symbol(p, guard_frequency(theta)));
  counter.add(1);
  return r;
}

PsiValue psi(const ProblemSpec& problem, const ParameterVector& p,
             std::span<const Frequency> freqs, EvalCounter& counter) {
  if (freqs.empty()) throw std::invalid_argument("psi: empty frequency set");
  problem.validate_params(p);
  PsiValue best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double r = rho_at(problem, p, freqs[i], counter);
    if (r > best.value) {
      best.value = r;
      best.argmax = i;
    }
  }
  return best;
}

double smoothing_factor(const ProblemSpec& problem, const ParameterVector& p, int n_theta) {
  if (!problem.relaxation_symbol)
    throw UnsupportedOperationError(problem.name + ": no relaxation symbol registered");
  problem.validate_params(p);
  double mu = 0.0;
  for (const Frequency& f : sample_frequency_grid(problem.high_region(), n_theta))
    mu = std::max(mu, spectral_radius(problem.relaxation_symbol(p, f)));
  return mu;
}

double rho_psi_star(const ProblemSpec& problem, const ParameterVector& p, int n_theta) {
  EvalCounter scratch;
  const auto freqs = sample_frequency_grid(problem.low_region(), n_theta);
  return psi(problem, p, freqs, scratch).value;
}

}  // namespace lfa
