#pragma once

#include <vector>

#include "lfa/fourier.hpp"

namespace lfa {

struct ProblemSpec;

/// Eigenvalue with right eigenvector and (optionally) a left eigenvector in
/// the transpose sense, y^T A = lambda y^T.
struct EigenPair {
  Complex value{};
  ComplexVector right;
  ComplexVector left;

  bool has_left() const { return left.size() > 0; }
};

enum class GradientKind { Analytic, CentralDiff, None };

struct GradientMode {
  GradientKind kind = GradientKind::Analytic;
  double step = 1e-8;

  static GradientMode analytic() { return {GradientKind::Analytic, 0.0}; }
  static GradientMode central_diff(double t) { return {GradientKind::CentralDiff, t}; }
  static GradientMode none() { return {GradientKind::None, 0.0}; }
};

/// All eigenvalues with multiplicity, in no particular order.
std::vector<Complex> eigenvalues(const ComplexMatrix& a);

double spectral_radius(const ComplexMatrix& a);

/// Eigenpair for an eigenvalue of maximal modulus, with both right and left
/// vectors. Modulus ties are broken by largest real part, then largest
/// imaginary part. Throws DegenerateEigenvectorError when |y^T x| <= 1e-12.
EigenPair dominant_pair(const ComplexMatrix& a);

/// dlambda/dp = y^T (dA/dp) x / (y^T x).
Complex eigenvalue_derivative(const EigenPair& pair, const ComplexMatrix& da);

/// d|lambda|/dp = Re(conj(lambda)/|lambda| * dlambda/dp); requires |lambda| > 1e-14.
double abs_eigenvalue_derivative(Complex lambda, Complex dlambda);

struct RhoGradient {
  std::vector<double> values;
  bool fallback = false;  // analytic path failed and central differences were used
};

/// Gradient of rho(E(p, theta)) with respect to p.
///
/// Analytic mode uses the dominant eigenpair and the problem's analytic
/// matrix derivative (entry-wise central differences of the symbol when none
/// is provided); it charges no evaluations. CentralDiff mode differences the
/// spectral radius itself and charges 2n evaluations. Degenerate analytic
/// cases fall back to CentralDiff(1e-8) and set the fallback flag.
RhoGradient rho_gradient(const ProblemSpec& problem, const std::vector<double>& p,
                         const Frequency& theta, const GradientMode& mode, EvalCounter& counter);

}  // namespace lfa
