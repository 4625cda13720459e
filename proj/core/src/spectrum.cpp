#include "lfa/spectrum.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "lfa/problems.hpp"

namespace lfa {

namespace {

std::uint64_t matrix_hash(const ComplexMatrix& a) {
  // FNV-1a over the raw entry bytes; only used to tag failure messages.
  std::uint64_t h = 1469598103934665603ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(a.data());
  const std::size_t size = sizeof(Complex) * static_cast<std::size_t>(a.size());
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

void check_square(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
}

Eigen::Index pick_dominant(const ComplexVector& lams) {
  Eigen::Index best = 0;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < lams.size(); ++i) scale = std::max(scale, std::abs(lams[i]));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (Eigen::Index i = 1; i < lams.size(); ++i) {
    const double mi = std::abs(lams[i]);
    const double mb = std::abs(lams[best]);
    if (mi > mb + tol) {
      best = i;
    } else if (mi > mb - tol) {
      if (lams[i].real() > lams[best].real() + tol) {
        best = i;
      } else if (lams[i].real() > lams[best].real() - tol &&
                 lams[i].imag() > lams[best].imag()) {
        best = i;
      }
    }
  }
  return best;
}

}  // namespace

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
  check_square(a);
  if (a.rows() == 0) return {};
  if (a.rows() == 1) return {a(0, 0)};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(matrix_hash(a)));
    throw NumericalError(std::string("eigenvalue iteration failed, matrix hash ") + buf);
  }
  const ComplexVector& lams = solver.eigenvalues();
  return std::vector<Complex>(lams.data(), lams.data() + lams.size());
}

double spectral_radius(const ComplexMatrix& a) {
  check_square(a);
  double r = 0.0;
  for (const Complex& lam : eigenvalues(a)) r = std::max(r, std::abs(lam));
  return r;
}

EigenPair dominant_pair(const ComplexMatrix& a) {
  check_square(a);
  const Eigen::Index n = a.rows();
  if (n == 0) throw std::invalid_argument("dominant_pair: empty matrix");

  EigenPair pair;
  if (n == 1) {
    pair.value = a(0, 0);
    pair.right = ComplexVector::Ones(1);
    pair.left = ComplexVector::Ones(1);
    return pair;
  }

  Eigen::ComplexEigenSolver<ComplexMatrix> right_solver(a, true);
  if (right_solver.info() != Eigen::Success)
    throw NumericalError("dominant_pair: right eigensolve failed");
  const Eigen::Index ir = pick_dominant(right_solver.eigenvalues());
  pair.value = right_solver.eigenvalues()[ir];
  pair.right = right_solver.eigenvectors().col(ir);
  pair.right.normalize();

  // Left eigenvector in the transpose (not adjoint) sense.
  Eigen::ComplexEigenSolver<ComplexMatrix> left_solver(a.transpose().eval(), true);
  if (left_solver.info() != Eigen::Success)
    throw NumericalError("dominant_pair: left eigensolve failed");
  Eigen::Index il = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(left_solver.eigenvalues()[i] - pair.value);
    if (d < dist) {
      dist = d;
      il = i;
    }
  }
  pair.left = left_solver.eigenvectors().col(il);
  pair.left.normalize();

  const Complex yx = pair.left.transpose() * pair.right;
  if (std::abs(yx) <= 1e-12)
    throw DegenerateEigenvectorError("dominant_pair: left/right eigenvectors are orthogonal");
  return pair;
}

Complex eigenvalue_derivative(const EigenPair& pair, const ComplexMatrix& da) {
  if (!pair.has_left()) throw std::invalid_argument("eigenvalue_derivative: missing left eigenvector");
  if (da.rows() != pair.right.size() || da.cols() != pair.right.size())
    throw std::invalid_argument("eigenvalue_derivative: dA dimension mismatch");
  const Complex yx = pair.left.transpose() * pair.right;
  if (std::abs(yx) <= 1e-12)
    throw DegenerateEigenvectorError("eigenvalue_derivative: y^T x vanishes");
  const Complex num = pair.left.transpose() * (da * pair.right);
  return num / yx;
}

double abs_eigenvalue_derivative(Complex lambda, Complex dlambda) {
  const double mod = std::abs(lambda);
  if (mod <= 1e-14)
    throw ZeroEigenvalueError("abs_eigenvalue_derivative: |lambda| too small");
  return (std::conj(lambda) / mod * dlambda).real();
}

namespace {

RhoGradient central_diff_gradient(const ProblemSpec& problem, const ParameterVector& p,
                                  const Frequency& theta, double t, EvalCounter& counter) {
  RhoGradient g;
  g.values.resize(static_cast<std::size_t>(problem.n));
  for (int j = 0; j < problem.n; ++j) {
    ParameterVector pp = p, pm = p;
    pp[static_cast<std::size_t>(j)] += t;
    pm[static_cast<std::size_t>(j)] -= t;
    const double fp = rho_at(problem, pp, theta, counter);
    const double fm = rho_at(problem, pm, theta, counter);
    g.values[static_cast<std::size_t>(j)] = (fp - fm) / (2.0 * t);
  }
  return g;
}

ComplexMatrix symbol_derivative(const ProblemSpec& problem, const ParameterVector& p,
                                const Frequency& theta, int j) {
  if (problem.error_symbol_derivative) return problem.error_symbol_derivative(p, theta, j);
  // Entries of the symbol are smooth in p; difference them directly.
  const double h = 1e-7;
  ParameterVector pp = p, pm = p;
  pp[static_cast<std::size_t>(j)] += h;
  pm[static_cast<std::size_t>(j)] -= h;
  return (problem.error_symbol(pp, theta) - problem.error_symbol(pm, theta)) / (2.0 * h);
}

}  // namespace

RhoGradient rho_gradient(const ProblemSpec& problem, const ParameterVector& p,
                         const Frequency& theta, const GradientMode& mode, EvalCounter& counter) {
  problem.validate_params(p);
  switch (mode.kind) {
    case GradientKind::None:
      throw std::invalid_argument("rho_gradient: gradient mode is None");
    case GradientKind::CentralDiff:
      return central_diff_gradient(problem, p, theta, mode.step, counter);
    case GradientKind::Analytic:
      break;
  }

  const Frequency g = guard_frequency(theta);
  try {
    const ComplexMatrix e = problem.error_symbol(p, g);
    const EigenPair pair = dominant_pair(e);
    RhoGradient out;
    out.values.resize(static_cast<std::size_t>(problem.n));
    for (int j = 0; j < problem.n; ++j) {
      const Complex dl = eigenvalue_derivative(pair, symbol_derivative(problem, p, g, j));
      out.values[static_cast<std::size_t>(j)] = abs_eigenvalue_derivative(pair.value, dl);
    }
    return out;
  } catch (const DegenerateEigenvectorError&) {
  } catch (const ZeroEigenvalueError&) {
  }
  RhoGradient out = central_diff_gradient(problem, p, theta, 1e-8, counter);
  out.fallback = true;
  return out;
}

}  // namespace lfa
