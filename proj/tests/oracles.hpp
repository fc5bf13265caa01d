#pragma once

// Reference computations used only by the tests. None of them call into the
// library's own algorithms, so agreement is evidence rather than tautology.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;

// Σ built from its definition, independent of the library helper.
inline RealMatrix sigma(int n) {
  RealMatrix s = RealMatrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    s(i, n + i) = 1.0;
    s(n + i, i) = -1.0;
  }
  return s;
}

// exp(A) by the plain power series in long double, summed until the terms
// stop contributing. Only meant for ‖A‖ of order ten or less.
inline RealMatrix expm_series(const RealMatrix& a) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LMat al = a.cast<long double>();
  LMat term = LMat::Identity(a.rows(), a.cols());
  LMat sum = term;
  for (int k = 1; k < 400; ++k) {
    term = (term * al) / static_cast<long double>(k);
    sum += term;
    if (k > 10 && term.cwiseAbs().maxCoeff() < 1e-30L * sum.cwiseAbs().maxCoeff()) break;
  }
  return sum.cast<double>();
}

inline RealMatrix random_symmetric(std::mt19937_64& rng, int dim, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  RealMatrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  return scale * 0.5 * (a + a.transpose());
}

// Random symplectic matrix from shears [[I,0],[S,I]], [[I,S],[0,I]] and
// blocks diag(A, A^{-T}), each symplectic by direct multiplication.
inline RealMatrix random_symplectic(std::mt19937_64& rng, int n, double scale = 0.4) {
  const RealMatrix id = RealMatrix::Identity(n, n);
  RealMatrix out = RealMatrix::Identity(2 * n, 2 * n);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int round = 0; round < 2; ++round) {
    RealMatrix lower = RealMatrix::Identity(2 * n, 2 * n);
    lower.bottomLeftCorner(n, n) = random_symmetric(rng, n, scale);
    RealMatrix upper = RealMatrix::Identity(2 * n, 2 * n);
    upper.topRightCorner(n, n) = random_symmetric(rng, n, scale);
    RealMatrix a = id;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) += scale * 0.5 * g(rng);
    RealMatrix block = RealMatrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = a;
    block.bottomRightCorner(n, n) = a.inverse().transpose();
    out = out * lower * block * upper;
  }
  return out;
}

// Valid mixed-state dispersion S·diag(ν, ν)·Sᵀ with symplectic S, ν >= ½.
inline RealMatrix random_dispersion(std::mt19937_64& rng, int n, bool pure = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealVector nu(2 * n);
  for (int i = 0; i < n; ++i) nu(i) = nu(n + i) = pure ? 0.5 : 0.5 + u(rng);
  const RealMatrix s = random_symplectic(rng, n);
  RealMatrix m = s * nu.asDiagonal() * s.transpose();
  return 0.5 * (m + m.transpose());
}

inline RealVector random_vector(std::mt19937_64& rng, int dim, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  RealVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = g(rng);
  return v;
}

// Gaussian density normalized under ∏ dp dq / 2π, written out directly.
inline double gaussian_wigner(const RealVector& mean, const RealMatrix& m, const RealVector& x) {
  const RealVector d = x - mean;
  return std::exp(-0.5 * d.dot(m.ldlt().solve(d))) / std::sqrt(m.determinant());
}

// Composite trapezoid on [a, b] with n intervals.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + h * i);
  return s * h;
}

inline Complex trapezoid_complex(const std::function<Complex(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  Complex s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + h * i);
  return s * h;
}

inline double trapezoid_2d(const std::function<double(double, double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      s += wi * wj * f(a + h * i, a + h * j);
    }
  }
  return s * h * h;
}

// Physicists' Hermite polynomial from the explicit sum.
inline double hermite_explicit(int n, double x) {
  double s = 0.0;
  for (int m = 0; m <= n / 2; ++m) {
    s += std::pow(-1.0, m) * std::tgamma(n + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(n - 2.0 * m + 1.0)) *
         std::pow(2.0 * x, n - 2 * m);
  }
  return s;
}

// Laguerre L_n^α from the explicit finite sum.
inline double laguerre_explicit(int n, double alpha, double x) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double binom = std::tgamma(n + alpha + 1.0) / (std::tgamma(n - k + 1.0) * std::tgamma(alpha + k + 1.0));
    s += std::pow(-1.0, k) * binom * std::pow(x, k) / std::tgamma(k + 1.0);
  }
  return s;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// Stationary oscillator eigenfunction ⟨x|n⟩, by the explicit Hermite sum.
inline double fock_wavefunction(int n, double x) {
  return std::pow(kPi, -0.25) / std::sqrt(std::pow(2.0, n) * factorial(n)) * hermite_explicit(n, x) *
         std::exp(-0.5 * x * x);
}

}  // namespace oracle
