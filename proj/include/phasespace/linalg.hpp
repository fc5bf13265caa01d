#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string_view>

#include "phasespace/error.hpp"

namespace phasespace {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Reciprocal condition estimates below this count as singular.
inline constexpr double kMinReciprocalCondition = 1e-12;

// Largest entry magnitude, max_ij |a_ij|.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// Taylor degree used after scaling; the scaled matrix has 1-norm <= 1/2.
inline constexpr int kExpmTaylorDegree = 18;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled by 2^-s until its 1-norm is at most 1/2, the series
/// is summed to degree kExpmTaylorDegree by Horner's rule and the result is
/// squared s times.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols()) fail(ErrorCode::kDimensionMismatch, "expm: matrix is not square");
  const Eigen::Index n = a.rows();
  const double norm1 = n == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm1;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++squarings;
  }
  const Mat x = a * Scalar(std::ldexp(1.0, -squarings));
  const Mat identity = Mat::Identity(n, n);
  Mat result = identity;
  for (int k = kExpmTaylorDegree; k >= 1; --k) {
    result = identity + (x * result) * Scalar(1.0 / k);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

// LU inverse with a reciprocal-condition guard. `what` names the matrix in the
// error message so callers can tell which inverse failed.
RealMatrix inverse_checked(const RealMatrix& a, std::string_view what,
                           ErrorCode code = ErrorCode::kSingularMatrix);
ComplexMatrix inverse_checked(const ComplexMatrix& a, std::string_view what,
                              ErrorCode code = ErrorCode::kSingularMatrix);

// Σ = [[0, I], [-I, 0]] for quadrature ordering (p1..pN, q1..qN).
RealMatrix symplectic_form(int n_modes);

// σ = [[0, iI], [-iI, 0]], the form preserved by propagators acting on
// (a1..aN, a1†..aN†).
ComplexMatrix ladder_symplectic_form(int n_modes);

// σ_Nx = [[0, I], [I, 0]].
RealMatrix mode_swap(int n_modes);

// U = (1/√2) [[-iI, iI], [I, I]]; maps ladder operators to quadratures,
// Q = U·(a, a†).
ComplexMatrix ladder_to_quadrature(int n_modes);

}  // namespace phasespace
