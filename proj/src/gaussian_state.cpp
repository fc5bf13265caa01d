#include "phasespace/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace phasespace {

namespace {

constexpr double kNegativePhotonSlack = 1e-10;
constexpr double kNonRealTolerance = 1e-8;
constexpr double kRoundoffFloor = 1e-14;

RealMatrix mirror_upper(const RealMatrix& m) {
  RealMatrix s = m.triangularView<Eigen::Upper>();
  s.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
  return s;
}

void check_mode_count(const GaussianState& state, const ComplexVector& beta) {
  if (beta.size() != state.n_modes()) {
    fail(ErrorCode::kDimensionMismatch, "beta must have one entry per mode");
  }
}

}  // namespace

GaussianState::GaussianState(RealVector mean, const RealMatrix& dispersion) : mean_(std::move(mean)) {
  const Eigen::Index dim = mean_.size();
  if (dim == 0 || dim % 2 != 0) fail(ErrorCode::kDimensionMismatch, "mean must be a non-empty 2N vector");
  if (dispersion.rows() != dim || dispersion.cols() != dim) {
    fail(ErrorCode::kDimensionMismatch, "dispersion must be 2N x 2N with 2N = " + std::to_string(dim));
  }
  if (!mean_.allFinite() || !dispersion.allFinite()) {
    fail(ErrorCode::kInvalidState, "state contains non-finite numbers");
  }
  dispersion_ = mirror_upper(dispersion);

  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(dispersion_, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    fail(ErrorCode::kInvalidState, "dispersion matrix is not positive definite");
  }
  const double margin = uncertainty_margin();
  if (margin < -kUncertaintySlack) {
    fail(ErrorCode::kInvalidState,
         "dispersion violates the uncertainty relation (min eigenvalue of M + iS/2 is " +
             std::to_string(margin) + ")");
  }
}

GaussianState GaussianState::from_upper(int n_modes, RealVector mean, std::span<const double> upper) {
  const int dim = 2 * n_modes;
  if (n_modes < 1) fail(ErrorCode::kDimensionMismatch, "n_modes must be positive");
  if (static_cast<int>(upper.size()) != dim * (dim + 1) / 2) {
    fail(ErrorCode::kDimensionMismatch,
         "upper triangle needs " + std::to_string(dim * (dim + 1) / 2) + " entries");
  }
  if (mean.size() != dim) fail(ErrorCode::kDimensionMismatch, "mean must have 2N entries");
  RealMatrix m = RealMatrix::Zero(dim, dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) m(i, j) = upper[k++];
  }
  return GaussianState(std::move(mean), m);
}

GaussianState GaussianState::vacuum(int n_modes) {
  return thermal(n_modes, 0.0);
}

GaussianState GaussianState::coherent(RealVector mean) {
  const Eigen::Index dim = mean.size();
  return GaussianState(std::move(mean), 0.5 * RealMatrix::Identity(dim, dim));
}

GaussianState GaussianState::thermal(int n_modes, double mean_photons) {
  if (n_modes < 1) fail(ErrorCode::kDimensionMismatch, "n_modes must be positive");
  if (!(mean_photons >= 0.0)) fail(ErrorCode::kInvalidState, "thermal occupation must be non-negative");
  return GaussianState(RealVector::Zero(2 * n_modes),
                       (mean_photons + 0.5) * RealMatrix::Identity(2 * n_modes, 2 * n_modes));
}

std::vector<double> GaussianState::upper_triangle() const {
  std::vector<double> out;
  out.reserve(dim() * (dim() + 1) / 2);
  for (int i = 0; i < dim(); ++i) {
    for (int j = i; j < dim(); ++j) out.push_back(dispersion_(i, j));
  }
  return out;
}

double GaussianState::uncertainty_margin() const {
  const ComplexMatrix h =
      dispersion_.cast<Complex>() + Complex(0.0, 0.5) * symplectic_form(n_modes()).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

WignerEvaluator::WignerEvaluator(const GaussianState& state) : mean_(state.mean()) {
  Eigen::PartialPivLU<RealMatrix> lu(state.dispersion());
  if (!(lu.rcond() > kMinReciprocalCondition)) {
    fail(ErrorCode::kSingularDispersion, "dispersion matrix is numerically singular");
  }
  inverse_ = lu.inverse();
  prefactor_ = 1.0 / std::sqrt(lu.determinant());
}

double WignerEvaluator::operator()(const RealVector& point) const {
  if (point.size() != mean_.size()) fail(ErrorCode::kDimensionMismatch, "point must have 2N entries");
  const RealVector d = point - mean_;
  return prefactor_ * std::exp(-0.5 * d.dot(inverse_ * d));
}

double wigner(const GaussianState& state, const RealVector& point) {
  return WignerEvaluator(state)(point);
}

GaussianState evolve(const GaussianState& state, const PropagatorReal& prop) {
  if (prop.n_modes() != state.n_modes()) {
    fail(ErrorCode::kDimensionMismatch, "propagator and state have different mode counts");
  }
  const RealMatrix inv = inverse_checked(prop.lambda(), "Lambda");
  const RealMatrix m = inv * state.dispersion() * inv.transpose();
  // Mirror the upper triangle after explicit symmetrization so that rounding
  // in the two triangles does not bias the result.
  return GaussianState(inv * (state.mean() - prop.delta()), 0.5 * (m + m.transpose()));
}

ComplexVector q_argument(const ComplexVector& beta) {
  const Eigen::Index n = beta.size();
  ComplexVector b(2 * n);
  b.head(n) = beta.conjugate();
  b.tail(n) = beta;
  return b;
}

double q_function(const QFunctionParams& params, const ComplexVector& beta) {
  const int n = params.n_modes();
  if (beta.size() != n) fail(ErrorCode::kDimensionMismatch, "beta must have one entry per mode");
  const ComplexVector b = q_argument(beta);
  const ComplexMatrix k = params.r + mode_swap(n).cast<Complex>();
  const Complex exponent = -0.5 * (b.transpose() * k * b).value() + (b.transpose() * params.ry).value();
  return params.p0 * std::exp(exponent.real());
}

double q_function(const GaussianState& state, const ComplexVector& beta) {
  check_mode_count(state, beta);
  return q_function(to_q_params(state), beta);
}

QFunctionParams to_q_params(const GaussianState& state) {
  const int n = state.n_modes();
  const int dim = state.dim();
  const RealMatrix identity = RealMatrix::Identity(dim, dim);
  const RealMatrix& m = state.dispersion();
  const RealVector& mean = state.mean();
  const ComplexMatrix u = ladder_to_quadrature(n);

  const RealMatrix plus_inv = inverse_checked(RealMatrix(identity + 2.0 * m), "(I + 2M)");
  QFunctionParams params;
  params.r = 2.0 * u.adjoint() * plus_inv.cast<Complex>() * u.conjugate() - mode_swap(n).cast<Complex>();
  // Entries of R are bounded by 1; residue of the 1/√2 factors in U would
  // otherwise leave exactly-zero photon probabilities (vacuum n > 0, odd n of
  // squeezed vacuum) at the 1e-16 level.
  params.r = params.r.unaryExpr([](Complex z) {
    return Complex(std::abs(z.real()) < kRoundoffFloor ? 0.0 : z.real(),
                   std::abs(z.imag()) < kRoundoffFloor ? 0.0 : z.imag());
  });
  params.ry = 2.0 * u.adjoint() * (plus_inv * mean).cast<Complex>();

  if (mean.isZero(0.0)) {
    params.y = ComplexVector::Zero(dim);
  } else {
    Eigen::PartialPivLU<RealMatrix> lu(identity - 2.0 * m);
    if (lu.rcond() > kMinReciprocalCondition) {
      params.y = 2.0 * u.transpose() * lu.solve(mean).cast<Complex>();
    }
  }

  const double det = (m + 0.5 * identity).determinant();
  params.p0 = std::exp(-mean.dot(plus_inv * mean)) / std::sqrt(det);
  return params;
}

GaussianState from_q_params(const QFunctionParams& params) {
  const int n = params.n_modes();
  const int dim = 2 * n;
  if (params.r.rows() != dim || params.r.cols() != dim || dim == 0 || params.ry.size() != dim) {
    fail(ErrorCode::kDimensionMismatch, "Q-function parameters have inconsistent dimensions");
  }
  if (max_abs(params.r - params.r.transpose()) > kSymmetryTolerance * std::max(1.0, max_abs(params.r))) {
    fail(ErrorCode::kAsymmetricR, "R is not symmetric");
  }
  const ComplexMatrix u = ladder_to_quadrature(n);
  const ComplexMatrix k_inv = inverse_checked(ComplexMatrix(params.r + mode_swap(n).cast<Complex>()),
                                              "(R + sigma_Nx)");
  const ComplexMatrix m = u.conjugate() * k_inv * u.adjoint();
  const ComplexVector mean = u.conjugate() * k_inv * params.ry;
  const double residue = std::max(max_abs(m.imag()), max_abs(mean.imag()));
  if (residue > kNonRealTolerance * std::max(1.0, max_abs(m))) {
    fail(ErrorCode::kNonRealResult,
         "Q-function parameters do not describe a real Gaussian state (residue " + std::to_string(residue) +
             ")");
  }
  const RealMatrix dispersion = m.real() - 0.5 * RealMatrix::Identity(dim, dim);
  return GaussianState(mean.real(), 0.5 * (dispersion + dispersion.transpose()));
}

MeanPhotonNumber mean_photon(const GaussianState& state, int mode) {
  const int n = state.n_modes();
  if (mode < 0 || mode >= n) {
    fail(ErrorCode::kIndexOutOfRange, "mode index " + std::to_string(mode) + " out of range");
  }
  const RealMatrix& m = state.dispersion();
  const RealVector& mean = state.mean();
  const double p = mean(mode);
  const double q = mean(n + mode);
  double value = 0.5 * (m(mode, mode) + m(n + mode, n + mode) - 1.0) + 0.5 * (p * p + q * q);
  MeanPhotonNumber out{value, false};
  if (value < 0.0) {
    if (value < -kNegativePhotonSlack) {
      fail(ErrorCode::kInvalidState, "mean photon number is negative: " + std::to_string(value));
    }
    out = {0.0, true};
  }
  return out;
}

}  // namespace phasespace
