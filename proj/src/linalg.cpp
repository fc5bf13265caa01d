#include "phasespace/linalg.hpp"

#include <cmath>
#include <string>

namespace phasespace {

namespace {

const char* const kErrorNames[] = {
    "InvalidArgument",    "ConfigInvalid",      "DimensionMismatch",
    "NonSymmetricB",      "SymplecticDriftExceeded", "NonRealResult",
    "SingularDispersion", "SingularMatrix",     "InvalidState",
    "IndexOutOfRange",    "AsymmetricR",        "DegreeTooLarge",
    "NegativeProbability", "GridTooCoarse",     "WronskianDrift",
    "BranchTrackingLost", "NotPeriodic",        "NullState",
};

template <typename Mat>
Mat inverse_impl(const Mat& a, std::string_view what, ErrorCode code) {
  if (a.rows() != a.cols()) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + " is not square");
  }
  Eigen::PartialPivLU<Mat> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > kMinReciprocalCondition)) {
    fail(code, std::string(what) + " is singular (reciprocal condition " + std::to_string(rcond) + ")");
  }
  return lu.inverse();
}

}  // namespace

std::string_view error_name(ErrorCode code) {
  return kErrorNames[static_cast<int>(code)];
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

RealMatrix inverse_checked(const RealMatrix& a, std::string_view what, ErrorCode code) {
  return inverse_impl(a, what, code);
}

ComplexMatrix inverse_checked(const ComplexMatrix& a, std::string_view what, ErrorCode code) {
  return inverse_impl(a, what, code);
}

RealMatrix symplectic_form(int n_modes) {
  const int n = n_modes;
  RealMatrix s = RealMatrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n).setIdentity();
  s.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
  return s;
}

ComplexMatrix ladder_symplectic_form(int n_modes) {
  const int n = n_modes;
  const Complex i(0.0, 1.0);
  ComplexMatrix s = ComplexMatrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n) = i * ComplexMatrix::Identity(n, n);
  s.bottomLeftCorner(n, n) = -i * ComplexMatrix::Identity(n, n);
  return s;
}

RealMatrix mode_swap(int n_modes) {
  const int n = n_modes;
  RealMatrix s = RealMatrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n).setIdentity();
  s.bottomLeftCorner(n, n).setIdentity();
  return s;
}

ComplexMatrix ladder_to_quadrature(int n_modes) {
  const int n = n_modes;
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  ComplexMatrix u(2 * n, 2 * n);
  u.topLeftCorner(n, n) = -i * h * ComplexMatrix::Identity(n, n);
  u.topRightCorner(n, n) = i * h * ComplexMatrix::Identity(n, n);
  u.bottomLeftCorner(n, n) = h * ComplexMatrix::Identity(n, n);
  u.bottomRightCorner(n, n) = h * ComplexMatrix::Identity(n, n);
  return u;
}

}  // namespace phasespace
