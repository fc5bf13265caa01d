#include "phasespace/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace phasespace {

namespace {

constexpr double kNonRealTolerance = 1e-10;
constexpr int kNormSamples = 64;

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::kInvalidArgument, "time must be finite and non-negative, got " + std::to_string(t));
  }
}

void check_steps(int n_steps) {
  if (n_steps < 1) fail(ErrorCode::kInvalidArgument, "n_steps must be positive");
}

template <typename Mat, typename Vec>
struct Flow {
  Mat m;
  Vec v;
};

// Classical RK4 for X' = X·G(t), v' = X·g(t). The generator is evaluated at
// t, t + h/2 (once, shared by both midpoint stages) and t + h.
template <typename Mat, typename Vec, typename Generator>
Flow<Mat, Vec> rk4(Flow<Mat, Vec> x, double t_final, int n_steps, Generator generator) {
  const double h = t_final / n_steps;
  for (int k = 0; k < n_steps; ++k) {
    const double t = t_final * k / n_steps;
    const auto [g0, d0] = generator(t);
    const auto [g1, d1] = generator(t + 0.5 * h);
    const auto [g2, d2] = generator(t + h);

    const Mat k1 = x.m * g0;
    const Vec l1 = x.m * d0;
    const Mat x2 = x.m + (0.5 * h) * k1;
    const Mat k2 = x2 * g1;
    const Vec l2 = x2 * d1;
    const Mat x3 = x.m + (0.5 * h) * k2;
    const Mat k3 = x3 * g1;
    const Vec l3 = x3 * d1;
    const Mat x4 = x.m + h * k3;
    const Mat k4 = x4 * g2;
    const Vec l4 = x4 * d2;

    x.m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    x.v += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  }
  return x;
}

void check_hamiltonian_matrix(const RealMatrix& b, int dim) {
  if (b.rows() != dim || b.cols() != dim) {
    fail(ErrorCode::kDimensionMismatch, "B must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  const double asym = max_abs(b - b.transpose());
  if (!(asym < kSymmetryTolerance)) {
    fail(ErrorCode::kNonSymmetricB, "B is not symmetric (max |B - Bt| = " + std::to_string(asym) + ")");
  }
}

RealVector drive_or_zero(const RealVector& c, int dim) {
  if (c.size() == 0) return RealVector::Zero(dim);
  if (c.size() != dim) fail(ErrorCode::kDimensionMismatch, "C must have length " + std::to_string(dim));
  return c;
}

// exp of [[a, v], [0, 0]] returns (exp(a t), ∫₀ᵗ exp(a τ) dτ · v).
template <typename Scalar>
std::pair<Eigen::Matrix<Scalar, -1, -1>, Eigen::Matrix<Scalar, -1, 1>> bordered_exp(
    const Eigen::Matrix<Scalar, -1, -1>& a, const Eigen::Matrix<Scalar, -1, 1>& v, double t) {
  const Eigen::Index n = a.rows();
  Eigen::Matrix<Scalar, -1, -1> g = Eigen::Matrix<Scalar, -1, -1>::Zero(n + 1, n + 1);
  g.topLeftCorner(n, n) = a * Scalar(t);
  g.topRightCorner(n, 1) = v * Scalar(t);
  const Eigen::Matrix<Scalar, -1, -1> e = expm(g);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, 1)};
}

void check_defect(double defect, double tol, const char* what) {
  if (!(defect <= tol)) {
    fail(ErrorCode::kSymplecticDriftExceeded,
         std::string(what) + " symplectic defect " + std::to_string(defect) + " exceeds tolerance " +
             std::to_string(tol));
  }
}

}  // namespace

SymplecticForm SymplecticForm::of(int n_modes) {
  if (n_modes < 1) fail(ErrorCode::kInvalidArgument, "n_modes must be positive");
  return {n_modes, symplectic_form(n_modes), ladder_symplectic_form(n_modes), mode_swap(n_modes),
          ladder_to_quadrature(n_modes)};
}

QuadraticHamiltonian::QuadraticHamiltonian(int n_modes, bool constant, MatrixFn b, VectorFn c)
    : n_modes_(n_modes), constant_(constant), b_(std::move(b)), c_(std::move(c)) {}

QuadraticHamiltonian QuadraticHamiltonian::constant(const RealMatrix& b, const RealVector& c) {
  if (b.rows() == 0 || b.rows() % 2 != 0) {
    fail(ErrorCode::kDimensionMismatch, "B must be a non-empty 2N x 2N matrix");
  }
  const int dim = static_cast<int>(b.rows());
  check_hamiltonian_matrix(b, dim);
  RealVector drive = drive_or_zero(c, dim);
  return QuadraticHamiltonian(
      dim / 2, true, [b](double) { return b; }, [drive](double) { return drive; });
}

QuadraticHamiltonian QuadraticHamiltonian::time_dependent(int n_modes, MatrixFn b, VectorFn c) {
  if (n_modes < 1) fail(ErrorCode::kInvalidArgument, "n_modes must be positive");
  if (!b) fail(ErrorCode::kInvalidArgument, "B(t) callable is empty");
  return QuadraticHamiltonian(n_modes, false, std::move(b), std::move(c));
}

RealMatrix QuadraticHamiltonian::b(double t) const {
  RealMatrix m = b_(t);
  check_hamiltonian_matrix(m, dim());
  return m;
}

RealVector QuadraticHamiltonian::c(double t) const {
  if (!c_) return RealVector::Zero(dim());
  return drive_or_zero(c_(t), dim());
}

double QuadraticHamiltonian::norm_bound(double t_final) const {
  const int samples = constant_ ? 1 : kNormSamples;
  double bound = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double t = samples == 0 ? 0.0 : t_final * k / samples;
    bound = std::max(bound, b(t).cwiseAbs().rowwise().sum().maxCoeff());
  }
  return bound;
}

PropagatorReal::PropagatorReal(RealMatrix lambda, RealVector delta, double time, double tol)
    : lambda_(std::move(lambda)), delta_(std::move(delta)), time_(time) {
  if (lambda_.rows() != lambda_.cols() || lambda_.rows() % 2 != 0 || lambda_.rows() == 0 ||
      delta_.size() != lambda_.rows()) {
    fail(ErrorCode::kDimensionMismatch, "propagator needs a 2N x 2N matrix and a 2N vector");
  }
  check_defect(symplectic_defect(lambda_), tol, "real propagator");
}

PropagatorReal PropagatorReal::identity(int n_modes) {
  return PropagatorReal(RealMatrix::Identity(2 * n_modes, 2 * n_modes), RealVector::Zero(2 * n_modes),
                        0.0);
}

PropagatorReal PropagatorReal::inverse(double tol) const {
  // Λ⁻¹ = -ΣΛᵀΣ for symplectic Λ; use LU so that a slightly non-symplectic Λ
  // still inverts exactly.
  const RealMatrix inv = inverse_checked(lambda_, "Lambda");
  return PropagatorReal(inv, -inv * delta_, -time_, tol);
}

PropagatorComplex::PropagatorComplex(ComplexMatrix m, ComplexVector n_vec, double time, double tol)
    : m_(std::move(m)), n_vec_(std::move(n_vec)), time_(time) {
  if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0 || n_vec_.size() != m_.rows()) {
    fail(ErrorCode::kDimensionMismatch, "propagator needs a 2N x 2N matrix and a 2N vector");
  }
  check_defect(ladder_symplectic_defect(m_), tol, "complex propagator");
}

double symplectic_defect(const RealMatrix& lambda) {
  if (lambda.rows() != lambda.cols() || lambda.rows() % 2 != 0) {
    fail(ErrorCode::kDimensionMismatch, "symplectic_defect needs a square 2N x 2N matrix");
  }
  if (lambda.rows() == 0) return 0.0;
  const RealMatrix sigma = symplectic_form(static_cast<int>(lambda.rows() / 2));
  return max_abs(lambda * sigma * lambda.transpose() - sigma);
}

double ladder_symplectic_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    fail(ErrorCode::kDimensionMismatch, "ladder_symplectic_defect needs a square 2N x 2N matrix");
  }
  if (m.rows() == 0) return 0.0;
  const ComplexMatrix sigma = ladder_symplectic_form(static_cast<int>(m.rows() / 2));
  return max_abs(m * sigma * m.transpose() - sigma);
}

int default_steps(const QuadraticHamiltonian& h, double t_final) {
  check_time(t_final);
  const double steps = std::ceil(200.0 * t_final * h.norm_bound(t_final));
  return std::max(1, static_cast<int>(std::min(steps, 1e9)));
}

PropagatorReal evolve_real(const QuadraticHamiltonian& h, double t_final, int n_steps, double tol) {
  check_time(t_final);
  check_steps(n_steps);
  const int dim = h.dim();
  const RealMatrix sigma = symplectic_form(h.n_modes());
  Flow<RealMatrix, RealVector> x{RealMatrix::Identity(dim, dim), RealVector::Zero(dim)};
  x = rk4(std::move(x), t_final, n_steps, [&](double t) {
    return std::pair<RealMatrix, RealVector>{sigma * h.b(t), sigma * h.c(t)};
  });
  return PropagatorReal(std::move(x.m), std::move(x.v), t_final, tol);
}

PropagatorComplex evolve_complex(const QuadraticHamiltonian& h, double t_final, int n_steps,
                                 double tol) {
  check_time(t_final);
  check_steps(n_steps);
  const int dim = h.dim();
  const SymplecticForm form = SymplecticForm::of(h.n_modes());
  const ComplexMatrix ut = form.u.transpose();
  Flow<ComplexMatrix, ComplexVector> x{ComplexMatrix::Identity(dim, dim), ComplexVector::Zero(dim)};
  x = rk4(std::move(x), t_final, n_steps, [&](double t) {
    const ComplexMatrix d = ut * h.b(t).cast<Complex>() * form.u;
    const ComplexVector e = ut * h.c(t).cast<Complex>();
    return std::pair<ComplexMatrix, ComplexVector>{form.ladder_sigma * d, form.ladder_sigma * e};
  });
  return PropagatorComplex(std::move(x.m), std::move(x.v), t_final, tol);
}

PropagatorReal propagator_const(const RealMatrix& b, const RealVector& c, double t, double tol) {
  check_time(t);
  const QuadraticHamiltonian h = QuadraticHamiltonian::constant(b, c);
  const RealMatrix sigma = symplectic_form(h.n_modes());
  auto [lambda, delta] = bordered_exp<double>(sigma * h.b(0.0), sigma * h.c(0.0), t);
  return PropagatorReal(std::move(lambda), std::move(delta), t, tol);
}

PropagatorComplex propagator_const_complex(const RealMatrix& b, const RealVector& c, double t,
                                           double tol) {
  check_time(t);
  const QuadraticHamiltonian h = QuadraticHamiltonian::constant(b, c);
  const SymplecticForm form = SymplecticForm::of(h.n_modes());
  const ComplexMatrix d = form.u.transpose() * h.b(0.0).cast<Complex>() * form.u;
  const ComplexVector e = form.u.transpose() * h.c(0.0).cast<Complex>();
  auto [m, n_vec] = bordered_exp<Complex>(form.ladder_sigma * d, form.ladder_sigma * e, t);
  return PropagatorComplex(std::move(m), std::move(n_vec), t, tol);
}

PropagatorComplex real_to_complex(const PropagatorReal& p, double tol) {
  const ComplexMatrix u = ladder_to_quadrature(p.n_modes());
  const ComplexMatrix ud = u.adjoint();
  return PropagatorComplex(ud * p.lambda().cast<Complex>() * u, ud * p.delta().cast<Complex>(), p.time(),
                           tol);
}

PropagatorReal complex_to_real(const PropagatorComplex& p, double tol) {
  const ComplexMatrix u = ladder_to_quadrature(p.n_modes());
  const ComplexMatrix lambda = u * p.m() * u.adjoint();
  const ComplexVector delta = u * p.n_vec();
  const double residue = std::max(max_abs(lambda.imag()), max_abs(delta.imag()));
  if (residue > kNonRealTolerance) {
    fail(ErrorCode::kNonRealResult,
         "complex propagator does not map to a real one (imaginary residue " + std::to_string(residue) + ")");
  }
  return PropagatorReal(lambda.real(), delta.real(), p.time(), tol);
}

PropagatorReal compose(const PropagatorReal& first, const PropagatorReal& second, double tol) {
  if (first.n_modes() != second.n_modes()) {
    fail(ErrorCode::kDimensionMismatch, "cannot compose propagators of different mode counts");
  }
  return PropagatorReal(first.lambda() * second.lambda(), first.lambda() * second.delta() + first.delta(),
                        first.time() + second.time(), tol);
}

}  // namespace phasespace
