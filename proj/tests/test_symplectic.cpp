#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "phasespace/symplectic.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;

RealMatrix harmonic_b(int n) { return RealMatrix::Identity(2 * n, 2 * n); }

// Positive-definite B with spectral norm at most `bound`.
RealMatrix random_positive_b(std::mt19937_64& rng, int n, double bound) {
  const RealMatrix a = oracle::random_symmetric(rng, 2 * n, 1.0);
  RealMatrix b = a * a.transpose() + 0.1 * RealMatrix::Identity(2 * n, 2 * n);
  const double top = Eigen::SelfAdjointEigenSolver<RealMatrix>(b).eigenvalues().maxCoeff();
  return b * (bound / top);
}

}  // namespace

TEST(Expm, MatchesPowerSeries) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const RealMatrix a = oracle::random_symmetric(rng, 4, 0.5) + oracle::random_symmetric(rng, 4, 0.5) * oracle::sigma(2);
    const RealMatrix got = expm(RealMatrix(a * 3.0));
    const RealMatrix want = oracle::expm_series(a * 3.0);
    EXPECT_LT(max_abs(got - want), 1e-12 * std::max(1.0, max_abs(want)));
  }
}

TEST(Expm, ZeroAndDiagonal) {
  EXPECT_EQ(max_abs(expm(RealMatrix(RealMatrix::Zero(3, 3))) - RealMatrix::Identity(3, 3)), 0.0);
  RealMatrix d = RealMatrix::Zero(2, 2);
  d(0, 0) = 1.5;
  d(1, 1) = -2.0;
  const RealMatrix e = expm(d);
  EXPECT_NEAR(e(0, 0), std::exp(1.5), 1e-14 * std::exp(1.5));
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);
}

TEST(Expm, RejectsNonSquare) {
  EXPECT_THROW(expm(RealMatrix(RealMatrix::Zero(2, 3))), Error);
}

TEST(SymplecticForm, Identities) {
  for (int n = 1; n <= 3; ++n) {
    const SymplecticForm f = SymplecticForm::of(n);
    const int dim = 2 * n;
    EXPECT_EQ(max_abs(f.sigma - oracle::sigma(n)), 0.0);
    EXPECT_LT(max_abs(f.sigma * f.sigma + RealMatrix::Identity(dim, dim)), 1e-15);
    EXPECT_LT(max_abs(f.u.adjoint() * f.u - ComplexMatrix::Identity(dim, dim)), 1e-15);
    // σ = U†ΣU* and UᵀU = σ_Nx.
    EXPECT_LT(max_abs(f.u.adjoint() * f.sigma.cast<Complex>() * f.u.conjugate() - f.ladder_sigma), 1e-15);
    EXPECT_LT(max_abs(f.u.transpose() * f.u - f.swap.cast<Complex>()), 1e-15);
  }
}

TEST(SymplecticForm, LadderOrdering) {
  // Q = U·A with a = (q + ip)/√2: check on the c-number pair a = 1 + 2i.
  const SymplecticForm f = SymplecticForm::of(1);
  ComplexVector a(2);
  a << Complex(1.0, 2.0), Complex(1.0, -2.0);
  const ComplexVector q = f.u * a;
  EXPECT_NEAR(q(0).real(), 2.0 * std::sqrt(2.0), 1e-15);  // p = √2 Im a
  EXPECT_NEAR(q(1).real(), std::sqrt(2.0), 1e-15);        // q = √2 Re a
  EXPECT_NEAR(std::abs(q(0).imag()) + std::abs(q(1).imag()), 0.0, 1e-15);
}

TEST(Hamiltonian, Validation) {
  RealMatrix b = harmonic_b(1);
  b(0, 1) = 0.3;
  EXPECT_THROW(QuadraticHamiltonian::constant(b).b(0.0), Error);
  try {
    QuadraticHamiltonian::constant(b).b(0.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonSymmetricB);
  }
  EXPECT_THROW(QuadraticHamiltonian::constant(RealMatrix::Identity(3, 3)), Error);
  EXPECT_THROW(QuadraticHamiltonian::constant(harmonic_b(1), RealVector::Zero(3)), Error);
}

TEST(Propagator, HarmonicRotation) {
  // B = I: q̇ = p, ṗ = -q. Integral of motion Q0 = Λ(t)Q with Λ a rotation.
  for (double t : {0.3, 1.0, kPi / 2, kPi, 7.5}) {
    const PropagatorReal p = propagator_const(harmonic_b(1), RealVector(), t);
    RealMatrix want(2, 2);
    want << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    EXPECT_LT(max_abs(p.lambda() - want), 1e-13) << t;
    EXPECT_LT(symplectic_defect(p.lambda()), 1e-14);
  }
  const PropagatorReal half = propagator_const(harmonic_b(1), RealVector(), kPi);
  EXPECT_LT(max_abs(half.lambda() + RealMatrix::Identity(2, 2)), 1e-14);
}

TEST(Propagator, IntegralOfMotionAlongTrajectory) {
  // Q0 = Λ(t)Q(t) + Δ(t) must hold for the classical trajectory; check it
  // against a direct fine RK4 integration of Hamilton's equations.
  std::mt19937_64 rng(5);
  const int n = 2;
  const RealMatrix b = random_positive_b(rng, n, 1.5);
  const RealVector c = oracle::random_vector(rng, 2 * n, 0.5);
  const RealMatrix s = oracle::sigma(n);
  const RealVector q0 = oracle::random_vector(rng, 2 * n, 1.0);
  const double t = 2.0;
  const int steps = 20000;
  const double h = t / steps;
  auto rhs = [&](const RealVector& q) -> RealVector { return -s * (b * q + c); };
  RealVector q = q0;
  for (int k = 0; k < steps; ++k) {
    const RealVector k1 = rhs(q), k2 = rhs(q + 0.5 * h * k1), k3 = rhs(q + 0.5 * h * k2), k4 = rhs(q + h * k3);
    q += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const PropagatorReal p = propagator_const(b, c, t);
  EXPECT_LT(max_abs(p.lambda() * q + p.delta() - q0), 1e-10);
}

TEST(Propagator, DeltaMatchesQuadrature) {
  // Δ(t) = ∫₀ᵗ exp(ΣBτ) dτ ΣC, by Simpson on the exact exponential.
  std::mt19937_64 rng(8);
  const RealMatrix b = random_positive_b(rng, 1, 2.0);
  const RealVector c = oracle::random_vector(rng, 2, 1.0);
  const RealMatrix s = oracle::sigma(1);
  const double t = 3.0;
  const int n = 2000;
  RealVector sum = RealVector::Zero(2);
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * oracle::expm_series(s * b * (t * k / n)) * s * c;
  }
  sum *= t / n / 3.0;
  EXPECT_LT(max_abs(propagator_const(b, c, t).delta() - sum), 1e-11);
}

TEST(Propagator, RungeKuttaAgreesWithExponential) {
  std::mt19937_64 rng(21);
  const RealMatrix b = random_positive_b(rng, 2, 2.0);
  const RealVector c = oracle::random_vector(rng, 4, 1.0);
  const QuadraticHamiltonian h = QuadraticHamiltonian::time_dependent(
      2, [&](double) { return b; }, [&](double) { return c; });
  const PropagatorReal rk = evolve_real(h, 4.0, default_steps(h, 4.0));
  const PropagatorReal ex = propagator_const(b, c, 4.0);
  EXPECT_LT(max_abs(rk.lambda() - ex.lambda()), 1e-9);
  EXPECT_LT(max_abs(rk.delta() - ex.delta()), 1e-9);
}

TEST(Propagator, TimeDependentSymplectic) {
  // B(t) = I + 0.5 cos(2t)·diag(0, 1): a Mathieu-type oscillator.
  const QuadraticHamiltonian h = QuadraticHamiltonian::time_dependent(1, [](double t) {
    RealMatrix b = RealMatrix::Identity(2, 2);
    b(1, 1) += 0.5 * std::cos(2.0 * t);
    return b;
  });
  const PropagatorReal p = evolve_real(h, 10.0, default_steps(h, 10.0));
  EXPECT_LT(symplectic_defect(p.lambda()), 1e-9);
  EXPECT_NEAR(p.lambda().determinant(), 1.0, 1e-8);
}

TEST(Propagator, ComplexFormMatchesReal) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n) {
    const RealMatrix b = random_positive_b(rng, n, 2.0);
    const RealVector c = oracle::random_vector(rng, 2 * n, 1.0);
    const PropagatorReal real = propagator_const(b, c, 1.7);
    const PropagatorComplex cx = propagator_const_complex(b, c, 1.7);
    const PropagatorComplex converted = real_to_complex(real);
    EXPECT_LT(max_abs(cx.m() - converted.m()), 1e-12);
    EXPECT_LT(max_abs(cx.n_vec() - converted.n_vec()), 1e-12);
    EXPECT_LT(ladder_symplectic_defect(cx.m()), 1e-12);
    const PropagatorReal back = complex_to_real(cx);
    EXPECT_LT(max_abs(back.lambda() - real.lambda()), 1e-12);
    EXPECT_LT(max_abs(back.delta() - real.delta()), 1e-12);
  }
}

TEST(Propagator, HarmonicLadderPhase) {
  // For H = (p² + q²)/2, a(0) = e^{it}a(t), so M = diag(e^{it}, e^{-it}).
  const PropagatorComplex cx = propagator_const_complex(harmonic_b(1), RealVector(), 0.8);
  EXPECT_LT(std::abs(cx.m()(0, 0) - std::polar(1.0, 0.8)), 1e-14);
  EXPECT_LT(std::abs(cx.m()(1, 1) - std::polar(1.0, -0.8)), 1e-14);
  EXPECT_LT(std::abs(cx.m()(0, 1)) + std::abs(cx.m()(1, 0)), 1e-14);
}

TEST(Propagator, ComplexRungeKutta) {
  std::mt19937_64 rng(4);
  const RealMatrix b = random_positive_b(rng, 2, 1.0);
  const RealVector c = oracle::random_vector(rng, 4, 1.0);
  const QuadraticHamiltonian h = QuadraticHamiltonian::constant(b, c);
  const PropagatorComplex rk = evolve_complex(h, 3.0, 3000);
  const PropagatorComplex ex = propagator_const_complex(b, c, 3.0);
  EXPECT_LT(max_abs(rk.m() - ex.m()), 1e-10);
  EXPECT_LT(max_abs(rk.n_vec() - ex.n_vec()), 1e-10);
}

TEST(Propagator, ComposeAndInverse) {
  std::mt19937_64 rng(9);
  const RealMatrix b = random_positive_b(rng, 2, 1.0);
  const RealVector c = oracle::random_vector(rng, 4, 1.0);
  const PropagatorReal a = propagator_const(b, c, 0.7);
  const PropagatorReal a2 = propagator_const(b, c, 1.1);
  const PropagatorReal whole = propagator_const(b, c, 1.8);
  const PropagatorReal composed = compose(a, a2);
  EXPECT_LT(max_abs(composed.lambda() - whole.lambda()), 1e-12);
  EXPECT_LT(max_abs(composed.delta() - whole.delta()), 1e-12);
  EXPECT_DOUBLE_EQ(composed.time(), 1.8);

  const PropagatorReal inv = a.inverse();
  const PropagatorReal id = compose(a, inv);
  EXPECT_LT(max_abs(id.lambda() - RealMatrix::Identity(4, 4)), 1e-13);
  EXPECT_LT(max_abs(id.delta()), 1e-13);
}

TEST(Propagator, RejectsNonSymplectic) {
  RealMatrix lambda = RealMatrix::Identity(2, 2);
  lambda(0, 0) = 2.0;
  try {
    PropagatorReal(lambda, RealVector::Zero(2), 1.0);
    FAIL() << "expected SymplecticDriftExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSymplecticDriftExceeded);
  }
  // A looser tolerance accepts nearly symplectic input.
  RealMatrix near = RealMatrix::Identity(2, 2);
  near(0, 0) = 1.0 + 1e-7;
  EXPECT_NO_THROW(PropagatorReal(near, RealVector::Zero(2), 1.0, 1e-6));
  EXPECT_THROW(PropagatorReal(near, RealVector::Zero(2), 1.0), Error);
}

TEST(Propagator, RandomSymplecticMatricesPass) {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 4; ++n) {
    const RealMatrix s = oracle::random_symplectic(rng, n);
    EXPECT_LT(symplectic_defect(s), 1e-11);
    EXPECT_NO_THROW(PropagatorReal(s, RealVector::Zero(2 * n), 0.0, 1e-11));
  }
}

TEST(Propagator, DefaultSteps) {
  const QuadraticHamiltonian h = QuadraticHamiltonian::constant(2.0 * harmonic_b(1));
  EXPECT_EQ(default_steps(h, 1.0), 400);
  EXPECT_GE(default_steps(h, 0.0), 1);
}
