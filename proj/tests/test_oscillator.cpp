#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "phasespace/oscillator.hpp"

using namespace phasespace;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kInvalidArgument;
}

FrequencyProfile mathieu() { return FrequencyProfile::cosine_modulated(1.0, 0.5, 2.0); }

EpsPair pair_at(const FrequencyProfile& profile, double t) {
  return solve_epsilon(profile, t, default_epsilon_steps(profile, t)).back();
}

// ∫ conj(f) g dx by trapezoid on [-l, l].
Complex overlap(const std::function<Complex(double)>& f, const std::function<Complex(double)>& g, double l = 14.0) {
  return oracle::trapezoid_complex([&](double x) { return std::conj(f(x)) * g(x); }, -l, l, 8000);
}

}  // namespace

TEST(Epsilon, ClosedForms) {
  struct Case {
    FrequencyProfile profile;
    std::function<Complex(double)> eps;
    std::function<Complex(double)> eps_dot;
  };
  const Case cases[] = {
      {FrequencyProfile::constant(1.0), [](double t) { return std::exp(kI * t); },
       [](double t) { return kI * std::exp(kI * t); }},
      {FrequencyProfile::free_particle(), [](double t) { return 1.0 + kI * t; }, [](double) { return kI; }},
      {FrequencyProfile::repulsive(), [](double t) { return std::cosh(t) + kI * std::sinh(t); },
       [](double t) { return std::sinh(t) + kI * std::cosh(t); }},
  };
  for (const Case& c : cases) {
    const EpsilonTrajectory tr = solve_epsilon(c.profile, 5.0, 500);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const EpsPair e = tr.at(k);
      EXPECT_LT(std::abs(e.eps - c.eps(e.t)), 1e-12 * std::max(1.0, std::abs(c.eps(e.t))));
      EXPECT_LT(std::abs(e.eps_dot - c.eps_dot(e.t)), 1e-12 * std::max(1.0, std::abs(c.eps_dot(e.t))));
    }
    EXPECT_LT(tr.max_wronskian_drift(), 1e-9);
  }
}

TEST(Epsilon, RungeKuttaReproducesHarmonic) {
  // Same ω² = 1 through the integrator: zero-depth modulation and a single
  // piecewise segment.
  for (const FrequencyProfile& p :
       {FrequencyProfile::cosine_modulated(1.0, 0.0, 3.0), FrequencyProfile::piecewise({{10.0, 1.0}}, false)}) {
    ASSERT_FALSE(p.has_closed_form());
    const EpsilonTrajectory tr = solve_epsilon(p, 5.0, default_epsilon_steps(p, 5.0));
    for (std::size_t k = 0; k < tr.size(); k += 97) {
      EXPECT_LT(std::abs(tr.at(k).eps - std::exp(kI * tr.at(k).t)), 1e-8);
    }
    EXPECT_LT(tr.max_wronskian_drift(), 1e-9);
  }
}

TEST(Epsilon, PhaseIsContinuous) {
  // For ω² = 1, arg ε = t without wrapping.
  const EpsilonTrajectory tr = solve_epsilon(FrequencyProfile::constant(1.0), 20.0, 4000);
  EXPECT_NEAR(tr.back().phase, 20.0, 1e-9);
  const EpsilonTrajectory rk = solve_epsilon(mathieu(), 20.0, default_epsilon_steps(mathieu(), 20.0));
  for (std::size_t k = 1; k < rk.size(); ++k) ASSERT_GT(rk.phase()[k], rk.phase()[k - 1]);
}

TEST(Epsilon, Errors) {
  EXPECT_EQ(code_of([] { solve_epsilon(FrequencyProfile::constant(1.0), 5.0, 3); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { solve_epsilon(FrequencyProfile::constant(1.0), -1.0, 100); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { FrequencyProfile::piecewise({}, false); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { FrequencyProfile::piecewise({{-1.0, 1.0}}, false); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { EpsilonTrajectory({0.0}, {Complex(2.0)}, {kI}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { EpsilonTrajectory({0.0, 1.0}, {Complex(1.0), Complex(1.0)}, {kI, Complex(0.0, 3.0)}); }),
            ErrorCode::kWronskianDrift);
}

TEST(Profile, Evaluation) {
  const FrequencyProfile pw = FrequencyProfile::piecewise({{1.0, 1.0}, {0.5, 4.0}}, true);
  EXPECT_EQ(pw.omega_sq(0.2), 1.0);
  EXPECT_EQ(pw.omega_sq(1.2), 4.0);
  EXPECT_EQ(pw.omega_sq(1.7), 1.0);
  EXPECT_TRUE(pw.is_periodic_with(1.5));
  EXPECT_FALSE(pw.is_periodic_with(1.0));
  EXPECT_EQ(pw.max_abs_omega_sq(), 4.0);
  const FrequencyProfile hold = FrequencyProfile::piecewise({{1.0, 1.0}, {0.5, 4.0}}, false);
  EXPECT_EQ(hold.omega_sq(10.0), 4.0);
  EXPECT_NEAR(mathieu().omega_sq(kPi / 2.0), 0.5, 1e-15);
  EXPECT_TRUE(mathieu().is_periodic_with(kPi));
  EXPECT_FALSE(mathieu().is_periodic_with(1.0));
  EXPECT_TRUE(FrequencyProfile::constant(1.0).is_periodic_with(0.37));
  EXPECT_TRUE(FrequencyProfile::constant(1.0).normalized_start());
  EXPECT_FALSE(FrequencyProfile::free_particle().normalized_start());
}

TEST(Variances, SchroedingerBoundIsSaturated) {
  for (const FrequencyProfile& p : {FrequencyProfile::constant(1.0), FrequencyProfile::free_particle(),
                                    FrequencyProfile::repulsive(), mathieu()}) {
    const EpsilonTrajectory tr = solve_epsilon(p, 5.0, default_epsilon_steps(p, 5.0));
    for (std::size_t k = 0; k < tr.size(); k += 13) {
      const Variances v = variances(tr.at(k).eps, tr.at(k).eps_dot);
      const double scale = std::max(1.0, v.sigma_x * v.sigma_p);
      EXPECT_NEAR(v.sigma_x * v.sigma_p - v.sigma_xp * v.sigma_xp, 0.25, 1e-10 * scale);
    }
  }
  // Free particle at t = 2: σ_x = (1 + t²)/2, σ_xp = t/2.
  const Variances v = variances(Complex(1.0, 2.0), kI);
  EXPECT_DOUBLE_EQ(v.sigma_x, 2.5);
  EXPECT_DOUBLE_EQ(v.sigma_p, 0.5);
  EXPECT_DOUBLE_EQ(v.sigma_xp, 1.0);
  EXPECT_FALSE(v.squeezed_x);
}

TEST(Variances, MatchWavefunctionMoments) {
  const EpsPair e = pair_at(mathieu(), 2.3);
  const Complex alpha(0.4, -0.3);
  auto psi = [&](double x) { return coherent_wavefunction(e, alpha, x); };
  const double mean_x = overlap(psi, [&](double x) { return x * psi(x); }).real();
  const double x2 = overlap(psi, [&](double x) { return x * x * psi(x); }).real();
  EXPECT_NEAR(mean_x, std::sqrt(2.0) * (alpha * std::conj(e.eps)).real(), 1e-9);
  EXPECT_NEAR(x2 - mean_x * mean_x, variances(e.eps, e.eps_dot).sigma_x, 1e-9);
}

TEST(Wavefunction, GroundStateAtZero) {
  const EpsPair e = EpsPair::initial();
  for (int n = 0; n <= 8; ++n) {
    for (double x : {-2.0, 0.0, 0.7, 3.0}) {
      const Complex v = number_wavefunction(e, n, x);
      EXPECT_NEAR(v.real(), oracle::fock_wavefunction(n, x), 1e-13);
      EXPECT_NEAR(v.imag(), 0.0, 1e-15);
    }
  }
}

TEST(Wavefunction, NumberStatesOrthonormal) {
  const EpsPair e = pair_at(mathieu(), 3.1);
  for (int m = 0; m <= 5; ++m) {
    for (int n = 0; n <= 5; ++n) {
      const Complex o = overlap([&](double x) { return number_wavefunction(e, m, x); },
                                [&](double x) { return number_wavefunction(e, n, x); }, 20.0);
      EXPECT_LT(std::abs(o - (m == n ? 1.0 : 0.0)), 1e-9) << m << n;
    }
  }
}

TEST(Wavefunction, CoherentNormalizedAndExpansion) {
  // |α⟩ = e^{-|α|²/2} Σ αⁿ/√n! |n⟩ at any time.
  const EpsPair e = pair_at(FrequencyProfile::repulsive(), 0.8);
  const Complex alpha(0.6, 0.5);
  auto psi = [&](double x) { return coherent_wavefunction(e, alpha, x); };
  EXPECT_NEAR(overlap(psi, psi).real(), 1.0, 1e-10);
  for (int n = 0; n <= 6; ++n) {
    const Complex c = overlap([&](double x) { return number_wavefunction(e, n, x); }, psi);
    const Complex want = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(oracle::factorial(n));
    EXPECT_LT(std::abs(c - want), 1e-9) << n;
  }
}

TEST(Wavefunction, SolvesSchroedingerEquation) {
  // iψ_t = -½ψ'' + ½ω²(t)x²ψ, with ψ_t from neighbouring trajectory samples
  // and ψ'' from a three-point stencil.
  const FrequencyProfile p = mathieu();
  const int steps = 40000;
  const EpsilonTrajectory tr = solve_epsilon(p, 4.0, steps);
  const double dt = 4.0 / steps;
  const Complex alpha(0.7, 0.2);
  for (std::size_t k : {5000u, 23456u, 39000u}) {
    const EpsPair prev = tr.at(k - 1), cur = tr.at(k), next = tr.at(k + 1);
    for (double x : {-1.5, 0.1, 0.9, 2.0}) {
      for (int n : {-1, 0, 3}) {
        auto f = [&](const EpsPair& e, double y) {
          return n < 0 ? coherent_wavefunction(e, alpha, y) : number_wavefunction(e, n, y);
        };
        const double h = 1e-3;
        const Complex psi = f(cur, x);
        const Complex psi_t = (f(next, x) - f(prev, x)) / (2.0 * dt);
        const Complex psi_xx = (f(cur, x + h) - 2.0 * psi + f(cur, x - h)) / (h * h);
        const Complex residual = kI * psi_t - (-0.5 * psi_xx + 0.5 * p.omega_sq(cur.t) * x * x * psi);
        EXPECT_LT(std::abs(residual), 1e-5) << "x=" << x << " n=" << n;
      }
    }
  }
}

TEST(Invariant, LadderAction) {
  const EpsPair e = pair_at(mathieu(), 1.9);
  SpatialGrid grid{-12.0, 12.0, 4001};
  const Complex alpha(0.5, -0.4);
  const std::vector<Complex> coh = sample([&](double x) { return coherent_wavefunction(e, alpha, x); }, grid);
  std::vector<Complex> target(coh.size());
  for (std::size_t i = 0; i < coh.size(); ++i) target[i] = alpha * coh[i];
  EXPECT_LT(relative_residual(apply_invariant(e, coh, grid), target, grid), 1e-6);

  for (int m = 1; m <= 4; ++m) {
    const std::vector<Complex> psi = sample([&](double x) { return number_wavefunction(e, m, x); }, grid);
    const std::vector<Complex> lower = sample([&](double x) { return number_wavefunction(e, m - 1, x); }, grid);
    const std::vector<Complex> upper = sample([&](double x) { return number_wavefunction(e, m + 1, x); }, grid);
    std::vector<Complex> want_lower(lower.size()), want_upper(upper.size());
    for (std::size_t i = 0; i < lower.size(); ++i) {
      want_lower[i] = std::sqrt(double(m)) * lower[i];
      want_upper[i] = std::sqrt(m + 1.0) * upper[i];
    }
    EXPECT_LT(relative_residual(apply_invariant(e, psi, grid), want_lower, grid), 1e-6);
    EXPECT_LT(relative_residual(apply_invariant_adjoint(e, psi, grid), want_upper, grid), 1e-6);
  }
}

TEST(Wavefunction, Errors) {
  EXPECT_EQ(code_of([] { number_wavefunction(EpsPair::initial(), 61, 0.0); }), ErrorCode::kIndexOutOfRange);
  EpsPair zero;
  zero.eps = 0.0;
  EXPECT_EQ(code_of([&] { coherent_wavefunction(zero, 1.0, 0.0); }), ErrorCode::kBranchTrackingLost);
}

TEST(Quasienergy, HarmonicOscillator) {
  const Quasienergy q = quasienergy(FrequencyProfile::constant(1.0), 2.0 * kPi);
  EXPECT_TRUE(q.stable);
  EXPECT_NEAR(q.kappa, 1.0, 1e-9);
  // Reduced zone has width 2π/T = 1, so κ = 1 folds onto 0.
  EXPECT_NEAR(q.kappa_reduced, 0.0, 1e-6);
  EXPECT_NEAR(q.trace, 2.0, 1e-9);
}

TEST(Quasienergy, ConstantFrequencyOffZone) {
  // ω = 0.6, T = 2π: κ = 0.6, reduced θ/T = arccos(cos 1.2π)/2π = 0.4.
  const Quasienergy q = quasienergy(FrequencyProfile::constant(0.36), 2.0 * kPi);
  EXPECT_NEAR(q.kappa, 0.6, 1e-9);
  EXPECT_NEAR(q.kappa_reduced, 0.4, 1e-9);
  EXPECT_NEAR(std::abs(q.multipliers[0]), 1.0, 1e-9);
}

TEST(Quasienergy, MathieuStability) {
  // Principal parametric resonance at modulation frequency 2ω is unstable.
  const Quasienergy resonant = quasienergy(FrequencyProfile::cosine_modulated(1.0, 0.2, 2.0), kPi);
  EXPECT_FALSE(resonant.stable);
  EXPECT_TRUE(std::isnan(resonant.kappa));
  EXPECT_GT(std::abs(resonant.trace), 2.0);
  EXPECT_NEAR(std::abs(resonant.multipliers[0] * resonant.multipliers[1]), 1.0, 1e-9);

  const Quasienergy off = quasienergy(FrequencyProfile::cosine_modulated(1.0, 0.2, 0.7), 2.0 * kPi / 0.7);
  EXPECT_TRUE(off.stable);
  EXPECT_LE(std::abs(off.trace), 2.0);
  // Weak modulation barely shifts the phase rate from ω = 1.
  EXPECT_NEAR(off.kappa, 1.0, 0.05);
  const double zone = 0.7;
  const double folded = std::fmod(off.kappa, zone);
  EXPECT_NEAR(std::min(folded, zone - folded), off.kappa_reduced, 1e-6);
}

TEST(Quasienergy, NotPeriodic) {
  EXPECT_EQ(code_of([] { quasienergy(mathieu(), 1.0); }), ErrorCode::kNotPeriodic);
}
