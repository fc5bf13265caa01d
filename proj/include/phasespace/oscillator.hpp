#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "phasespace/linalg.hpp"

namespace phasespace {

inline constexpr double kWronskianTolerance = 1e-9;

/// Squared frequency ω²(t) of H = p²/2 + ω²(t)x²/2 (ħ = m = 1).
class FrequencyProfile {
 public:
  enum class Kind { kConstant, kFree, kRepulsive, kCosineModulated, kPiecewiseConstant };

  struct Segment {
    double duration = 0.0;
    double omega_sq = 0.0;
  };

  static FrequencyProfile constant(double omega_sq);
  static FrequencyProfile free_particle();
  static FrequencyProfile repulsive();
  // ω²(t) = ω0² + depth·cos(frequency·t).
  static FrequencyProfile cosine_modulated(double omega0_sq, double depth, double frequency);
  // Segments are applied in order; past the end the last value holds, or the
  // whole sequence repeats when `periodic` is set.
  static FrequencyProfile piecewise(std::vector<Segment> segments, bool periodic);

  Kind kind() const { return kind_; }
  double omega_sq(double t) const;
  double max_abs_omega_sq() const;
  // ω²(0) = 1, the usual normalization of the stationary oscillator at t = 0.
  bool normalized_start() const { return omega_sq(0.0) == 1.0; }
  // True for the kinds solved in closed form (constant, free, repulsive).
  bool has_closed_form() const;
  // Whether ω²(t + period) = ω²(t) for all t.
  bool is_periodic_with(double period) const;

  // Raw parameters, for serialization.
  double base() const { return base_; }
  double depth() const { return depth_; }
  double frequency() const { return frequency_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool periodic() const { return periodic_; }

 private:
  FrequencyProfile(Kind kind, double base, double depth, double frequency);

  Kind kind_;
  double base_ = 0.0;
  double depth_ = 0.0;
  double frequency_ = 0.0;
  std::vector<Segment> segments_;
  bool periodic_ = false;
  double cycle_ = 0.0;
};

// ε and ε̇ at one time, with arg ε tracked continuously from arg ε(0) = 0.
struct EpsPair {
  double t = 0.0;
  Complex eps{1.0, 0.0};
  Complex eps_dot{0.0, 1.0};
  double phase = 0.0;

  static EpsPair initial() { return {}; }
};

/// Samples of ε̈ + ω²(t)ε = 0 with ε(0) = 1, ε̇(0) = i on a uniform grid.
class EpsilonTrajectory {
 public:
  EpsilonTrajectory(std::vector<double> times, std::vector<Complex> eps, std::vector<Complex> eps_dot);

  std::size_t size() const { return times_.size(); }
  EpsPair at(std::size_t i) const { return {times_[i], eps_[i], eps_dot_[i], phase_[i]}; }
  EpsPair back() const { return at(size() - 1); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Complex>& eps() const { return eps_; }
  const std::vector<Complex>& eps_dot() const { return eps_dot_; }
  const std::vector<double>& phase() const { return phase_; }

  // max_k |ε ε̇* - ε* ε̇ + 2i|.
  double max_wronskian_drift() const;

 private:
  std::vector<double> times_;
  std::vector<Complex> eps_;
  std::vector<Complex> eps_dot_;
  std::vector<double> phase_;
};

// Fewest steps solve_epsilon accepts: 10·t·max(1, √max|ω²|).
int min_epsilon_steps(const FrequencyProfile& profile, double t_final);
// Default used by the CLI and quasienergy: 2000 steps per unit time, scaled
// by max(1, √max|ω²|).
int default_epsilon_steps(const FrequencyProfile& profile, double t_final);

/// Closed forms for the constant kinds, fixed-step RK4 otherwise. Fails with
/// WronskianDrift when the Wronskian drifts by more than 1e-9.
EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, double t_final, int n_steps);

struct Variances {
  double sigma_x = 0.0;
  double sigma_p = 0.0;
  double sigma_xp = 0.0;
  double r = 0.0;
  bool squeezed_x = false;
  bool squeezed_p = false;
};

// σ_x = |ε|²/2, σ_p = |ε̇|²/2, σ_xp = Re(ε̇ε*)/2, r = σ_xp/√(σ_xσ_p).
Variances variances(Complex eps, Complex eps_dot);

/// Ψ_α(x, t) = Ψ0·exp(-|α|²/2 - α²ε*/2ε + √2αx/ε) with
/// Ψ0 = π^{-1/4} ε^{-1/2} exp(iε̇x²/2ε); the square root follows `pair.phase`.
Complex coherent_wavefunction(const EpsPair& pair, Complex alpha, double x);

/// Ψ_m(x, t) = (ε*/2ε)^{m/2} (m!)^{-1/2} Ψ0 H_m(x/|ε|), m <= 60.
Complex number_wavefunction(const EpsPair& pair, int m, double x);

struct Quasienergy {
  double kappa = 0.0;          // phase rate of the Floquet solution, unreduced
  double kappa_reduced = 0.0;  // arccos(trace/2)/T in [0, π/T]
  bool stable = false;         // |trace| <= 2
  double trace = 0.0;
  std::array<Complex, 2> multipliers{};
  std::array<double, 4> monodromy{};  // row-major [[x1, x2], [ẋ1, ẋ2]] at T
};

/// Floquet analysis over one period from the real solutions Re ε and Im ε.
/// Unstable profiles report NaN for both κ values. n_steps = 0 picks
/// default_epsilon_steps.
Quasienergy quasienergy(const FrequencyProfile& profile, double period, int n_steps = 0);

/// Uniform grid x_i = x_min + i·h on [x_min, x_max].
struct SpatialGrid {
  double x_min = -8.0;
  double x_max = 8.0;
  int points = 2048;

  double step() const { return (x_max - x_min) / (points - 1); }
  double x(int i) const { return x_min + step() * i; }
};

// ±8·max(1, |ε|)·max(1, |α|) with 2048 points.
SpatialGrid wavefunction_grid(const EpsPair& pair, Complex alpha);

std::vector<Complex> sample(const std::function<Complex(double)>& psi, const SpatialGrid& grid);
// Trapezoid rule: Σ w_i conj(a_i) b_i.
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b, const SpatialGrid& grid);
double norm_squared(std::span<const Complex> psi, const SpatialGrid& grid);

// Fourth-order central differences (lower order in the two outermost points).
std::vector<Complex> derivative(std::span<const Complex> psi, const SpatialGrid& grid);

/// A = (i/√2)(εp - ε̇x) with p = -i d/dx, applied on the grid.
std::vector<Complex> apply_invariant(const EpsPair& pair, std::span<const Complex> psi, const SpatialGrid& grid);
/// A† = (-i/√2)(ε*p - ε̇*x).
std::vector<Complex> apply_invariant_adjoint(const EpsPair& pair, std::span<const Complex> psi,
                                             const SpatialGrid& grid);

// ‖a - b‖/‖b‖ on the grid.
double relative_residual(std::span<const Complex> a, std::span<const Complex> b, const SpatialGrid& grid);

}  // namespace phasespace
