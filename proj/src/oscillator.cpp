#include "phasespace/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

namespace phasespace {

namespace {

constexpr double kPeriodTolerance = 1e-9;
constexpr double kBranchFloor = 1e-12;
constexpr int kMaxFockIndex = 60;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, std::string(what) + " must be finite");
}

bool near_positive_integer(double ratio) {
  const double k = std::round(ratio);
  return k >= 1.0 && std::abs(ratio - k) <= kPeriodTolerance * std::max(1.0, k);
}

// Continuous arg of a curve whose phase never decreases (Im(ε*ε̇) > 0).
// Each increment is the principal value shifted by the multiple of 2π that
// lands closest to the trapezoid estimate ∫ Im(ε*ε̇)/|ε|² dt.
std::vector<double> unwrap_monotone(const std::vector<double>& times, const std::vector<Complex>& f,
                                    const std::vector<Complex>& f_dot) {
  std::vector<double> phase(f.size(), 0.0);
  if (f.empty()) return phase;
  phase[0] = std::arg(f[0]);
  auto rate = [&](std::size_t k) { return std::imag(std::conj(f[k]) * f_dot[k]) / std::norm(f[k]); };
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double principal = std::arg(f[k] / f[k - 1]);
    const double estimate = 0.5 * (times[k] - times[k - 1]) * (rate(k - 1) + rate(k));
    const double turns = std::round((estimate - principal) / kTwoPi);
    phase[k] = phase[k - 1] + principal + kTwoPi * turns;
  }
  return phase;
}

std::pair<Complex, Complex> closed_form(double omega_sq, double t) {
  if (omega_sq > 0.0) {
    const double w = std::sqrt(omega_sq);
    return {Complex(std::cos(w * t), std::sin(w * t) / w), Complex(-w * std::sin(w * t), std::cos(w * t))};
  }
  if (omega_sq < 0.0) {
    const double k = std::sqrt(-omega_sq);
    return {Complex(std::cosh(k * t), std::sinh(k * t) / k), Complex(k * std::sinh(k * t), std::cosh(k * t))};
  }
  return {Complex(1.0, t), Complex(0.0, 1.0)};
}

// exp of a complex exponent with the real part guarded against overflow to
// inf when the modulus is already negligible.
Complex safe_exp(Complex z) {
  if (z.real() < -745.0) return Complex(0.0);
  return std::exp(z);
}

Complex ground_exponent(const EpsPair& pair, double x) {
  return kI * pair.eps_dot * x * x / (2.0 * pair.eps);
}

void check_branch(const EpsPair& pair) {
  if (!(std::abs(pair.eps) >= kBranchFloor)) {
    fail(ErrorCode::kBranchTrackingLost, "epsilon is too close to zero to follow the square-root branch");
  }
}

// π^{-1/4} ε^{-1/2} with the branch fixed by the tracked phase.
Complex ground_prefactor(const EpsPair& pair) {
  return std::pow(std::numbers::pi, -0.25) / std::sqrt(std::abs(pair.eps)) * std::polar(1.0, -0.5 * pair.phase);
}

}  // namespace

FrequencyProfile::FrequencyProfile(Kind kind, double base, double depth, double frequency)
    : kind_(kind), base_(base), depth_(depth), frequency_(frequency) {}

FrequencyProfile FrequencyProfile::constant(double omega_sq) {
  check_finite(omega_sq, "omega_sq");
  return FrequencyProfile(Kind::kConstant, omega_sq, 0.0, 0.0);
}

FrequencyProfile FrequencyProfile::free_particle() { return FrequencyProfile(Kind::kFree, 0.0, 0.0, 0.0); }

FrequencyProfile FrequencyProfile::repulsive() { return FrequencyProfile(Kind::kRepulsive, -1.0, 0.0, 0.0); }

FrequencyProfile FrequencyProfile::cosine_modulated(double omega0_sq, double depth, double frequency) {
  check_finite(omega0_sq, "omega0_sq");
  check_finite(depth, "depth");
  check_finite(frequency, "frequency");
  return FrequencyProfile(Kind::kCosineModulated, omega0_sq, depth, frequency);
}

FrequencyProfile FrequencyProfile::piecewise(std::vector<Segment> segments, bool periodic) {
  if (segments.empty()) fail(ErrorCode::kInvalidArgument, "piecewise profile needs at least one segment");
  FrequencyProfile p(Kind::kPiecewiseConstant, 0.0, 0.0, 0.0);
  for (const Segment& s : segments) {
    check_finite(s.omega_sq, "segment omega_sq");
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      fail(ErrorCode::kInvalidArgument, "segment durations must be positive");
    }
    p.cycle_ += s.duration;
  }
  p.segments_ = std::move(segments);
  p.periodic_ = periodic;
  return p;
}

double FrequencyProfile::omega_sq(double t) const {
  switch (kind_) {
    case Kind::kConstant:
    case Kind::kFree:
    case Kind::kRepulsive:
      return base_;
    case Kind::kCosineModulated:
      return base_ + depth_ * std::cos(frequency_ * t);
    case Kind::kPiecewiseConstant: {
      double local = t;
      if (periodic_) local = t - cycle_ * std::floor(t / cycle_);
      for (const Segment& s : segments_) {
        if (local < s.duration) return s.omega_sq;
        local -= s.duration;
      }
      return segments_.back().omega_sq;
    }
  }
  return base_;
}

double FrequencyProfile::max_abs_omega_sq() const {
  switch (kind_) {
    case Kind::kCosineModulated:
      return std::abs(base_) + std::abs(depth_);
    case Kind::kPiecewiseConstant: {
      double m = 0.0;
      for (const Segment& s : segments_) m = std::max(m, std::abs(s.omega_sq));
      return m;
    }
    default:
      return std::abs(base_);
  }
}

bool FrequencyProfile::has_closed_form() const {
  return kind_ == Kind::kConstant || kind_ == Kind::kFree || kind_ == Kind::kRepulsive;
}

bool FrequencyProfile::is_periodic_with(double period) const {
  if (!(period > 0.0) || !std::isfinite(period)) return false;
  switch (kind_) {
    case Kind::kCosineModulated:
      if (depth_ == 0.0 || frequency_ == 0.0) return true;
      return near_positive_integer(period * std::abs(frequency_) / kTwoPi);
    case Kind::kPiecewiseConstant:
      return periodic_ && near_positive_integer(period / cycle_);
    default:
      return true;
  }
}

EpsilonTrajectory::EpsilonTrajectory(std::vector<double> times, std::vector<Complex> eps,
                                     std::vector<Complex> eps_dot)
    : times_(std::move(times)), eps_(std::move(eps)), eps_dot_(std::move(eps_dot)) {
  if (times_.empty() || eps_.size() != times_.size() || eps_dot_.size() != times_.size()) {
    fail(ErrorCode::kDimensionMismatch, "trajectory samples have inconsistent lengths");
  }
  if (times_[0] != 0.0 || eps_[0] != Complex(1.0, 0.0) || eps_dot_[0] != Complex(0.0, 1.0)) {
    fail(ErrorCode::kInvalidArgument, "trajectory must start at t = 0 with eps = 1, eps_dot = i");
  }
  const double drift = max_wronskian_drift();
  if (!(drift <= kWronskianTolerance)) {
    fail(ErrorCode::kWronskianDrift, "Wronskian drifted by " + std::to_string(drift));
  }
  phase_ = unwrap_monotone(times_, eps_, eps_dot_);
}

double EpsilonTrajectory::max_wronskian_drift() const {
  double drift = 0.0;
  for (std::size_t k = 0; k < eps_.size(); ++k) {
    const Complex w = eps_[k] * std::conj(eps_dot_[k]) - std::conj(eps_[k]) * eps_dot_[k];
    drift = std::max(drift, std::abs(w + 2.0 * kI));
  }
  return drift;
}

int min_epsilon_steps(const FrequencyProfile& profile, double t_final) {
  const double scale = std::max(1.0, std::sqrt(profile.max_abs_omega_sq()));
  return std::max(1, static_cast<int>(std::ceil(10.0 * t_final * scale)));
}

int default_epsilon_steps(const FrequencyProfile& profile, double t_final) {
  const double scale = std::max(1.0, std::sqrt(profile.max_abs_omega_sq()));
  const double steps = std::ceil(2000.0 * t_final * scale);
  return std::max(min_epsilon_steps(profile, t_final), static_cast<int>(std::min(steps, 1e9)));
}

EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, double t_final, int n_steps) {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    fail(ErrorCode::kInvalidArgument, "t_final must be positive and finite");
  }
  if (n_steps < min_epsilon_steps(profile, t_final)) {
    fail(ErrorCode::kInvalidArgument,
         "n_steps must be at least " + std::to_string(min_epsilon_steps(profile, t_final)));
  }
  std::vector<double> times(n_steps + 1);
  std::vector<Complex> eps(n_steps + 1);
  std::vector<Complex> eps_dot(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) times[k] = t_final * k / n_steps;
  eps[0] = 1.0;
  eps_dot[0] = kI;

  if (profile.has_closed_form()) {
    const double w2 = profile.omega_sq(0.0);
    for (int k = 1; k <= n_steps; ++k) std::tie(eps[k], eps_dot[k]) = closed_form(w2, times[k]);
  } else {
    const double h = t_final / n_steps;
    Complex x = eps[0];
    Complex v = eps_dot[0];
    for (int k = 0; k < n_steps; ++k) {
      const double t = times[k];
      const double w0 = profile.omega_sq(t);
      const double w1 = profile.omega_sq(t + 0.5 * h);
      const double w2 = profile.omega_sq(t + h);
      const Complex k1x = v;
      const Complex k1v = -w0 * x;
      const Complex k2x = v + 0.5 * h * k1v;
      const Complex k2v = -w1 * (x + 0.5 * h * k1x);
      const Complex k3x = v + 0.5 * h * k2v;
      const Complex k3v = -w1 * (x + 0.5 * h * k2x);
      const Complex k4x = v + h * k3v;
      const Complex k4v = -w2 * (x + h * k3x);
      x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      eps[k + 1] = x;
      eps_dot[k + 1] = v;
    }
  }
  return EpsilonTrajectory(std::move(times), std::move(eps), std::move(eps_dot));
}

Variances variances(Complex eps, Complex eps_dot) {
  Variances v;
  v.sigma_x = 0.5 * std::norm(eps);
  v.sigma_p = 0.5 * std::norm(eps_dot);
  v.sigma_xp = 0.5 * std::real(eps_dot * std::conj(eps));
  v.r = v.sigma_xp / std::sqrt(v.sigma_x * v.sigma_p);
  v.squeezed_x = v.sigma_x < 0.5;
  v.squeezed_p = v.sigma_p < 0.5;
  return v;
}

Complex coherent_wavefunction(const EpsPair& pair, Complex alpha, double x) {
  check_branch(pair);
  const Complex exponent = ground_exponent(pair, x) - 0.5 * std::norm(alpha) -
                           alpha * alpha * std::conj(pair.eps) / (2.0 * pair.eps) +
                           std::sqrt(2.0) * alpha * x / pair.eps;
  return ground_prefactor(pair) * safe_exp(exponent);
}

Complex number_wavefunction(const EpsPair& pair, int m, double x) {
  if (m < 0 || m > kMaxFockIndex) {
    fail(ErrorCode::kIndexOutOfRange, "number state index must lie in [0, " + std::to_string(kMaxFockIndex) + "]");
  }
  check_branch(pair);
  // Hermite functions H_m(s)/√(2^m m!) by their normalized recurrence.
  const double s = x / std::abs(pair.eps);
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < m; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * s * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  // (ε*/ε)^{m/2} = e^{-imφ} is branch-free for integer m.
  return ground_prefactor(pair) * safe_exp(ground_exponent(pair, x)) * std::polar(cur, -m * pair.phase);
}

Quasienergy quasienergy(const FrequencyProfile& profile, double period, int n_steps) {
  if (!profile.is_periodic_with(period)) {
    fail(ErrorCode::kNotPeriodic, "profile is not periodic with period " + std::to_string(period));
  }
  if (n_steps <= 0) n_steps = default_epsilon_steps(profile, period);
  const EpsilonTrajectory traj = solve_epsilon(profile, period, n_steps);
  const EpsPair end = traj.back();

  Quasienergy out;
  // Columns are the real solutions x1 = Re ε (x1(0) = 1, ẋ1(0) = 0) and
  // x2 = Im ε (x2(0) = 0, ẋ2(0) = 1).
  const double a = end.eps.real(), b = end.eps.imag();
  const double c = end.eps_dot.real(), d = end.eps_dot.imag();
  out.monodromy = {a, b, c, d};
  out.trace = a + d;
  const double det = a * d - b * c;
  const Complex disc = std::sqrt(Complex(out.trace * out.trace - 4.0 * det));
  out.multipliers = {0.5 * (out.trace + disc), 0.5 * (out.trace - disc)};
  out.stable = std::abs(out.trace) <= 2.0;
  if (!out.stable) {
    out.kappa = out.kappa_reduced = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double theta = std::acos(std::clamp(0.5 * out.trace, -1.0, 1.0));
  out.kappa_reduced = theta / period;
  const Complex lambda = std::polar(1.0, theta);
  out.multipliers = {lambda, std::conj(lambda)};

  // Floquet solution f = v0·x1 + v1·x2 with f(T) = λ f(0), taken with the
  // same rotation sense as ε; its accumulated phase over one period is κT.
  const double sign = out.trace >= 0.0 ? 1.0 : -1.0;
  const double off_identity = std::max({std::abs(a - sign), std::abs(d - sign), std::abs(b), std::abs(c)});
  std::vector<Complex> f;
  std::vector<Complex> f_dot;
  if (off_identity < 1e-8) {
    // Monodromy ≈ ±I: every solution is Floquet, ε included.
    f = traj.eps();
    f_dot = traj.eps_dot();
  } else {
    Complex v0(b), v1 = lambda - a;
    if (std::abs(v0) + std::abs(v1) < 1e-12) {
      v0 = lambda - d;
      v1 = c;
    }
    const std::vector<Complex>& e = traj.eps();
    const std::vector<Complex>& ed = traj.eps_dot();
    f.resize(e.size());
    f_dot.resize(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
      f[k] = v0 * e[k].real() + v1 * e[k].imag();
      f_dot[k] = v0 * ed[k].real() + v1 * ed[k].imag();
    }
    const double sense = std::imag(std::conj(f[0]) * f_dot[0]);
    if (std::abs(sense) < 1e-12 * std::norm(f[0])) {
      // Parabolic boundary: the Floquet solution is real. Pick the branch of
      // ±θ/T + 2πk/T closest to the mean phase rate of ε.
      const double rate = traj.phase().back() / period;
      const double zone = kTwoPi / period;
      double best = out.kappa_reduced;
      for (double base : {out.kappa_reduced, -out.kappa_reduced}) {
        const double candidate = base + zone * std::round((rate - base) / zone);
        if (std::abs(candidate - rate) < std::abs(best - rate)) best = candidate;
      }
      out.kappa = best;
      return out;
    }
    if (sense < 0.0) {
      for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = std::conj(f[k]);
        f_dot[k] = std::conj(f_dot[k]);
      }
    }
  }
  const std::vector<double> phase = unwrap_monotone(traj.times(), f, f_dot);
  out.kappa = (phase.back() - phase.front()) / period;
  return out;
}

SpatialGrid wavefunction_grid(const EpsPair& pair, Complex alpha) {
  const double half = 8.0 * std::max(1.0, std::abs(pair.eps)) * std::max(1.0, std::abs(alpha));
  return {-half, half, 2048};
}

std::vector<Complex> sample(const std::function<Complex(double)>& psi, const SpatialGrid& grid) {
  std::vector<Complex> out(grid.points);
  for (int i = 0; i < grid.points; ++i) out[i] = psi(grid.x(i));
  return out;
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b, const SpatialGrid& grid) {
  if (a.size() != b.size() || a.size() != static_cast<std::size_t>(grid.points)) {
    fail(ErrorCode::kDimensionMismatch, "samples do not match the grid");
  }
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
    sum += w * std::conj(a[i]) * b[i];
  }
  return sum * grid.step();
}

double norm_squared(std::span<const Complex> psi, const SpatialGrid& grid) {
  return inner_product(psi, psi, grid).real();
}

std::vector<Complex> derivative(std::span<const Complex> psi, const SpatialGrid& grid) {
  const int n = static_cast<int>(psi.size());
  if (n != grid.points || n < 5) fail(ErrorCode::kGridTooCoarse, "derivative needs at least 5 grid points");
  const double h = grid.step();
  std::vector<Complex> d(n);
  for (int i = 2; i < n - 2; ++i) {
    d[i] = (psi[i - 2] - 8.0 * psi[i - 1] + 8.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h);
  }
  d[1] = (psi[2] - psi[0]) / (2.0 * h);
  d[n - 2] = (psi[n - 1] - psi[n - 3]) / (2.0 * h);
  d[0] = (psi[1] - psi[0]) / h;
  d[n - 1] = (psi[n - 1] - psi[n - 2]) / h;
  return d;
}

std::vector<Complex> apply_invariant(const EpsPair& pair, std::span<const Complex> psi, const SpatialGrid& grid) {
  // (i/√2)(ε(-i d/dx) - ε̇x)ψ = (εψ' - iε̇xψ)/√2
  const std::vector<Complex> d = derivative(psi, grid);
  std::vector<Complex> out(psi.size());
  for (int i = 0; i < grid.points; ++i) {
    out[i] = (pair.eps * d[i] - kI * pair.eps_dot * grid.x(i) * psi[i]) / std::sqrt(2.0);
  }
  return out;
}

std::vector<Complex> apply_invariant_adjoint(const EpsPair& pair, std::span<const Complex> psi,
                                             const SpatialGrid& grid) {
  // (-i/√2)(ε*(-i d/dx) - ε̇*x)ψ = (-ε*ψ' + iε̇*xψ)/√2
  const std::vector<Complex> d = derivative(psi, grid);
  std::vector<Complex> out(psi.size());
  for (int i = 0; i < grid.points; ++i) {
    out[i] = (-std::conj(pair.eps) * d[i] + kI * std::conj(pair.eps_dot) * grid.x(i) * psi[i]) / std::sqrt(2.0);
  }
  return out;
}

double relative_residual(std::span<const Complex> a, std::span<const Complex> b, const SpatialGrid& grid) {
  if (a.size() != b.size()) fail(ErrorCode::kDimensionMismatch, "residual operands differ in length");
  std::vector<Complex> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return std::sqrt(norm_squared(diff, grid) / norm_squared(b, grid));
}

}  // namespace phasespace
