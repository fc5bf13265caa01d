#include "phasespace/cat_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace phasespace {

namespace {

constexpr double kMinOddAlpha = 1e-12;
// Past |α| = 20 the factor e^{|α|²/2} in N approaches the double range.
constexpr double kMaxAlpha = 20.0;
constexpr int kMinResidualPoints = 1024;
constexpr double kEdgeAmplitude = 1e-8;
constexpr double kOverlapAgreement = 1e-9;
constexpr double kWignerAgreement = 1e-6;

// log cosh a and log sinh a for a >= 0 without overflow.
double log_cosh(double a) { return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2; }

double log_sinh(double a) {
  if (a < 1.0) return std::log(std::sinh(a));
  return a + std::log1p(-std::exp(-2.0 * a)) - std::numbers::ln2;
}

double log_normalization(Parity parity, double a2) {
  const double log_mix = parity == Parity::kEven ? log_cosh(a2) : log_sinh(a2);
  return 0.5 * a2 - std::numbers::ln2 - 0.5 * log_mix;
}

double max_modulus(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z));
  return m;
}

void check_edges(const std::vector<Complex>& psi) {
  const double edge = std::max(std::abs(psi.front()), std::abs(psi.back()));
  if (edge > kEdgeAmplitude * max_modulus(psi)) {
    fail(ErrorCode::kGridTooCoarse, "wavefunction has not decayed at the grid edges");
  }
}

SpatialGrid odd_grid(SpatialGrid grid) {
  if (grid.points % 2 == 0) ++grid.points;
  return grid;
}

SpatialGrid every_other(const SpatialGrid& grid) { return {grid.x_min, grid.x_max, (grid.points + 1) / 2}; }

std::vector<Complex> every_other(const std::vector<Complex>& v) {
  std::vector<Complex> out;
  out.reserve(v.size() / 2 + 1);
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

// Support half-width of a cat at its ε pair.
double cat_extent(const CatState& cat) { return wavefunction_grid(cat.pair(), cat.alpha()).x_max; }

// Σ_u Re(f(u) e^{ipu}) h_u over u = k·h, |k| <= n, using f(-u) = conj f(u).
double wigner_sum(const std::vector<Complex>& f, double h, double p) {
  double sum = f[0].real();
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double w = k + 1 == f.size() ? 0.5 : 1.0;
    sum += 2.0 * w * (f[k] * std::polar(1.0, p * h * static_cast<double>(k))).real();
  }
  return sum * h;
}

// Samples f(u_k) = Ψ*(q + u_k/2) Ψ(q - u_k/2) for u_k = k·h up to where
// either factor leaves the support.
std::vector<Complex> wigner_kernel(const std::function<Complex(double)>& psi, double extent, double q, double h) {
  const double u_max = 2.0 * std::max(0.0, extent - std::abs(q));
  const auto n = static_cast<std::size_t>(std::floor(u_max / h));
  std::vector<Complex> f(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double u = h * static_cast<double>(k);
    f[k] = std::conj(psi(q + 0.5 * u)) * psi(q - 0.5 * u);
  }
  return f;
}

}  // namespace

CatState::CatState(Parity parity, Complex alpha, EpsPair pair) : parity_(parity), alpha_(alpha), pair_(pair) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    fail(ErrorCode::kInvalidArgument, "alpha must be finite");
  }
  if (parity == Parity::kOdd && std::abs(alpha) < kMinOddAlpha) {
    fail(ErrorCode::kNullState, "odd cat state vanishes for |alpha| < 1e-12");
  }
  if (std::abs(alpha) > kMaxAlpha) fail(ErrorCode::kInvalidArgument, "|alpha| must not exceed 20");
}

double CatState::normalization() const { return std::exp(log_normalization(parity_, std::norm(alpha_))); }

Complex cat_wavefunction(const CatState& cat, double x) {
  // 2N{cosh|sinh}(z) = N(e^z ± e^{-z}), so the cat is N(Ψ_α ± Ψ_-α).
  const double n = cat.normalization();
  const Complex plus = coherent_wavefunction(cat.pair(), cat.alpha(), x);
  const Complex minus = coherent_wavefunction(cat.pair(), -cat.alpha(), x);
  return cat.parity() == Parity::kEven ? n * (plus + minus) : n * (plus - minus);
}

double cat_a_squared_residual(const CatState& cat, const SpatialGrid& grid) {
  if (grid.points < kMinResidualPoints) fail(ErrorCode::kGridTooCoarse, "residual needs at least 1024 grid points");
  const std::vector<Complex> psi = sample([&](double x) { return cat_wavefunction(cat, x); }, grid);
  check_edges(psi);
  const std::vector<Complex> once = apply_invariant(cat.pair(), psi, grid);
  const std::vector<Complex> twice = apply_invariant(cat.pair(), once, grid);
  const Complex a2 = cat.alpha() * cat.alpha();
  std::vector<Complex> target(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) target[i] = a2 * psi[i];
  return relative_residual(twice, target, grid);
}

double cat_a_squared_residual(const CatState& cat) {
  return cat_a_squared_residual(cat, wavefunction_grid(cat.pair(), cat.alpha()));
}

PhotonDistribution cat_photon_distribution(const CatState& cat, int cutoff) {
  SpatialGrid grid = wavefunction_grid(cat.pair(), cat.alpha());
  grid.points = 4097;
  return cat_photon_distribution(cat, cutoff, grid);
}

PhotonDistribution cat_photon_distribution(const CatState& cat, int cutoff, const SpatialGrid& requested) {
  if (cutoff < 0 || cutoff > kMaxPhotonCutoff) {
    fail(ErrorCode::kInvalidArgument, "cutoff must lie in [0, " + std::to_string(kMaxPhotonCutoff) + "]");
  }
  const SpatialGrid grid = odd_grid(requested);
  const SpatialGrid coarse = every_other(grid);
  const std::vector<Complex> psi = sample([&](double x) { return cat_wavefunction(cat, x); }, grid);
  check_edges(psi);
  const std::vector<Complex> psi_coarse = every_other(psi);

  std::vector<double> probs(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) {
    const std::vector<Complex> fock = sample([&](double x) { return number_wavefunction(cat.pair(), n, x); }, grid);
    const double fine = std::norm(inner_product(fock, psi, grid));
    const double rough = std::norm(inner_product(every_other(fock), psi_coarse, coarse));
    if (std::abs(fine - rough) > kOverlapAgreement) {
      fail(ErrorCode::kGridTooCoarse, "photon overlaps are not converged on the spatial grid");
    }
    probs[static_cast<std::size_t>(n)] = fine;
  }
  const double p0 = probs.front();
  return PhotonDistribution(MultiIndex({cutoff}), std::move(probs), p0, 0);
}

PhaseGrid wigner_transform(const std::function<Complex(double)>& psi, double extent, const PhaseGridSpec& spec,
                           int threads) {
  spec.validate();
  if (!(extent > 0.0) || !std::isfinite(extent)) fail(ErrorCode::kInvalidArgument, "extent must be positive");
  // The u step resolves both e^{ipu} at the largest |p| and Ψ itself.
  const double p_abs = std::max(std::abs(spec.p_min), std::abs(spec.p_max));
  const double h = std::min(0.02, 0.5 / (p_abs + 1.0));

  PhaseGrid grid{spec, std::vector<double>(static_cast<std::size_t>(spec.points) * spec.points)};
  parallel_for(spec.points, threads, [&](int j) {
    const std::vector<Complex> f = wigner_kernel(psi, extent, spec.q(j), h);
    for (int i = 0; i < spec.points; ++i) {
      grid.values[static_cast<std::size_t>(i) * spec.points + j] = f.empty() ? 0.0 : wigner_sum(f, h, spec.p(i));
    }
  });

  // Convergence check on the row through q = 0 (or the closest grid q): the
  // same sum at twice the step must agree.
  int j0 = 0;
  for (int j = 1; j < spec.points; ++j) {
    if (std::abs(spec.q(j)) < std::abs(spec.q(j0))) j0 = j;
  }
  const std::vector<Complex> f2 = wigner_kernel(psi, extent, spec.q(j0), 2.0 * h);
  for (int i = 0; i < spec.points; ++i) {
    const double rough = f2.empty() ? 0.0 : wigner_sum(f2, 2.0 * h, spec.p(i));
    if (std::abs(rough - grid.value(i, j0)) > kWignerAgreement) {
      fail(ErrorCode::kGridTooCoarse, "Wigner transform is not converged in the u integral");
    }
  }
  return grid;
}

PhaseGrid cat_wigner_grid(const CatState& cat, const PhaseGridSpec& spec, int threads) {
  return wigner_transform([&](double x) { return cat_wavefunction(cat, x); }, cat_extent(cat), spec, threads);
}

}  // namespace phasespace
