#pragma once

#include <optional>
#include <span>
#include <vector>

#include "phasespace/linalg.hpp"
#include "phasespace/symplectic.hpp"

namespace phasespace {

// Eigenvalues of M + (i/2)Σ may dip this far below zero.
inline constexpr double kUncertaintySlack = 1e-10;

/// Mixed N-mode Gaussian state: quadrature means ⟨Q⟩ = (⟨p⟩, ⟨q⟩) and the
/// symmetrized dispersion matrix M.
///
/// The constructor keeps only the upper triangle of the matrix it is given
/// and mirrors it, then rejects states that are not positive definite or that
/// violate the uncertainty relation M + (i/2)Σ ≥ 0 (InvalidState).
class GaussianState {
 public:
  GaussianState(RealVector mean, const RealMatrix& dispersion);

  // Upper triangle in row-major order, (0,0), (0,1), ..., (0,2N-1), (1,1), ...
  static GaussianState from_upper(int n_modes, RealVector mean, std::span<const double> upper);

  static GaussianState vacuum(int n_modes);
  // Displaced vacuum, M = I/2.
  static GaussianState coherent(RealVector mean);
  // M = (n̄ + ½)I, zero mean.
  static GaussianState thermal(int n_modes, double mean_photons);

  int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  int dim() const { return static_cast<int>(mean_.size()); }
  const RealVector& mean() const { return mean_; }
  const RealMatrix& dispersion() const { return dispersion_; }
  std::vector<double> upper_triangle() const;

  // Smallest eigenvalue of M + (i/2)Σ; zero for pure states.
  double uncertainty_margin() const;

 private:
  RealVector mean_;
  RealMatrix dispersion_;
};

/// Q-function parameters: Q(B) = P0·exp[-½B(R + σ_Nx)B + B·Ry].
///
/// `ry` is the product R·y and is what the Hermite generating function
/// needs; it stays finite for states where (I - 2M) is singular (coherent
/// states, vacuum), where `y` itself does not exist.
struct QFunctionParams {
  ComplexMatrix r;
  std::optional<ComplexVector> y;
  ComplexVector ry;
  double p0 = 1.0;

  int n_modes() const { return static_cast<int>(r.rows() / 2); }
};

/// W(Q) = det M^{-1/2} exp[-½(Q - ⟨Q⟩)M⁻¹(Q - ⟨Q⟩)], normalized under
/// ∏ dp dq / 2π. Throws SingularDispersion when M is numerically singular.
double wigner(const GaussianState& state, const RealVector& point);

// Precomputed inverse and prefactor for evaluating one state many times.
class WignerEvaluator {
 public:
  explicit WignerEvaluator(const GaussianState& state);
  double operator()(const RealVector& point) const;

 private:
  RealVector mean_;
  RealMatrix inverse_;
  double prefactor_;
};

/// State whose Wigner function is W(ΛQ + Δ): dispersion Λ⁻¹MΛ⁻ᵀ and mean
/// Λ⁻¹(⟨Q⟩ - Δ).
GaussianState evolve(const GaussianState& state, const PropagatorReal& prop);

/// Husimi function at the coherent amplitudes β_j = (q_j + ip_j)/√2,
/// normalized under ∏ d²β/π.
double q_function(const GaussianState& state, const ComplexVector& beta);
double q_function(const QFunctionParams& params, const ComplexVector& beta);

// 2N vector B = (β*, β) at which the (R, y) form is evaluated.
ComplexVector q_argument(const ComplexVector& beta);

/// R = 2U†(I + 2M)⁻¹U* - σ_Nx, y = 2Uᵀ(I - 2M)⁻¹⟨Q⟩,
/// P0 = det(M + I/2)^{-1/2} exp[-⟨Q⟩(2M + I)⁻¹⟨Q⟩].
QFunctionParams to_q_params(const GaussianState& state);

/// M = U*(R + σ_Nx)⁻¹U† - ½, ⟨Q⟩ = U*(R + σ_Nx)⁻¹·(Ry).
GaussianState from_q_params(const QFunctionParams& params);

struct MeanPhotonNumber {
  double value = 0.0;
  bool clamped = false;  // a value in [-1e-10, 0) was replaced by 0
};

// ⟨n_j⟩ = ½(σ_pp + σ_qq - 1) + ½(⟨p⟩² + ⟨q⟩²).
MeanPhotonNumber mean_photon(const GaussianState& state, int mode);

}  // namespace phasespace
