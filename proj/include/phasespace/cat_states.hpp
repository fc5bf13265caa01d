#pragma once

#include <functional>

#include "phasespace/grid.hpp"
#include "phasespace/oscillator.hpp"
#include "phasespace/photon_statistics.hpp"

namespace phasespace {

enum class Parity { kEven, kOdd };

/// Even ("male") or odd ("female") coherent state of the parametric
/// oscillator, evaluated with the ε pair of one instant.
///
///   Ψ = 2N Ψ0 exp(-|α|²/2 - ε*α²/2ε) {cosh | sinh}(√2αx/ε)
///   N_even = e^{|α|²/2} / (2√cosh|α|²),  N_odd = e^{|α|²/2} / (2√sinh|α|²)
///
/// These constants give unit norm as they stand: the superposition equals
/// N(Ψ_α ± Ψ_-α) and ⟨Ψ_α|Ψ_-α⟩ = e^{-2|α|²} is conserved in time.
class CatState {
 public:
  // Odd cats need |α| >= 1e-12 (NullState otherwise).
  CatState(Parity parity, Complex alpha, EpsPair pair = EpsPair::initial());

  Parity parity() const { return parity_; }
  Complex alpha() const { return alpha_; }
  const EpsPair& pair() const { return pair_; }
  double normalization() const;

 private:
  Parity parity_;
  Complex alpha_;
  EpsPair pair_;
};

Complex cat_wavefunction(const CatState& cat, double x);

/// ‖A²Ψ - α²Ψ‖/‖α²Ψ‖ with A applied by finite differences. The grid needs at
/// least 1024 points and must reach where Ψ has decayed (GridTooCoarse).
double cat_a_squared_residual(const CatState& cat, const SpatialGrid& grid);
double cat_a_squared_residual(const CatState& cat);

/// P_n = |⟨Ψ_n|Ψ⟩|² against number_wavefunction at the cat's own ε pair, by
/// trapezoid quadrature. The overlaps are recomputed on every other grid
/// point and must agree to 1e-9 (GridTooCoarse).
PhotonDistribution cat_photon_distribution(const CatState& cat, int cutoff);
PhotonDistribution cat_photon_distribution(const CatState& cat, int cutoff, const SpatialGrid& grid);

/// W(p, q) = ∫ Ψ*(q + u/2) Ψ(q - u/2) e^{ipu} du, normalized so that
/// ∫ W dp dq / 2π = 1 for normalized Ψ. `extent` bounds the support of Ψ; the
/// u integral runs over ±2·extent.
PhaseGrid wigner_transform(const std::function<Complex(double)>& psi, double extent, const PhaseGridSpec& spec,
                           int threads = 1);

PhaseGrid cat_wigner_grid(const CatState& cat, const PhaseGridSpec& spec, int threads = 1);

}  // namespace phasespace
