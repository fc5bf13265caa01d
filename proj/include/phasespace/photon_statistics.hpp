#pragma once

#include <functional>
#include <span>
#include <vector>

#include "phasespace/gaussian_state.hpp"
#include "phasespace/hermite.hpp"

namespace phasespace {

// Per-mode cutoff accepted by photon_distribution.
inline constexpr int kMaxPhotonCutoff = 60;
// Tiny negative probabilities down to this value are clamped to zero.
inline constexpr double kProbabilitySlack = 1e-10;

/// Photon-number probabilities on the box 0 <= n <= cutoff.
class PhotonDistribution {
 public:
  PhotonDistribution(MultiIndex cutoff, std::vector<double> probs, double p0, int clamped);

  const MultiIndex& cutoff() const { return cutoff_; }
  int n_modes() const { return static_cast<int>(cutoff_.size()); }
  std::size_t size() const { return probs_.size(); }

  // Entries are stored with the first mode varying fastest.
  MultiIndex index_at(std::size_t flat) const;
  double prob(std::span<const int> n) const;
  double prob_at(std::size_t flat) const { return probs_[flat]; }

  double mass() const { return mass_; }
  // Per-mode ⟨n_j⟩ implied by the table alone.
  const std::vector<double>& means() const { return means_; }
  double p0() const { return p0_; }
  int clamped_count() const { return clamped_; }

 private:
  MultiIndex cutoff_;
  std::vector<double> probs_;
  double p0_ = 0.0;
  int clamped_ = 0;
  double mass_ = 0.0;
  std::vector<double> means_;
};

/// P_n = P0·H^{R}_{(n,n)}(y)/n! from the Q-function parameters of the state.
///
/// Evolved states go through the same path: photon_prob(evolve(s, prop), n).
double photon_prob(const GaussianState& state, std::span<const int> n);
double photon_prob(const GaussianState& state, const MultiIndex& n);

PhotonDistribution photon_distribution(const GaussianState& state, const MultiIndex& cutoff);

/// Wigner function of |m⟩⟨n| for one mode, normalized so that
/// ∫ W_mn dp dq/2π = δ_mn.
Complex wigner_fock(int m, int n, double p, double q);

struct QuadratureGrid {
  int points_per_axis = 0;  // 0 picks a spacing from the state; forced odd
  double half_width = 0.0;  // 0 uses 6 + 2√(max n)
};

/// Tr ρ|n⟩⟨n| as the phase-space overlap ∫ W_ρ ∏ W_{n_j n_j} ∏ dp_j dq_j/2π,
/// by tensor-product trapezoid. Modes N <= 2 only. The same sum on every
/// other grid point must agree to 1e-6 or GridTooCoarse is raised.
double photon_prob_oracle(const GaussianState& state, const MultiIndex& n, QuadratureGrid grid = {});

}  // namespace phasespace
