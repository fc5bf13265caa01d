#include "phasespace/photon_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace phasespace {

namespace {

constexpr double kOracleTolerance = 1e-6;

// Clamp probabilities in [-slack, 0) to 0; larger violations are a
// convention bug, not rounding noise.
double checked_probability(double p, int* clamped) {
  if (p < 0.0) {
    if (p < -kProbabilitySlack) {
      fail(ErrorCode::kNegativeProbability, "photon probability " + std::to_string(p) + " is negative");
    }
    if (clamped) ++*clamped;
    return 0.0;
  }
  if (p > 1.0 + kProbabilitySlack) {
    fail(ErrorCode::kInvalidState, "photon probability " + std::to_string(p) + " exceeds one");
  }
  return p;
}

std::vector<int> doubled(std::span<const int> n) {
  std::vector<int> out(n.begin(), n.end());
  out.insert(out.end(), n.begin(), n.end());
  return out;
}

void check_photon_index(const GaussianState& state, std::span<const int> n) {
  if (static_cast<int>(n.size()) != state.n_modes()) {
    fail(ErrorCode::kDimensionMismatch, "photon index must have one entry per mode");
  }
  for (int e : n) {
    if (e < 0) fail(ErrorCode::kInvalidArgument, "photon numbers must be non-negative");
    if (e > kMaxPhotonCutoff) {
      fail(ErrorCode::kDegreeTooLarge, "photon number above " + std::to_string(kMaxPhotonCutoff));
    }
  }
}

double fock_diagonal(int n, double p, double q) {
  const double r2 = p * p + q * q;
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return 2.0 * sign * std::exp(-r2) * laguerre(n, 0.0, 2.0 * r2);
}

}  // namespace

PhotonDistribution::PhotonDistribution(MultiIndex cutoff, std::vector<double> probs, double p0, int clamped)
    : cutoff_(std::move(cutoff)), probs_(std::move(probs)), p0_(p0), clamped_(clamped) {
  std::size_t expected = 1;
  for (int c : cutoff_.entries()) expected *= static_cast<std::size_t>(c) + 1;
  if (probs_.size() != expected) fail(ErrorCode::kDimensionMismatch, "probability table has the wrong size");
  means_.assign(cutoff_.size(), 0.0);
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    mass_ += probs_[i];
    const MultiIndex n = index_at(i);
    for (std::size_t j = 0; j < n.size(); ++j) means_[j] += n[j] * probs_[i];
  }
}

MultiIndex PhotonDistribution::index_at(std::size_t flat) const {
  std::vector<int> n(cutoff_.size());
  for (std::size_t j = 0; j < n.size(); ++j) {
    const std::size_t extent = static_cast<std::size_t>(cutoff_[j]) + 1;
    n[j] = static_cast<int>(flat % extent);
    flat /= extent;
  }
  return MultiIndex(std::move(n));
}

double PhotonDistribution::prob(std::span<const int> n) const {
  if (n.size() != cutoff_.size()) fail(ErrorCode::kDimensionMismatch, "photon index has the wrong size");
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (n[j] < 0 || n[j] > cutoff_[j]) fail(ErrorCode::kIndexOutOfRange, "photon index outside the cutoff");
    flat += stride * static_cast<std::size_t>(n[j]);
    stride *= static_cast<std::size_t>(cutoff_[j]) + 1;
  }
  return probs_[flat];
}

double photon_prob(const GaussianState& state, std::span<const int> n) {
  check_photon_index(state, n);
  const QFunctionParams params = to_q_params(state);
  const std::vector<int> index = doubled(n);
  const HermiteTable table(params.r, params.ry, index, HermiteTable::Scaling::kSqrtFactorial);
  // H_(n,n)/√((n,n)!) = H_(n,n)/n!.
  return checked_probability(params.p0 * table.at(index).real(), nullptr);
}

double photon_prob(const GaussianState& state, const MultiIndex& n) { return photon_prob(state, n.entries()); }

PhotonDistribution photon_distribution(const GaussianState& state, const MultiIndex& cutoff) {
  check_photon_index(state, cutoff.entries());
  const QFunctionParams params = to_q_params(state);
  const HermiteTable table(params.r, params.ry, doubled(cutoff.entries()), HermiteTable::Scaling::kSqrtFactorial);

  std::size_t size = 1;
  for (int c : cutoff.entries()) size *= static_cast<std::size_t>(c) + 1;
  std::vector<double> probs(size);
  int clamped = 0;
  std::vector<int> n(cutoff.size(), 0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    probs[flat] = checked_probability(params.p0 * table.at(doubled(n)).real(), &clamped);
    for (std::size_t j = 0; j < n.size(); ++j) {
      if (++n[j] <= cutoff[j]) break;
      n[j] = 0;
    }
  }
  return PhotonDistribution(cutoff, std::move(probs), params.p0, clamped);
}

Complex wigner_fock(int m, int n, double p, double q) {
  if (m < 0 || n < 0 || m > kMaxPhotonCutoff || n > kMaxPhotonCutoff) {
    fail(ErrorCode::kIndexOutOfRange, "Fock indices must lie in [0, " + std::to_string(kMaxPhotonCutoff) + "]");
  }
  if (m < n) return std::conj(wigner_fock(n, m, p, q));
  const int k = m - n;
  const double r2 = p * p + q * q;
  // 2^{k+1}·(1/√2)^k = 2^{k/2+1}; √(n!/m!) through lgamma.
  const double log_scale = (0.5 * k + 1.0) * std::numbers::ln2 + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  const Complex z(q, -p);
  const Complex zk = k == 0 ? Complex(1.0) : std::pow(z, k);
  return sign * std::exp(log_scale - r2) * laguerre(n, k, 2.0 * r2) * zk;
}

double photon_prob_oracle(const GaussianState& state, const MultiIndex& n, QuadratureGrid grid) {
  const int modes = state.n_modes();
  if (modes > 2) fail(ErrorCode::kInvalidArgument, "the phase-space oracle handles at most two modes");
  if (static_cast<int>(n.size()) != modes) fail(ErrorCode::kDimensionMismatch, "photon index must match the mode count");
  int n_max = 0;
  for (int e : n.entries()) n_max = std::max(n_max, e);

  const double half_width = grid.half_width > 0.0 ? grid.half_width : 6.0 + 2.0 * std::sqrt(double(n_max));
  int points = grid.points_per_axis;
  if (points <= 0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(state.dispersion(), Eigen::EigenvaluesOnly);
    // The integrand W_ρ·W_nn is a Gaussian of width 1/√(2 + 1/λmin) times a
    // polynomial oscillating on the scale 2/√(2n + 1).
    const double width = std::min(1.0 / std::sqrt(2.0 + 1.0 / eig.eigenvalues().minCoeff()),
                                  2.0 / std::sqrt(2.0 * n_max + 1.0));
    points = 2 * static_cast<int>(std::ceil(half_width / (0.4 * width))) + 1;
  }
  if (points % 2 == 0) ++points;
  if (points < 5) fail(ErrorCode::kGridTooCoarse, "oracle grid needs at least 5 points per axis");
  const double h = 2.0 * half_width / (points - 1);

  std::vector<double> axis(points);
  std::vector<double> weight(points, 1.0);
  std::vector<double> half_weight(points, 0.0);
  for (int i = 0; i < points; ++i) {
    axis[i] = -half_width + h * i;
    if (i % 2 == 0) half_weight[i] = 1.0;
  }
  weight.front() = weight.back() = 0.5;
  half_weight.front() = half_weight.back() = 0.5;

  // Fock factor per mode on its own (p_j, q_j) plane.
  std::vector<std::vector<double>> fock(modes, std::vector<double>(std::size_t(points) * points));
  for (int j = 0; j < modes; ++j) {
    for (int ip = 0; ip < points; ++ip) {
      for (int iq = 0; iq < points; ++iq) fock[j][std::size_t(ip) * points + iq] = fock_diagonal(n[j], axis[ip], axis[iq]);
    }
  }

  const WignerEvaluator w(state);
  const int dim = 2 * modes;
  std::vector<int> idx(dim, 0);
  RealVector point(dim);
  double full = 0.0;
  double half = 0.0;
  const std::size_t total = static_cast<std::size_t>(std::pow(double(points), dim));
  for (std::size_t count = 0; count < total; ++count) {
    double factor = 1.0;
    double full_w = 1.0;
    double half_w = 1.0;
    for (int j = 0; j < modes; ++j) {
      const int ip = idx[j];
      const int iq = idx[modes + j];
      factor *= fock[j][std::size_t(ip) * points + iq];
      full_w *= weight[ip] * weight[iq];
      half_w *= half_weight[ip] * half_weight[iq];
    }
    if (factor != 0.0) {
      for (int k = 0; k < dim; ++k) point(k) = axis[idx[k]];
      const double value = factor * w(point);
      full += full_w * value;
      half += half_w * value;
    }
    for (int k = 0; k < dim; ++k) {
      if (++idx[k] < points) break;
      idx[k] = 0;
    }
  }
  const double norm = std::pow(2.0 * std::numbers::pi, modes);
  full *= std::pow(h, dim) / norm;
  half *= std::pow(2.0 * h, dim) / norm;
  if (std::abs(full - half) > kOracleTolerance) {
    fail(ErrorCode::kGridTooCoarse, "oracle grid and half-grid differ by " + std::to_string(std::abs(full - half)));
  }
  return full;
}

}  // namespace phasespace
