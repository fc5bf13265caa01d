#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phasespace/linalg.hpp"

namespace phasespace {

// Largest total degree hermite_multivar accepts.
inline constexpr int kMaxHermiteDegree = 40;
// Largest number of lattice points a HermiteTable will allocate.
inline constexpr std::size_t kMaxHermiteTableSize = std::size_t{1} << 26;

/// Photon numbers (n1, ..., nN), all non-negative.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }
  int total() const;

  // n! = ∏ n_j!, exact; entries above 20 or a product that overflows raise
  // DegreeTooLarge.
  std::uint64_t factorial() const;
  double log_factorial() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

/// Values of the multivariable Hermite polynomials H^{R}_m on the box
/// 0 <= m <= bound, defined by the generating function
///
///   exp(-½ tRt + tRy) = Σ_m H^{R}_m(y) t^m / m!.
///
/// The table is built from the recurrence
///   H_{m+e_j} = (Ry)_j H_m - Σ_k R_jk m_k H_{m-e_k},
/// so only R and the product Ry enter. With Scaling::kSqrtFactorial the
/// stored values are H_m/√(m!), which keeps photon-number tables in range.
class HermiteTable {
 public:
  enum class Scaling { kPlain, kSqrtFactorial };

  HermiteTable(const ComplexMatrix& r, const ComplexVector& ry, std::vector<int> bound,
               Scaling scaling = Scaling::kPlain);

  Complex at(std::span<const int> m) const;
  const std::vector<int>& bound() const { return bound_; }
  Scaling scaling() const { return scaling_; }

 private:
  std::size_t offset(std::span<const int> m) const;

  std::vector<int> bound_;
  std::vector<std::size_t> strides_;
  std::vector<Complex> values_;
  Scaling scaling_;
};

// Throws AsymmetricR unless ‖R - Rᵀ‖ <= 1e-12·max(1, ‖R‖).
void check_symmetric_r(const ComplexMatrix& r);

/// Single value H^{R}_m(y); m has one entry per row of R.
Complex hermite_multivar(const ComplexMatrix& r, const ComplexVector& y, std::span<const int> m);

// Generalized Laguerre polynomial L_n^α(x) by the three-term recurrence.
double laguerre(int n, double alpha, double x);

}  // namespace phasespace
