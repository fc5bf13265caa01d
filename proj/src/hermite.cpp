#include "phasespace/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace phasespace {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) fail(ErrorCode::kInvalidArgument, "multi-index entries must be non-negative");
  }
}

int MultiIndex::total() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

std::uint64_t MultiIndex::factorial() const {
  std::uint64_t out = 1;
  for (int e : entries_) {
    if (e > 20) fail(ErrorCode::kDegreeTooLarge, "factorial only defined for entries <= 20");
    for (int k = 2; k <= e; ++k) {
      if (__builtin_mul_overflow(out, static_cast<std::uint64_t>(k), &out)) {
        fail(ErrorCode::kDegreeTooLarge, "multi-index factorial overflows 64 bits");
      }
    }
  }
  return out;
}

double MultiIndex::log_factorial() const {
  double out = 0.0;
  for (int e : entries_) out += std::lgamma(e + 1.0);
  return out;
}

void check_symmetric_r(const ComplexMatrix& r) {
  if (r.rows() != r.cols()) fail(ErrorCode::kDimensionMismatch, "R must be square");
  const double scale = std::max(1.0, max_abs(r));
  if (max_abs(r - r.transpose()) > 1e-12 * scale) fail(ErrorCode::kAsymmetricR, "R is not symmetric");
}

HermiteTable::HermiteTable(const ComplexMatrix& r, const ComplexVector& ry, std::vector<int> bound,
                           Scaling scaling)
    : bound_(std::move(bound)), scaling_(scaling) {
  const std::size_t d = bound_.size();
  if (static_cast<std::size_t>(r.rows()) != d || static_cast<std::size_t>(ry.size()) != d) {
    fail(ErrorCode::kDimensionMismatch, "R, Ry and the index bound must have the same dimension");
  }
  check_symmetric_r(r);

  strides_.assign(d, 1);
  std::size_t size = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (bound_[k] < 0) fail(ErrorCode::kInvalidArgument, "index bound must be non-negative");
    strides_[k] = size;
    const std::size_t extent = static_cast<std::size_t>(bound_[k]) + 1;
    if (size > kMaxHermiteTableSize / extent) {
      fail(ErrorCode::kDegreeTooLarge, "Hermite table exceeds " + std::to_string(kMaxHermiteTableSize) +
                                           " lattice points");
    }
    size *= extent;
  }

  values_.assign(size, Complex(0.0));
  values_[0] = 1.0;
  const bool scaled = scaling_ == Scaling::kSqrtFactorial;
  std::vector<int> m(d, 0);  // index of the entry being filled
  for (std::size_t idx = 1; idx < size; ++idx) {
    // Advance the mixed-radix counter.
    for (std::size_t k = 0; k < d; ++k) {
      if (++m[k] <= bound_[k]) break;
      m[k] = 0;
    }
    // Step down along the first non-zero direction j; parent = m - e_j.
    std::size_t j = 0;
    while (m[j] == 0) ++j;
    const std::size_t parent = idx - strides_[j];
    Complex value = ry(j) * values_[parent];
    for (std::size_t k = 0; k < d; ++k) {
      const int mk = m[k] - (k == j ? 1 : 0);
      if (mk == 0) continue;
      const double weight = scaled ? std::sqrt(static_cast<double>(mk)) : static_cast<double>(mk);
      value -= r(j, k) * weight * values_[parent - strides_[k]];
    }
    if (scaled) value /= std::sqrt(static_cast<double>(m[j]));
    values_[idx] = value;
  }
}

std::size_t HermiteTable::offset(std::span<const int> m) const {
  if (m.size() != bound_.size()) fail(ErrorCode::kDimensionMismatch, "index has the wrong dimension");
  std::size_t off = 0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] < 0 || m[k] > bound_[k]) fail(ErrorCode::kIndexOutOfRange, "index outside the Hermite table");
    off += strides_[k] * static_cast<std::size_t>(m[k]);
  }
  return off;
}

Complex HermiteTable::at(std::span<const int> m) const { return values_[offset(m)]; }

Complex hermite_multivar(const ComplexMatrix& r, const ComplexVector& y, std::span<const int> m) {
  if (r.rows() != y.size() || static_cast<std::size_t>(y.size()) != m.size()) {
    fail(ErrorCode::kDimensionMismatch, "R, y and the multi-index must have the same dimension");
  }
  check_symmetric_r(r);
  int total = 0;
  for (int e : m) {
    if (e < 0) fail(ErrorCode::kInvalidArgument, "multi-index entries must be non-negative");
    total += e;
  }
  if (total > kMaxHermiteDegree) {
    fail(ErrorCode::kDegreeTooLarge, "total degree " + std::to_string(total) + " exceeds " +
                                         std::to_string(kMaxHermiteDegree));
  }
  const HermiteTable table(r, r * y, std::vector<int>(m.begin(), m.end()));
  return table.at(m);
}

double laguerre(int n, double alpha, double x) {
  if (n < 0) fail(ErrorCode::kInvalidArgument, "Laguerre degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace phasespace
