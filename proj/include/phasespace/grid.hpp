#pragma once

#include <functional>
#include <thread>
#include <vector>

#include "phasespace/error.hpp"

namespace phasespace {

inline constexpr int kMaxGridResolution = 512;

/// Square (p, q) grid with `points` samples per axis, endpoints included.
struct PhaseGridSpec {
  double p_min = -5.0;
  double p_max = 5.0;
  double q_min = -5.0;
  double q_max = 5.0;
  int points = 201;

  double p_step() const { return (p_max - p_min) / (points - 1); }
  double q_step() const { return (q_max - q_min) / (points - 1); }
  double p(int i) const { return p_min + p_step() * i; }
  double q(int j) const { return q_min + q_step() * j; }
  // InvalidArgument unless min < max on both axes and 2 <= points <= 512.
  void validate() const;
};

/// Values on a PhaseGridSpec, stored p-major: value(i, j) at (p_i, q_j).
struct PhaseGrid {
  PhaseGridSpec spec;
  std::vector<double> values;

  double value(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.points + j]; }
  double min_value() const;
  // Trapezoid estimate of ∫ value dp dq / 2π.
  double integral() const;
};

/// Runs body(i) for i in [0, count) on up to `threads` threads. Each index is
/// handled exactly once, so results written per index do not depend on the
/// thread count. The first exception thrown by any body is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

/// Evaluates f(p, q) on the grid, rows in parallel.
PhaseGrid evaluate_grid(const PhaseGridSpec& spec, const std::function<double(double, double)>& f, int threads = 1);

}  // namespace phasespace
