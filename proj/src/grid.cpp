#include "phasespace/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>

namespace phasespace {

void PhaseGridSpec::validate() const {
  if (!(p_min < p_max) || !(q_min < q_max) || !std::isfinite(p_min) || !std::isfinite(p_max) ||
      !std::isfinite(q_min) || !std::isfinite(q_max)) {
    fail(ErrorCode::kInvalidArgument, "grid ranges must be finite with min < max");
  }
  if (points < 2 || points > kMaxGridResolution) {
    fail(ErrorCode::kInvalidArgument, "grid resolution must lie in [2, 512]");
  }
}

double PhaseGrid::min_value() const {
  return values.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::min_element(values.begin(), values.end());
}

double PhaseGrid::integral() const {
  const int n = spec.points;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      sum += wi * wj * value(i, j);
    }
  }
  return sum * spec.p_step() * spec.q_step() / (2.0 * std::numbers::pi);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

PhaseGrid evaluate_grid(const PhaseGridSpec& spec, const std::function<double(double, double)>& f, int threads) {
  spec.validate();
  PhaseGrid grid{spec, std::vector<double>(static_cast<std::size_t>(spec.points) * spec.points)};
  parallel_for(spec.points, threads, [&](int i) {
    const double p = spec.p(i);
    for (int j = 0; j < spec.points; ++j) grid.values[static_cast<std::size_t>(i) * spec.points + j] = f(p, spec.q(j));
  });
  return grid;
}

}  // namespace phasespace
