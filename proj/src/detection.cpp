#include "easm/detection.hpp"

#include <algorithm>
#include <cmath>

#include "easm/error.hpp"

namespace easm {

LoadMatrix load_difference_matrix(std::span<const double> loads, ZeroLoadPolicy policy) {
  std::vector<double> values(loads.begin(), loads.end());
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c] < 0.0 || !std::isfinite(values[c])) {
      throw DegenerateLoadError("controller " + std::to_string(c) + " has an invalid load");
    }
    if (values[c] <= 0.0 || (policy == ZeroLoadPolicy::epsilon_floor && values[c] < kLoadEpsilon)) {
      if (policy == ZeroLoadPolicy::strict) {
        throw DegenerateLoadError("controller " + std::to_string(c) +
                                  " has zero load; load ratios are undefined");
      }
      values[c] = kLoadEpsilon;
    }
  }
  LoadMatrix matrix(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) {
    for (std::size_t n = 0; n < values.size(); ++n) {
      matrix(m, n) = m == n ? 1.0 : values[m] / values[n];
    }
  }
  return matrix;
}

double threshold(const LoadMatrix& matrix) {
  if (matrix.empty()) throw ParameterError("threshold of an empty load-difference matrix");
  const auto values = matrix.values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return (*hi - *lo) / *hi;
}

double trigger_factor(const LoadMatrix& matrix, std::size_t m, std::size_t n) {
  return std::abs(matrix(m, n) - matrix(n, m));
}

DetectionResult detect(std::span<const double> loads, const DetectionOptions& options) {
  DetectionResult out;
  out.loads.assign(loads.begin(), loads.end());
  out.matrix = load_difference_matrix(loads, options.zero_policy);
  out.threshold = options.fixed_threshold.value_or(threshold(out.matrix));
  const auto count = out.matrix.size();
  for (std::size_t m = 0; m < count; ++m) {
    for (std::size_t n = m + 1; n < count; ++n) {
      const double delta = trigger_factor(out.matrix, m, n);
      if (delta > out.threshold) out.triggers.push_back({m, n, delta});
    }
  }
  return out;
}

DetectionResult detect(const NetworkState& state, const LoadModelParams& params, LoadMode mode,
                       const DetectionOptions& options) {
  const auto loads = controller_loads(state, params, mode);
  return detect(loads, options);
}

}  // namespace easm
