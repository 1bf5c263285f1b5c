#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "easm/load_model.hpp"
#include "easm/matrix.hpp"
#include "easm/state.hpp"

namespace easm {

using LoadMatrix = SquareMatrix<double>;

// Floor applied to loads in epsilon mode (KB/s).
inline constexpr double kLoadEpsilon = 1e-6;

enum class ZeroLoadPolicy {
  strict,         // a zero load is an error
  epsilon_floor,  // loads below kLoadEpsilon are raised to it
};

// One pair whose trigger factor exceeded the threshold. m < n (scan order).
struct Trigger {
  std::size_t m = 0;
  std::size_t n = 0;
  double delta = 0.0;
};

struct DetectionResult {
  std::vector<double> loads;
  LoadMatrix matrix;
  double threshold = 0.0;
  std::vector<Trigger> triggers;

  bool imbalanced() const { return !triggers.empty(); }
};

struct DetectionOptions {
  ZeroLoadPolicy zero_policy = ZeroLoadPolicy::strict;
  // Overrides the threshold computed from the matrix.
  std::optional<double> fixed_threshold;
};

// d(m,n) = L(m) / L(n).
LoadMatrix load_difference_matrix(std::span<const double> loads,
                                  ZeroLoadPolicy policy = ZeroLoadPolicy::strict);

// (max D - min D) / max D.
double threshold(const LoadMatrix& matrix);

// |d(m,n) - d(n,m)|
double trigger_factor(const LoadMatrix& matrix, std::size_t m, std::size_t n);

DetectionResult detect(std::span<const double> loads, const DetectionOptions& options = {});
DetectionResult detect(const NetworkState& state, const LoadModelParams& params, LoadMode mode,
                       const DetectionOptions& options = {});

}  // namespace easm
