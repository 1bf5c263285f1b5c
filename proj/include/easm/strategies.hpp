#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "easm/executor.hpp"
#include "easm/load_model.hpp"
#include "easm/planner.hpp"
#include "easm/random.hpp"
#include "easm/state.hpp"

namespace easm {

enum class StrategyKind { nsm, csm, musm, easm };

inline constexpr StrategyKind kAllStrategies[] = {StrategyKind::nsm, StrategyKind::csm,
                                                  StrategyKind::musm, StrategyKind::easm};

std::string_view to_string(StrategyKind kind);
// Case-insensitive.
std::optional<StrategyKind> parse_strategy(std::string_view text);

struct StrategyConfig {
  LoadModelParams load;
  LoadMode mode = LoadMode::full;
  PlannerParams planner;
  RebalanceParams rebalance{.max_rounds = 1};
};

struct StepReport {
  std::vector<ExecutedTriplet> executed;
  int rounds = 0;
  bool balanced = true;
  std::vector<std::string> warnings;

  double cost() const;             // Σ request + load-change cost
  double simplified_cost() const;  // Σ α·h(s, target)
};

struct StepResult {
  NetworkState state;
  StepReport report;
};

// Picks the migrating switch for CSM from a non-empty domain.
using SwitchPicker = std::function<std::size_t(std::span<const std::size_t> domain, Rng& rng)>;

StepResult step_nsm(const NetworkState& state);

// Each overloaded controller moves a random switch to the hop-closest
// controller whose load is below the mean.
StepResult step_csm(const NetworkState& state, const StrategyConfig& config, std::uint64_t seed,
                    const SwitchPicker& picker = {});

// Each overloaded controller moves its highest-rate switch to the controller
// with the largest residual capacity.
StepResult step_musm(const NetworkState& state, const StrategyConfig& config);

// One bounded rebalance using the configured planner.
StepResult step_easm(const NetworkState& state, const StrategyConfig& config, std::uint64_t seed);

StepResult step(StrategyKind kind, const NetworkState& state, const StrategyConfig& config,
                std::uint64_t seed);

}  // namespace easm
