#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "easm/detection.hpp"
#include "easm/load_model.hpp"
#include "easm/planner.hpp"
#include "easm/state.hpp"

namespace easm {

struct ExecutedTriplet {
  MigrationTriplet triplet;
  std::vector<double> loads_before;
  std::vector<double> loads_after;
  int round = 0;
};

struct ExecuteOptions {
  // Skip triplets whose application does not strictly lower the actual load
  // variance (recomputed from the state, not predicted).
  bool require_improvement = false;
  int round = 0;
};

struct ExecutionResult {
  NetworkState state;
  std::vector<ExecutedTriplet> executed;
  std::vector<std::string> skipped;
};

// Applies triplets in plan order. A triplet invalidated by earlier ones
// (switch moved, target over capacity, capacity invariant broken, no
// improvement when required) is skipped and logged.
ExecutionResult execute_plan(const NetworkState& state, const MigrationPlan& plan,
                             const LoadModelParams& params, LoadMode mode,
                             const ExecuteOptions& options = {});

struct RebalanceParams {
  int max_rounds = 10;
  // Multiplies the threshold recomputed each round; values above 1 migrate less often.
  double damping = 1.0;
  // Bars the exact reverse of every move made in the previous round.
  bool oscillation_guard = true;
  bool require_improvement = true;
  ZeroLoadPolicy zero_policy = ZeroLoadPolicy::strict;

  void validate() const;
};

struct RebalanceReport {
  int rounds = 0;
  std::vector<ExecutedTriplet> executed;
  double total_cost = 0.0;
  double final_lambda = 0.0;
  bool balanced = false;
  bool stalled = false;
  // Load variance at the start and after every executed round.
  std::vector<double> variance_trace;
  std::vector<std::string> log;
  NetworkState final_state;
};

// detect -> plan -> execute until no trigger remains, the planner stalls,
// or max_rounds rounds have run.
//
// The threshold in force for a round is max(previous, damping × Λ(fresh
// matrix)); it never decreases within one call.
RebalanceReport rebalance(const NetworkState& state, const LoadModelParams& load_params,
                          LoadMode mode, const PlannerParams& planner_params,
                          const RebalanceParams& params = {});

}  // namespace easm
