#include "easm/executor.hpp"

#include <algorithm>
#include <sstream>

#include "easm/error.hpp"
#include "easm/random.hpp"

namespace easm {

namespace {

std::string describe(const NetworkState& state, const MigrationTriplet& t) {
  std::ostringstream out;
  out << "[" << state.controller(t.emigration).id << ", " << state.switch_id(t.sw) << ", "
      << state.controller(t.immigration).id << "]";
  return out.str();
}

}  // namespace

ExecutionResult execute_plan(const NetworkState& state, const MigrationPlan& plan,
                             const LoadModelParams& params, LoadMode mode,
                             const ExecuteOptions& options) {
  ExecutionResult out{state, {}, {}};
  for (const auto& triplet : plan.triplets) {
    const auto& current = out.state;
    if (triplet.sw >= current.switch_count() || triplet.immigration >= current.controller_count() ||
        triplet.emigration == triplet.immigration) {
      out.skipped.push_back("skipped malformed triplet");
      continue;
    }
    if (current.master(triplet.sw) != triplet.emigration) {
      out.skipped.push_back("skipped " + describe(current, triplet) + ": switch already moved");
      continue;
    }
    auto before = controller_loads(current, params, mode);
    const double share = switch_load_share(current, mode, triplet.sw, triplet.immigration);
    if (before[triplet.immigration] + share > current.capacity(triplet.immigration)) {
      out.skipped.push_back("skipped " + describe(current, triplet) + ": target over capacity");
      continue;
    }
    std::optional<NetworkState> next;
    try {
      next = current.reassign(triplet.sw, triplet.immigration);
    } catch (const ValidationError& e) {
      out.skipped.push_back("skipped " + describe(current, triplet) + ": " + e.what());
      continue;
    }
    auto after = controller_loads(*next, params, mode);
    if (options.require_improvement && !(load_variance(after) < load_variance(before))) {
      out.skipped.push_back("skipped " + describe(current, triplet) +
                            ": load variance would not decrease");
      continue;
    }
    out.executed.push_back({triplet, std::move(before), std::move(after), options.round});
    out.state = std::move(*next);
  }
  return out;
}

void RebalanceParams::validate() const {
  if (max_rounds < 1) throw ParameterError("max_rounds must be at least 1");
  if (!(damping >= 1.0)) throw ParameterError("threshold damping must be at least 1");
}

RebalanceReport rebalance(const NetworkState& state, const LoadModelParams& load_params,
                          LoadMode mode, const PlannerParams& planner_params,
                          const RebalanceParams& params) {
  params.validate();
  planner_params.validate();
  load_params.validate();

  RebalanceReport report{.final_state = state};
  double lambda = 0.0;
  std::vector<Move> barred;

  const auto detect_with_floor = [&](const NetworkState& current) {
    DetectionOptions options{.zero_policy = params.zero_policy};
    const auto loads = controller_loads(current, load_params, mode);
    const double fresh = threshold(load_difference_matrix(loads, params.zero_policy));
    lambda = std::max(lambda, params.damping * fresh);
    options.fixed_threshold = lambda;
    return detect(loads, options);
  };

  auto detection = detect_with_floor(report.final_state);
  report.variance_trace.push_back(load_variance(detection.loads));
  while (true) {
    if (!detection.imbalanced()) {
      report.balanced = true;
      break;
    }
    if (report.rounds >= params.max_rounds) break;

    auto round_params = planner_params;
    round_params.seed = derive_seed(planner_params.seed, static_cast<std::uint64_t>(report.rounds));
    const auto planned = plan(report.final_state, load_params, mode, round_params, detection, barred);
    for (const auto& w : planned.warnings) report.log.push_back(w);
    if (planned.empty()) {
      report.stalled = true;
      report.log.push_back("stall: imbalance detected but no migration is possible");
      break;
    }
    auto executed = execute_plan(report.final_state, planned, load_params, mode,
                                 {.require_improvement = params.require_improvement,
                                  .round = report.rounds + 1});
    for (const auto& s : executed.skipped) report.log.push_back(s);
    if (executed.executed.empty()) {
      report.stalled = true;
      report.log.push_back("stall: every planned triplet was rejected");
      break;
    }

    ++report.rounds;
    barred.clear();
    for (const auto& done : executed.executed) {
      report.total_cost += done.triplet.cost;
      if (params.oscillation_guard) {
        barred.push_back({done.triplet.sw, done.triplet.immigration, done.triplet.emigration});
      }
      report.executed.push_back(done);
    }
    report.final_state = std::move(executed.state);
    detection = detect_with_floor(report.final_state);
    report.variance_trace.push_back(load_variance(detection.loads));
  }
  report.final_lambda = lambda;
  return report;
}

}  // namespace easm
