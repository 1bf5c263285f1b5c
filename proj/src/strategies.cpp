#include "easm/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "easm/detection.hpp"
#include "easm/error.hpp"

namespace easm {

namespace {

ExecutedTriplet record_move(const NetworkState& before, const NetworkState& after,
                            const StrategyConfig& config, std::size_t s, std::size_t from,
                            std::size_t to) {
  auto loads_before = controller_loads(before, config.load, config.mode);
  MigrationTriplet t;
  t.emigration = from;
  t.sw = s;
  t.immigration = to;
  t.cost = migration_cost(before, config.load, s, from, to);
  t.efficiency = migration_efficiency(before, config.load, config.mode, loads_before, s, from, to);
  t.simplified_cost = simplified_migration_cost(before, s, to);
  return {t, std::move(loads_before), controller_loads(after, config.load, config.mode), 1};
}

struct BaselineStart {
  DetectionResult detection;
  std::vector<std::size_t> overloaded;
};

BaselineStart start_baseline(const NetworkState& state, const StrategyConfig& config) {
  const DetectionOptions options{.zero_policy = config.rebalance.zero_policy};
  auto detection = detect(state, config.load, config.mode, options);
  auto overloaded = emigration_controllers(detection);
  return {std::move(detection), std::move(overloaded)};
}

bool still_imbalanced(const NetworkState& state, const StrategyConfig& config, double lambda) {
  const DetectionOptions options{.zero_policy = config.rebalance.zero_policy,
                                 .fixed_threshold = lambda};
  return detect(state, config.load, config.mode, options).imbalanced();
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::nsm: return "NSM";
    case StrategyKind::csm: return "CSM";
    case StrategyKind::musm: return "MUSM";
    case StrategyKind::easm: return "EASM";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto kind : kAllStrategies) {
    if (to_string(kind) == upper) return kind;
  }
  return std::nullopt;
}

double StepReport::cost() const {
  double sum = 0.0;
  for (const auto& e : executed) sum += e.triplet.cost;
  return sum;
}

double StepReport::simplified_cost() const {
  double sum = 0.0;
  for (const auto& e : executed) sum += e.triplet.simplified_cost;
  return sum;
}

StepResult step_nsm(const NetworkState& state) { return {state, {}}; }

StepResult step_csm(const NetworkState& state, const StrategyConfig& config, std::uint64_t seed,
                    const SwitchPicker& picker) {
  StepResult out{state, {}};
  const auto start = start_baseline(state, config);
  if (!start.detection.imbalanced()) return out;

  Rng rng(seed);
  for (const auto from : start.overloaded) {
    const auto domain = out.state.switches_of(from);
    if (domain.empty()) continue;
    const std::size_t s = picker ? picker(domain, rng) : domain[uniform_index(rng, domain.size())];
    if (out.state.master(s) != from) throw PlannerError("CSM picker returned a foreign switch");

    const auto loads = controller_loads(out.state, config.load, config.mode);
    const double mean = std::accumulate(loads.begin(), loads.end(), 0.0) / loads.size();
    std::optional<std::size_t> target;
    for (std::size_t n = 0; n < loads.size(); ++n) {
      if (n == from || !(loads[n] < mean)) continue;
      if (!target || out.state.hop_switch_controller(s, n) < out.state.hop_switch_controller(s, *target)) {
        target = n;
      }
    }
    if (!target) {
      out.report.warnings.push_back("CSM: no underloaded controller for '" +
                                    out.state.controller(from).id + "'");
      continue;
    }
    try {
      auto next = out.state.reassign(s, *target);
      out.report.executed.push_back(record_move(out.state, next, config, s, from, *target));
      out.state = std::move(next);
    } catch (const ValidationError& e) {
      out.report.warnings.push_back(std::string("CSM: ") + e.what());
    }
  }
  out.report.rounds = out.report.executed.empty() ? 0 : 1;
  out.report.balanced = !still_imbalanced(out.state, config, start.detection.threshold);
  return out;
}

StepResult step_musm(const NetworkState& state, const StrategyConfig& config) {
  StepResult out{state, {}};
  const auto start = start_baseline(state, config);
  if (!start.detection.imbalanced()) return out;

  for (const auto from : start.overloaded) {
    const auto domain = out.state.switches_of(from);
    if (domain.empty()) continue;
    std::size_t s = domain.front();
    for (const auto j : domain) {
      if (out.state.flow_rate(j) > out.state.flow_rate(s)) s = j;
    }

    const auto loads = controller_loads(out.state, config.load, config.mode);
    std::optional<std::size_t> target;
    double best_residual = 0.0;
    for (std::size_t n = 0; n < loads.size(); ++n) {
      if (n == from) continue;
      const double residual = out.state.capacity(n) - loads[n];
      if (!target || residual > best_residual) {
        target = n;
        best_residual = residual;
      }
    }
    if (!target || best_residual < switch_load_share(out.state, config.mode, s, *target)) {
      out.report.warnings.push_back("MUSM: no controller can absorb a switch from '" +
                                    out.state.controller(from).id + "'");
      continue;
    }
    try {
      auto next = out.state.reassign(s, *target);
      out.report.executed.push_back(record_move(out.state, next, config, s, from, *target));
      out.state = std::move(next);
    } catch (const ValidationError& e) {
      out.report.warnings.push_back(std::string("MUSM: ") + e.what());
    }
  }
  out.report.rounds = out.report.executed.empty() ? 0 : 1;
  out.report.balanced = !still_imbalanced(out.state, config, start.detection.threshold);
  return out;
}

StepResult step_easm(const NetworkState& state, const StrategyConfig& config, std::uint64_t seed) {
  auto planner = config.planner;
  planner.seed = seed;
  auto report = rebalance(state, config.load, config.mode, planner, config.rebalance);
  StepResult out{std::move(report.final_state), {}};
  out.report.executed = std::move(report.executed);
  out.report.rounds = report.rounds;
  out.report.balanced = report.balanced;
  out.report.warnings = std::move(report.log);
  return out;
}

StepResult step(StrategyKind kind, const NetworkState& state, const StrategyConfig& config,
                std::uint64_t seed) {
  switch (kind) {
    case StrategyKind::nsm: return step_nsm(state);
    case StrategyKind::csm: return step_csm(state, config, seed);
    case StrategyKind::musm: return step_musm(state, config);
    case StrategyKind::easm: return step_easm(state, config, seed);
  }
  throw ParameterError("unknown strategy");
}

}  // namespace easm
