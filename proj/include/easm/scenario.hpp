#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "easm/executor.hpp"
#include "easm/sim.hpp"
#include "easm/state.hpp"
#include "easm/strategies.hpp"

namespace easm {

struct TopologySource {
  std::string builtin;                     // e.g. "os3e"
  std::filesystem::path file;              // GraphML, relative to the scenario
  std::optional<RandomNetworkSpec> random;  // generated from the scenario seed
};

// Parsed scenario file. See README for the schema.
struct ScenarioConfig {
  std::string name;
  std::filesystem::path base_dir;
  TopologySource topology;

  std::vector<ControllerRecord> controllers;
  std::vector<SwitchRecord> switches;
  // Empty switch list with all_nodes set: one switch per topology node.
  bool switches_on_all_nodes = false;
  double default_flow_rate = kDefaultMeanFlow;
  Mastership mastership;
  bool nearest_mastership = false;

  // Load model, load mode and planner shared by every strategy; `step.rebalance`
  // bounds EASM per simulation step.
  StrategyConfig step;
  // Used by the single-shot plan command.
  RebalanceParams rebalance;

  std::vector<StrategyKind> strategies;
  TraceParams trace;
  bool trace_rates_from_state = true;
  std::size_t steps = 1;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
};

ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Loads the topology and validates the initial assignment.
NetworkState build_state(const ScenarioConfig& config);

TrafficTrace build_trace(const ScenarioConfig& config, const NetworkState& state);

}  // namespace easm
