#pragma once

#include <array>
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "easm/random.hpp"
#include "easm/state.hpp"
#include "easm/topology.hpp"

namespace easm::test {

inline std::string data_path(const std::string& name) { return std::string(EASM_DATA_DIR) + "/" + name; }
inline std::string scenario_path(const std::string& name) {
  return std::string(EASM_SCENARIO_DIR) + "/" + name;
}

// Three-controller example: c1 {s1,s2,s3}, c2 {s4..s7}, c3 {s8,s9}.
inline const std::vector<double> kExampleRates{30, 30, 30, 30, 30, 40, 50, 30, 40};

inline NetworkState example3_state(std::array<double, 3> capacity = {kDefaultCapacity, kDefaultCapacity,
                                                                   kDefaultCapacity}) {
  auto topology = std::make_shared<const Topology>(load_graphml(data_path("example3.graphml")));
  std::vector<ControllerRecord> controllers{
      {"c1", "c1", capacity[0]}, {"c2", "c2", capacity[1]}, {"c3", "c3", capacity[2]}};
  std::vector<SwitchRecord> switches;
  for (int i = 0; i < 9; ++i) {
    const auto id = "s" + std::to_string(i + 1);
    switches.push_back({id, id, kExampleRates[i]});
  }
  std::vector<std::size_t> master{0, 0, 0, 1, 1, 1, 1, 2, 2};
  return NetworkState::create(topology, controllers, switches, master);
}

// Random connected graph: spanning tree plus `extra` random links.
inline std::vector<std::pair<std::string, std::string>> random_links(Rng& rng, std::size_t n,
                                                                     std::size_t extra) {
  std::vector<std::pair<std::string, std::string>> links;
  for (std::size_t v = 1; v < n; ++v) {
    links.emplace_back("v" + std::to_string(uniform_index(rng, v)), "v" + std::to_string(v));
  }
  for (std::size_t e = 0; e < extra; ++e) {
    links.emplace_back("v" + std::to_string(uniform_index(rng, n)),
                       "v" + std::to_string(uniform_index(rng, n)));
  }
  return links;
}

inline std::vector<std::string> node_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("v" + std::to_string(i));
  return out;
}

struct InstanceSpec {
  std::size_t min_controllers = 2;
  std::size_t max_controllers = 5;
  std::size_t min_switches = 5;
  std::size_t max_switches = 15;
  double min_flow = 10.0;
  double max_flow = 300.0;
  double capacity = 5000.0;
};

// Random state with a switch on every node, controllers co-located with
// distinct nodes and a uniformly random (not nearest) mastership.
inline NetworkState random_instance(std::uint64_t seed, const InstanceSpec& spec = {}) {
  Rng rng(seed);
  const auto n = spec.min_switches + uniform_index(rng, spec.max_switches - spec.min_switches + 1);
  const auto m = std::min(n, spec.min_controllers +
                                 uniform_index(rng, spec.max_controllers - spec.min_controllers + 1));
  const auto nodes = node_names(n);
  auto topology = std::make_shared<const Topology>(nodes, random_links(rng, n, n / 2));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);

  std::vector<ControllerRecord> controllers;
  for (std::size_t c = 0; c < m; ++c) {
    controllers.push_back({"c" + std::to_string(c), nodes[order[c]], spec.capacity});
  }
  std::vector<SwitchRecord> switches;
  std::vector<std::size_t> master;
  for (std::size_t s = 0; s < n; ++s) {
    switches.push_back({"s" + std::to_string(s), nodes[s],
                        uniform_real(rng, spec.min_flow, spec.max_flow)});
    // Every controller gets at least one switch so no load is zero.
    master.push_back(s < m ? s : uniform_index(rng, m));
  }
  return NetworkState::create(topology, controllers, switches, master);
}

}  // namespace easm::test
