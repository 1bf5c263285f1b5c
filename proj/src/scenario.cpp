#include "easm/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "easm/error.hpp"
#include "easm/topology.hpp"

namespace easm {

namespace {

using json = nlohmann::json;

void allow_keys(const json& object, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) throw ParseError(std::string(where) + " must be an object");
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) throw ParseError("unknown field '" + key + "' in " + std::string(where));
  }
}

template <typename T>
T field(const json& object, std::string_view key, T fallback, std::string_view where) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError("field '" + std::string(key) + "' in " + std::string(where) +
                     " has the wrong type");
  }
}

template <typename T>
T required(const json& object, std::string_view key, std::string_view where) {
  if (!object.contains(key)) {
    throw ParseError("missing field '" + std::string(key) + "' in " + std::string(where));
  }
  return field<T>(object, key, T{}, where);
}

LoadModelParams parse_load_model(const json& j) {
  allow_keys(j, "load_model", {"nu", "p_packet_bytes", "zeta_sync_bytes", "sigma"});
  LoadModelParams p;
  p.nu = field(j, "nu", p.nu, "load_model");
  p.p_packet = field(j, "p_packet_bytes", p.p_packet * kBytesPerKB, "load_model") / kBytesPerKB;
  p.zeta_sync = field(j, "zeta_sync_bytes", p.zeta_sync * kBytesPerKB, "load_model") / kBytesPerKB;
  if (j.contains("sigma")) {
    const auto sigma = field<std::vector<double>>(j, "sigma", {}, "load_model");
    if (sigma.size() != 3) throw ParseError("load_model.sigma needs exactly three weights");
    p.sigma = {sigma[0], sigma[1], sigma[2]};
  }
  p.validate();
  return p;
}

PlannerParams parse_planner(const json& j) {
  allow_keys(j, "planner", {"gamma", "t0", "k_max", "mode"});
  PlannerParams p;
  p.gamma = field(j, "gamma", p.gamma, "planner");
  p.t0 = field(j, "t0", p.t0, "planner");
  p.k_max = field(j, "k_max", p.k_max, "planner");
  const auto mode = field<std::string>(j, "mode", "sa", "planner");
  const auto parsed = parse_search_mode(mode);
  if (!parsed) throw ParseError("planner.mode must be 'sa' or 'exhaustive', not '" + mode + "'");
  p.mode = *parsed;
  p.validate();
  return p;
}

RebalanceParams parse_rebalance(const json& j) {
  allow_keys(j, "rebalance", {"max_rounds", "damping", "oscillation_guard", "zero_load"});
  RebalanceParams p;
  p.max_rounds = field(j, "max_rounds", p.max_rounds, "rebalance");
  p.damping = field(j, "damping", p.damping, "rebalance");
  p.oscillation_guard = field(j, "oscillation_guard", p.oscillation_guard, "rebalance");
  const auto zero = field<std::string>(j, "zero_load", "strict", "rebalance");
  if (zero == "strict") {
    p.zero_policy = ZeroLoadPolicy::strict;
  } else if (zero == "epsilon") {
    p.zero_policy = ZeroLoadPolicy::epsilon_floor;
  } else {
    throw ParseError("rebalance.zero_load must be 'strict' or 'epsilon'");
  }
  p.validate();
  return p;
}

TraceParams parse_trace(const json& j, bool& rates_from_state) {
  allow_keys(j, "trace", {"kind", "rates", "mean", "band", "step", "spike_probability",
                          "spike_duration", "spike_factor", "spike_width"});
  TraceParams p;
  const auto kind = field<std::string>(j, "kind", "constant", "trace");
  const auto parsed = parse_trace_kind(kind);
  if (!parsed) throw ParseError("unknown trace kind '" + kind + "'");
  p.kind = *parsed;
  rates_from_state = !j.contains("rates");
  p.rates = field<std::vector<double>>(j, "rates", {}, "trace");
  p.mean = field(j, "mean", p.mean, "trace");
  p.band = field(j, "band", p.band, "trace");
  p.step = field(j, "step", p.step, "trace");
  p.spike_probability = field(j, "spike_probability", p.spike_probability, "trace");
  p.spike_duration = field(j, "spike_duration", p.spike_duration, "trace");
  p.spike_factor = field(j, "spike_factor", p.spike_factor, "trace");
  p.spike_width = field(j, "spike_width", p.spike_width, "trace");
  p.validate();
  return p;
}

RandomNetworkSpec parse_random(const json& j) {
  allow_keys(j, "topology.random", {"switches", "controllers", "extra_links", "capacity",
                                    "mean_flow", "flow_spread"});
  RandomNetworkSpec s;
  s.switches = field(j, "switches", s.switches, "topology.random");
  s.controllers = field(j, "controllers", s.controllers, "topology.random");
  s.extra_links = field(j, "extra_links", s.extra_links, "topology.random");
  s.capacity = field(j, "capacity", s.capacity, "topology.random");
  s.mean_flow = field(j, "mean_flow", s.mean_flow, "topology.random");
  s.flow_spread = field(j, "flow_spread", s.flow_spread, "topology.random");
  return s;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scenario JSON: ") + e.what());
  }
  allow_keys(doc, "scenario",
             {"name", "topology", "controllers", "switches", "mastership", "load_mode",
              "load_model", "planner", "rebalance", "rounds_per_step", "strategies", "trace",
              "steps", "seed", "output_dir"});

  ScenarioConfig config;
  config.base_dir = base_dir;
  config.name = field<std::string>(doc, "name", "scenario", "scenario");

  if (!doc.contains("seed")) throw ParseError("scenario must set an explicit 'seed'");
  config.seed = field<std::uint64_t>(doc, "seed", 0, "scenario");

  const auto topo = doc.value("topology", json::object());
  allow_keys(topo, "topology", {"builtin", "file", "random"});
  config.topology.builtin = field<std::string>(topo, "builtin", "", "topology");
  config.topology.file = field<std::string>(topo, "file", "", "topology");
  if (topo.contains("random")) config.topology.random = parse_random(topo["random"]);
  const int sources = !config.topology.builtin.empty() + !config.topology.file.empty() +
                      config.topology.random.has_value();
  if (sources != 1) {
    throw ParseError("topology must name exactly one of 'builtin', 'file' or 'random'");
  }

  if (doc.contains("controllers")) {
    if (!doc["controllers"].is_array()) throw ParseError("'controllers' must be an array");
    for (const auto& c : doc["controllers"]) {
      allow_keys(c, "controller", {"id", "node", "capacity"});
      ControllerRecord record;
      record.node = required<std::string>(c, "node", "controller");
      record.id = field<std::string>(c, "id", record.node, "controller");
      record.capacity = field(c, "capacity", kDefaultCapacity, "controller");
      config.controllers.push_back(record);
    }
  }

  bool any_master = false;
  if (doc.contains("switches")) {
    const auto& sw = doc["switches"];
    if (sw.is_object()) {
      allow_keys(sw, "switches", {"all_nodes", "flow_rate"});
      config.switches_on_all_nodes = field(sw, "all_nodes", false, "switches");
      if (!config.switches_on_all_nodes) throw ParseError("switches object requires all_nodes: true");
      config.default_flow_rate = field(sw, "flow_rate", kDefaultMeanFlow, "switches");
    } else if (sw.is_array()) {
      for (const auto& s : sw) {
        allow_keys(s, "switch", {"id", "node", "flow_rate", "master"});
        SwitchRecord record;
        record.node = required<std::string>(s, "node", "switch");
        record.id = field<std::string>(s, "id", record.node, "switch");
        record.flow_rate = field(s, "flow_rate", kDefaultMeanFlow, "switch");
        if (s.contains("master")) {
          any_master = true;
          config.mastership[record.id] = field<std::string>(s, "master", "", "switch");
        }
        config.switches.push_back(record);
      }
    } else {
      throw ParseError("'switches' must be an array or an object");
    }
  }
  const auto mastership = field<std::string>(doc, "mastership", any_master ? "explicit" : "nearest",
                                             "scenario");
  if (mastership == "nearest") {
    config.nearest_mastership = true;
  } else if (mastership != "explicit") {
    throw ParseError("mastership must be 'explicit' or 'nearest'");
  }
  if (!config.topology.random) {
    if (config.controllers.empty()) throw ParseError("scenario declares no controllers");
    if (config.switches.empty() && !config.switches_on_all_nodes) {
      throw ParseError("scenario declares no switches");
    }
  }

  const auto mode = field<std::string>(doc, "load_mode", "full", "scenario");
  const auto parsed_mode = parse_load_mode(mode);
  if (!parsed_mode) throw ParseError("load_mode must be 'full' or 'simplified', not '" + mode + "'");
  config.step.mode = *parsed_mode;
  if (doc.contains("load_model")) config.step.load = parse_load_model(doc["load_model"]);
  if (doc.contains("planner")) config.step.planner = parse_planner(doc["planner"]);
  config.step.planner.seed = config.seed;
  if (doc.contains("rebalance")) config.rebalance = parse_rebalance(doc["rebalance"]);
  config.step.rebalance = config.rebalance;
  config.step.rebalance.max_rounds = field(doc, "rounds_per_step", 1, "scenario");
  config.step.rebalance.validate();

  const auto names = field<std::vector<std::string>>(doc, "strategies", {"EASM"}, "scenario");
  for (const auto& name : names) {
    const auto kind = parse_strategy(name);
    if (!kind) throw ParseError("unknown strategy '" + name + "'");
    config.strategies.push_back(*kind);
  }
  if (doc.contains("trace")) config.trace = parse_trace(doc["trace"], config.trace_rates_from_state);
  else config.trace.kind = TraceKind::constant;
  config.steps = field<std::size_t>(doc, "steps", 1, "scenario");
  if (config.steps < 1) throw ParseError("steps must be at least 1");
  config.output_dir = field<std::string>(doc, "output_dir", "out", "scenario");
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.parent_path());
}

NetworkState build_state(const ScenarioConfig& config) {
  if (config.topology.random) return random_network(*config.topology.random, config.seed);

  std::shared_ptr<const Topology> topology;
  if (!config.topology.builtin.empty()) {
    auto builtin = builtin_topology(config.topology.builtin);
    if (!builtin) throw ParseError("unknown builtin topology '" + config.topology.builtin + "'");
    topology = std::make_shared<const Topology>(std::move(*builtin));
  } else {
    auto path = config.topology.file;
    if (path.is_relative()) path = config.base_dir / path;
    if (!std::filesystem::exists(path)) {
      throw ParseError("topology file not found: '" + path.string() + "'");
    }
    topology = std::make_shared<const Topology>(load_graphml(path));
  }

  auto switches = config.switches;
  if (config.switches_on_all_nodes) {
    for (const auto& node : topology->nodes()) {
      switches.push_back({node, node, config.default_flow_rate});
    }
  }
  if (config.nearest_mastership) {
    std::vector<std::string> switch_nodes;
    std::vector<std::string> controller_nodes;
    for (const auto& s : switches) switch_nodes.push_back(s.node);
    for (const auto& c : config.controllers) controller_nodes.push_back(c.node);
    auto master = nearest_mastership(*topology, switch_nodes, controller_nodes);
    return NetworkState::create(std::move(topology), config.controllers, std::move(switches),
                                std::move(master));
  }
  return NetworkState::create(std::move(topology), config.controllers, std::move(switches),
                              config.mastership);
}

TrafficTrace build_trace(const ScenarioConfig& config, const NetworkState& state) {
  auto params = config.trace;
  if (params.kind == TraceKind::constant && config.trace_rates_from_state) {
    params.rates.assign(state.flow_rates().begin(), state.flow_rates().end());
  }
  return generate_trace(params, state.switch_count(), config.steps,
                        derive_seed(config.seed, 0x7472616365ULL));
}

}  // namespace easm
