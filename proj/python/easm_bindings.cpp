#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "easm/detection.hpp"
#include "easm/error.hpp"
#include "easm/executor.hpp"
#include "easm/load_model.hpp"
#include "easm/planner.hpp"
#include "easm/scenario.hpp"
#include "easm/sim.hpp"
#include "easm/state.hpp"
#include "easm/strategies.hpp"
#include "easm/topology.hpp"

namespace py = pybind11;
using namespace easm;

namespace {

std::vector<std::vector<double>> rows(const LoadMatrix& m) {
  std::vector<std::vector<double>> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out[i].push_back(m(i, j));
  }
  return out;
}

std::vector<std::vector<int>> rows(const HopMatrix& m) {
  std::vector<std::vector<int>> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out[i].push_back(m(i, j));
  }
  return out;
}

std::string metrics_csv(const NetworkState& state, const std::vector<MetricsRecord>& records) {
  std::ostringstream out;
  write_metrics_csv(out, state, records);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Efficiency-aware switch migration for multi-controller SDN";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<PlannerError>(m, "PlannerError", base.ptr());
  py::register_exception<DegenerateLoadError>(m, "DegenerateLoadError", base.ptr());

  py::enum_<LoadMode>(m, "LoadMode")
      .value("full", LoadMode::full)
      .value("simplified", LoadMode::simplified);
  py::enum_<SearchMode>(m, "SearchMode")
      .value("sa", SearchMode::sa)
      .value("exhaustive", SearchMode::exhaustive);
  py::enum_<ZeroLoadPolicy>(m, "ZeroLoadPolicy")
      .value("strict", ZeroLoadPolicy::strict)
      .value("epsilon_floor", ZeroLoadPolicy::epsilon_floor);
  py::enum_<StrategyKind>(m, "Strategy")
      .value("NSM", StrategyKind::nsm)
      .value("CSM", StrategyKind::csm)
      .value("MUSM", StrategyKind::musm)
      .value("EASM", StrategyKind::easm);
  py::enum_<TraceKind>(m, "TraceKind")
      .value("constant", TraceKind::constant)
      .value("uniform_walk", TraceKind::uniform_walk)
      .value("spike", TraceKind::spike);

  py::class_<Topology, std::shared_ptr<Topology>>(m, "Topology")
      .def(py::init([](std::vector<std::string> nodes,
                       std::vector<std::pair<std::string, std::string>> links, std::string name) {
             return std::make_shared<Topology>(std::move(nodes), links, std::vector<std::string>{},
                                               std::move(name));
           }),
           py::arg("nodes"), py::arg("links"), py::arg("name") = "")
      .def_property_readonly("nodes", &Topology::nodes)
      .def_property_readonly("name", &Topology::name)
      .def_property_readonly("links",
                             [](const Topology& t) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const auto& l : t.links()) out.emplace_back(t.nodes()[l.a], t.nodes()[l.b]);
                               return out;
                             })
      .def("node_count", &Topology::node_count)
      .def("link_count", &Topology::link_count)
      .def("hops", py::overload_cast<std::string_view, std::string_view>(&Topology::hops, py::const_))
      .def("hop_matrix", [](const Topology& t) { return rows(t.hop_matrix()); })
      .def("diameter", &Topology::diameter)
      .def("label", &Topology::label)
      .def("to_graphml", [](const Topology& t) { return write_graphml(t); });

  m.def("builtin_os3e", [] { return std::make_shared<Topology>(builtin_os3e()); });
  m.def("load_graphml", [](const std::filesystem::path& p) { return std::make_shared<Topology>(load_graphml(p)); });
  m.def("parse_graphml", [](const std::string& text) { return std::make_shared<Topology>(parse_graphml(text)); });

  py::class_<ControllerRecord>(m, "Controller")
      .def(py::init([](std::string id, std::string node, double capacity) {
             return ControllerRecord{std::move(id), std::move(node), capacity};
           }),
           py::arg("id"), py::arg("node"), py::arg("capacity") = kDefaultCapacity)
      .def_readwrite("id", &ControllerRecord::id)
      .def_readwrite("node", &ControllerRecord::node)
      .def_readwrite("capacity", &ControllerRecord::capacity);

  py::class_<SwitchRecord>(m, "Switch")
      .def(py::init([](std::string id, std::string node, double flow_rate) {
             return SwitchRecord{std::move(id), std::move(node), flow_rate};
           }),
           py::arg("id"), py::arg("node"), py::arg("flow_rate") = 0.0)
      .def_readwrite("id", &SwitchRecord::id)
      .def_readwrite("node", &SwitchRecord::node)
      .def_readwrite("flow_rate", &SwitchRecord::flow_rate);

  py::class_<NetworkState>(m, "NetworkState")
      .def_static("create",
                  [](std::shared_ptr<Topology> topology, std::vector<ControllerRecord> controllers,
                     std::vector<SwitchRecord> switches, const Mastership& mastership) {
                    return NetworkState::create(std::move(topology), std::move(controllers),
                                                std::move(switches), mastership);
                  },
                  py::arg("topology"), py::arg("controllers"), py::arg("switches"),
                  py::arg("mastership"))
      .def_property_readonly("controller_count", &NetworkState::controller_count)
      .def_property_readonly("switch_count", &NetworkState::switch_count)
      .def_property_readonly("controller_ids",
                             [](const NetworkState& s) {
                               std::vector<std::string> out;
                               for (const auto& c : s.controllers()) out.push_back(c.id);
                               return out;
                             })
      .def_property_readonly("flow_rates",
                             [](const NetworkState& s) {
                               return std::vector<double>(s.flow_rates().begin(), s.flow_rates().end());
                             })
      .def("mastership", &NetworkState::mastership)
      .def("switches_of", py::overload_cast<std::string_view>(&NetworkState::switches_of, py::const_))
      .def("domain_flow", [](const NetworkState& s, std::string_view c) {
        return s.domain_flow(s.controller_index(c));
      })
      .def("reassign", py::overload_cast<std::string_view, std::string_view>(&NetworkState::reassign,
                                                                              py::const_))
      .def("with_flow_rates", &NetworkState::with_flow_rates)
      .def("check_invariants", &NetworkState::check_invariants)
      .def("domain_size_warnings", &NetworkState::domain_size_warnings)
      .def("__eq__", [](const NetworkState& a, const NetworkState& b) { return a == b; });

  py::class_<LoadModelParams>(m, "LoadModelParams")
      .def(py::init<>())
      .def_readwrite("nu", &LoadModelParams::nu)
      .def_readwrite("p_packet", &LoadModelParams::p_packet)
      .def_readwrite("zeta_sync", &LoadModelParams::zeta_sync)
      .def_readwrite("sigma", &LoadModelParams::sigma)
      .def("validate", &LoadModelParams::validate);

  py::class_<PlannerParams>(m, "PlannerParams")
      .def(py::init<>())
      .def_readwrite("gamma", &PlannerParams::gamma)
      .def_readwrite("t0", &PlannerParams::t0)
      .def_readwrite("k_max", &PlannerParams::k_max)
      .def_readwrite("seed", &PlannerParams::seed)
      .def_readwrite("mode", &PlannerParams::mode);

  py::class_<RebalanceParams>(m, "RebalanceParams")
      .def(py::init<>())
      .def_readwrite("max_rounds", &RebalanceParams::max_rounds)
      .def_readwrite("damping", &RebalanceParams::damping)
      .def_readwrite("oscillation_guard", &RebalanceParams::oscillation_guard)
      .def_readwrite("require_improvement", &RebalanceParams::require_improvement)
      .def_readwrite("zero_policy", &RebalanceParams::zero_policy);

  py::class_<StrategyConfig>(m, "StrategyConfig")
      .def(py::init<>())
      .def_readwrite("load", &StrategyConfig::load)
      .def_readwrite("mode", &StrategyConfig::mode)
      .def_readwrite("planner", &StrategyConfig::planner)
      .def_readwrite("rebalance", &StrategyConfig::rebalance);

  m.def("controller_loads", &controller_loads, py::arg("state"),
        py::arg("params") = LoadModelParams{}, py::arg("mode") = LoadMode::full);

  py::class_<DetectionResult>(m, "DetectionResult")
      .def_readonly("loads", &DetectionResult::loads)
      .def_readonly("threshold", &DetectionResult::threshold)
      .def_property_readonly("matrix", [](const DetectionResult& d) { return rows(d.matrix); })
      .def_property_readonly("triggers",
                             [](const DetectionResult& d) {
                               std::vector<std::tuple<std::size_t, std::size_t, double>> out;
                               for (const auto& t : d.triggers) out.emplace_back(t.m, t.n, t.delta);
                               return out;
                             })
      .def("imbalanced", &DetectionResult::imbalanced);

  m.def(
      "detect",
      [](const std::vector<double>& loads, std::optional<double> fixed_threshold,
         ZeroLoadPolicy policy) {
        return detect(loads, {.zero_policy = policy, .fixed_threshold = fixed_threshold});
      },
      py::arg("loads"), py::arg("fixed_threshold") = py::none(),
      py::arg("zero_policy") = ZeroLoadPolicy::strict);

  py::class_<MigrationTriplet>(m, "MigrationTriplet")
      .def_readonly("emigration", &MigrationTriplet::emigration)
      .def_readonly("switch", &MigrationTriplet::sw)
      .def_readonly("immigration", &MigrationTriplet::immigration)
      .def_readonly("cost", &MigrationTriplet::cost)
      .def_readonly("efficiency", &MigrationTriplet::efficiency)
      .def_readonly("simplified_cost", &MigrationTriplet::simplified_cost);

  m.def(
      "plan",
      [](const NetworkState& state, LoadMode mode, const PlannerParams& planner,
         const LoadModelParams& load) {
        const auto detection = detect(state, load, mode);
        return plan(state, load, mode, planner, detection).triplets;
      },
      py::arg("state"), py::arg("mode") = LoadMode::full, py::arg("planner") = PlannerParams{},
      py::arg("load") = LoadModelParams{});

  py::class_<ExecutedTriplet>(m, "ExecutedTriplet")
      .def_readonly("triplet", &ExecutedTriplet::triplet)
      .def_readonly("loads_before", &ExecutedTriplet::loads_before)
      .def_readonly("loads_after", &ExecutedTriplet::loads_after)
      .def_readonly("round", &ExecutedTriplet::round);

  py::class_<RebalanceReport>(m, "RebalanceReport")
      .def_readonly("rounds", &RebalanceReport::rounds)
      .def_readonly("executed", &RebalanceReport::executed)
      .def_readonly("total_cost", &RebalanceReport::total_cost)
      .def_readonly("final_lambda", &RebalanceReport::final_lambda)
      .def_readonly("balanced", &RebalanceReport::balanced)
      .def_readonly("stalled", &RebalanceReport::stalled)
      .def_readonly("variance_trace", &RebalanceReport::variance_trace)
      .def_readonly("log", &RebalanceReport::log)
      .def_readonly("final_state", &RebalanceReport::final_state);

  m.def("rebalance", &rebalance, py::arg("state"), py::arg("load") = LoadModelParams{},
        py::arg("mode") = LoadMode::full, py::arg("planner") = PlannerParams{},
        py::arg("params") = RebalanceParams{});

  m.def("lbr", [](const std::vector<double>& loads) { return lbr(loads); }, py::arg("loads"));
  m.def("load_variance", [](const std::vector<double>& loads) { return load_variance(loads); });

  py::class_<StepReport>(m, "StepReport")
      .def_readonly("executed", &StepReport::executed)
      .def_readonly("rounds", &StepReport::rounds)
      .def_readonly("balanced", &StepReport::balanced)
      .def_readonly("warnings", &StepReport::warnings)
      .def("cost", &StepReport::cost)
      .def("simplified_cost", &StepReport::simplified_cost);

  m.def(
      "step",
      [](StrategyKind kind, const NetworkState& state, const StrategyConfig& config, std::uint64_t seed) {
        auto result = step(kind, state, config, seed);
        return py::make_tuple(std::move(result.state), std::move(result.report));
      },
      py::arg("strategy"), py::arg("state"), py::arg("config") = StrategyConfig{},
      py::arg("seed") = 0);

  py::class_<TraceParams>(m, "TraceParams")
      .def(py::init<>())
      .def_readwrite("kind", &TraceParams::kind)
      .def_readwrite("rates", &TraceParams::rates)
      .def_readwrite("mean", &TraceParams::mean)
      .def_readwrite("band", &TraceParams::band)
      .def_readwrite("step", &TraceParams::step)
      .def_readwrite("spike_probability", &TraceParams::spike_probability)
      .def_readwrite("spike_duration", &TraceParams::spike_duration)
      .def_readwrite("spike_factor", &TraceParams::spike_factor)
      .def_readwrite("spike_width", &TraceParams::spike_width);

  py::class_<TrafficTrace>(m, "TrafficTrace")
      .def_readonly("rates", &TrafficTrace::rates)
      .def_readonly("seed", &TrafficTrace::seed)
      .def("steps", &TrafficTrace::steps);

  m.def("generate_trace", &generate_trace, py::arg("params"), py::arg("switches"),
        py::arg("steps"), py::arg("seed"));

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def_readonly("step", &MetricsRecord::step)
      .def_readonly("loads", &MetricsRecord::loads)
      .def_readonly("lbr", &MetricsRecord::lbr)
      .def_readonly("migration_cost", &MetricsRecord::migration_cost)
      .def_readonly("cumulative_cost", &MetricsRecord::cumulative_cost)
      .def_readonly("migrations", &MetricsRecord::migrations)
      .def_readonly("rounds", &MetricsRecord::rounds)
      .def_readonly("balanced", &MetricsRecord::balanced)
      .def_readonly("response_proxy", &MetricsRecord::response_proxy)
      .def_readonly("throughput_proxy", &MetricsRecord::throughput_proxy)
      .def_readonly("error", &MetricsRecord::error);

  m.def(
      "run",
      [](const NetworkState& state, StrategyKind kind, const TrafficTrace& trace,
         const StrategyConfig& config, std::uint64_t seed) {
        return run(state, kind, trace, config, seed, {.check_invariants = true});
      },
      py::arg("state"), py::arg("strategy"), py::arg("trace"), py::arg("config") = StrategyConfig{},
      py::arg("seed") = 0);
  m.def("metrics_csv", &metrics_csv, py::arg("state"), py::arg("records"));

  py::class_<ScenarioConfig>(m, "Scenario")
      .def_readonly("name", &ScenarioConfig::name)
      .def_readonly("seed", &ScenarioConfig::seed)
      .def_readonly("steps", &ScenarioConfig::steps)
      .def_readonly("strategies", &ScenarioConfig::strategies)
      .def_readonly("config", &ScenarioConfig::step)
      .def_readonly("rebalance", &ScenarioConfig::rebalance)
      .def("build_state", [](const ScenarioConfig& c) { return build_state(c); })
      .def("build_trace", [](const ScenarioConfig& c, const NetworkState& s) { return build_trace(c, s); });

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("base_dir") = ".");
}
