#include "easm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "easm/error.hpp"
#include "easm/load_model.hpp"
#include "easm/random.hpp"

namespace easm {

double lbr(std::span<const double> loads) {
  if (loads.empty()) throw ParameterError("LBR of an empty load vector");
  for (const auto l : loads) {
    if (l < 0.0) throw ParameterError("LBR requires non-negative loads");
  }
  const double mean = std::accumulate(loads.begin(), loads.end(), 0.0) / loads.size();
  if (!(mean > 0.0)) throw ParameterError("LBR is undefined for a zero mean load");
  double sum = 0.0;
  for (const auto l : loads) sum += (l - mean) * (l - mean);
  const double deviation = std::sqrt(sum / loads.size());
  return std::clamp(1.0 - deviation / mean, 0.0, 1.0);
}

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::constant: return "constant";
    case TraceKind::uniform_walk: return "uniform_walk";
    case TraceKind::spike: return "spike";
  }
  return "?";
}

std::optional<TraceKind> parse_trace_kind(std::string_view text) {
  if (text == "constant") return TraceKind::constant;
  if (text == "uniform_walk" || text == "uniform-walk") return TraceKind::uniform_walk;
  if (text == "spike") return TraceKind::spike;
  return std::nullopt;
}

void TraceParams::validate() const {
  if (!(mean > 0.0)) throw ParameterError("trace mean must be positive");
  if (!(band >= 0.0 && band < 1.0)) throw ParameterError("trace band must lie in [0, 1)");
  if (!(step >= 0.0)) throw ParameterError("trace step must be non-negative");
  if (!(spike_probability >= 0.0 && spike_probability <= 1.0)) {
    throw ParameterError("spike probability must lie in [0, 1]");
  }
  if (spike_duration < 1) throw ParameterError("spike duration must be at least one step");
  if (!(spike_factor >= 1.0)) throw ParameterError("spike factor must be at least 1");
  for (const auto r : rates) {
    if (!(r >= 0.0)) throw ParameterError("constant trace rates must be non-negative");
  }
}

TrafficTrace generate_trace(const TraceParams& params, std::size_t switches, std::size_t steps,
                            std::uint64_t seed) {
  params.validate();
  if (steps < 1) throw ParameterError("a trace needs at least one step");

  TrafficTrace trace{params.kind, seed, {}};
  trace.rates.reserve(steps);
  if (params.kind == TraceKind::constant) {
    if (params.rates.size() != switches) {
      throw ParameterError("constant trace needs one rate per switch");
    }
    trace.rates.assign(steps, params.rates);
    return trace;
  }

  Rng rng(seed);
  const double lo = params.mean * (1.0 - params.band);
  const double hi = params.mean * (1.0 + params.band);
  std::vector<double> level(switches);
  for (auto& l : level) l = uniform_real(rng, lo, hi);

  // Spike bookkeeping: remaining steps of the active burst and its members.
  int burst_left = 0;
  std::vector<std::size_t> burst;

  for (std::size_t t = 0; t < steps; ++t) {
    if (t > 0) {
      for (auto& l : level) {
        l += uniform_real(rng, -params.step, params.step) * params.mean;
        // Reflect at the band edges.
        if (l < lo) l = std::min(hi, 2 * lo - l);
        if (l > hi) l = std::max(lo, 2 * hi - l);
      }
    }
    auto rates = level;
    if (params.kind == TraceKind::spike && switches > 0) {
      if (burst_left == 0 && uniform01(rng) < params.spike_probability) {
        burst_left = params.spike_duration;
        burst.clear();
        const auto width = std::min(params.spike_width, switches);
        // Contiguous block so that a burst tends to land in one domain.
        const auto first = uniform_index(rng, switches);
        for (std::size_t i = 0; i < width; ++i) burst.push_back((first + i) % switches);
      }
      if (burst_left > 0) {
        for (const auto s : burst) rates[s] *= params.spike_factor;
        --burst_left;
      }
    }
    trace.rates.push_back(std::move(rates));
  }
  return trace;
}

double MetricsRecord::mean_response_proxy() const {
  if (response_proxy.empty()) return 0.0;
  return std::accumulate(response_proxy.begin(), response_proxy.end(), 0.0) /
         response_proxy.size();
}

std::vector<MetricsRecord> run(const NetworkState& initial, StrategyKind strategy,
                               const TrafficTrace& trace, const StrategyConfig& config,
                               std::uint64_t seed, const RunOptions& options) {
  if (trace.steps() < 1) throw ParameterError("run needs a trace with at least one step");
  std::vector<MetricsRecord> records;
  records.reserve(trace.steps());
  NetworkState state = initial;
  double cumulative = 0.0;
  for (std::size_t t = 0; t < trace.steps(); ++t) {
    MetricsRecord record;
    record.step = t + 1;
    state = state.with_flow_rates(trace.rates[t]);
    try {
      auto result = step(strategy, state, config, derive_seed(seed, t));
      state = std::move(result.state);
      record.migration_cost = result.report.cost();
      record.migrations = result.report.executed.size();
      record.rounds = result.report.rounds;
      record.balanced = result.report.balanced;
    } catch (const Error& e) {
      record.error = e.what();
    }
    if (options.check_invariants) state.check_invariants();

    cumulative += record.migration_cost;
    record.cumulative_cost = cumulative;
    record.loads = controller_loads(state, config.load, config.mode);
    try {
      record.lbr = lbr(record.loads);
    } catch (const ParameterError& e) {
      if (record.error.empty()) record.error = e.what();
    }
    for (std::size_t c = 0; c < record.loads.size(); ++c) {
      const double headroom = state.capacity(c) - record.loads[c];
      record.response_proxy.push_back(headroom > 0.0 ? 1.0 / headroom : kSaturated);
      record.throughput_proxy += std::min(record.loads[c], state.capacity(c));
    }
    records.push_back(std::move(record));
  }
  return records;
}

RunSummary summarize(std::string_view strategy, std::span<const MetricsRecord> records) {
  RunSummary out;
  out.strategy = std::string(strategy);
  out.steps = records.size();
  if (records.empty()) return out;
  for (const auto& r : records) {
    out.mean_lbr += r.lbr;
    out.total_cost += r.migration_cost;
    out.total_migrations += r.migrations;
    out.total_rounds += r.rounds;
    out.mean_throughput_proxy += r.throughput_proxy;
    if (!r.error.empty()) ++out.errors;
  }
  out.mean_lbr /= records.size();
  out.mean_throughput_proxy /= records.size();
  out.final_lbr = records.back().lbr;
  return out;
}

void write_metrics_csv(std::ostream& out, const NetworkState& state,
                       std::span<const MetricsRecord> records) {
  out << "step,lbr,migration_cost,cumulative_cost,migrations,rounds,balanced,"
         "throughput_proxy,mean_response_proxy";
  for (const auto& c : state.controllers()) out << ",load_" << c.id;
  for (const auto& c : state.controllers()) out << ",response_proxy_" << c.id;
  out << ",error\n";
  out << std::setprecision(10);
  for (const auto& r : records) {
    out << r.step << ',' << r.lbr << ',' << r.migration_cost << ',' << r.cumulative_cost << ','
        << r.migrations << ',' << r.rounds << ',' << (r.balanced ? 1 : 0) << ','
        << r.throughput_proxy << ',' << r.mean_response_proxy();
    for (const auto l : r.loads) out << ',' << l;
    for (const auto p : r.response_proxy) out << ',' << p;
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << ',' << error << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries) {
  out << "strategy,steps,mean_lbr,final_lbr,total_cost,total_migrations,total_rounds,"
         "mean_throughput_proxy,errors\n";
  out << std::setprecision(10);
  for (const auto& s : summaries) {
    out << s.strategy << ',' << s.steps << ',' << s.mean_lbr << ',' << s.final_lbr << ','
        << s.total_cost << ',' << s.total_migrations << ',' << s.total_rounds << ','
        << s.mean_throughput_proxy << ',' << s.errors << '\n';
  }
}

std::vector<std::size_t> nearest_mastership(const Topology& topology,
                                            std::span<const std::string> switch_nodes,
                                            std::span<const std::string> controller_nodes) {
  if (controller_nodes.empty()) throw ValidationError("nearest mastership needs a controller");
  std::vector<std::size_t> controllers;
  for (const auto& node : controller_nodes) controllers.push_back(topology.index_of(node));
  std::vector<std::size_t> out;
  for (const auto& node : switch_nodes) {
    const auto s = topology.index_of(node);
    std::size_t best = 0;
    for (std::size_t c = 1; c < controllers.size(); ++c) {
      if (topology.hops(s, controllers[c]) < topology.hops(s, controllers[best])) best = c;
    }
    out.push_back(best);
  }
  return out;
}

NetworkState random_network(const RandomNetworkSpec& spec, std::uint64_t seed) {
  if (spec.switches < 1 || spec.controllers < 1 || spec.controllers > spec.switches) {
    throw ParameterError("random network needs 1 <= controllers <= switches");
  }
  if (!(spec.flow_spread >= 0.0 && spec.flow_spread < 1.0)) {
    throw ParameterError("flow spread must lie in [0, 1)");
  }
  Rng rng(seed);
  const auto n = spec.switches;
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    std::ostringstream id;
    id << 'n' << std::setw(3) << std::setfill('0') << i;
    nodes.push_back(id.str());
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = uniform_index(rng, v);
    edges.emplace(u, v);
  }
  const auto max_edges = n * (n - 1) / 2;
  const auto wanted = std::min(max_edges, edges.size() + spec.extra_links);
  while (edges.size() < wanted) {
    auto a = uniform_index(rng, n);
    auto b = uniform_index(rng, n);
    if (a == b) continue;
    edges.emplace(std::min(a, b), std::max(a, b));
  }
  std::vector<std::pair<std::string, std::string>> links;
  for (const auto& [a, b] : edges) links.emplace_back(nodes[a], nodes[b]);
  auto topology = std::make_shared<const Topology>(nodes, links);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);

  std::vector<ControllerRecord> controllers;
  std::vector<std::string> controller_nodes;
  for (std::size_t c = 0; c < spec.controllers; ++c) {
    const auto& node = nodes[order[c]];
    controllers.push_back({"c" + std::to_string(c + 1), node, spec.capacity});
    controller_nodes.push_back(node);
  }
  std::vector<SwitchRecord> switches;
  const double lo = spec.mean_flow * (1.0 - spec.flow_spread);
  const double hi = spec.mean_flow * (1.0 + spec.flow_spread);
  for (std::size_t s = 0; s < n; ++s) {
    switches.push_back({"s" + std::to_string(s + 1), nodes[s], uniform_real(rng, lo, hi)});
  }
  auto master = nearest_mastership(*topology, nodes, controller_nodes);
  return NetworkState::create(std::move(topology), std::move(controllers), std::move(switches),
                              std::move(master));
}

}  // namespace easm
