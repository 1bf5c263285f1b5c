#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "easm/state.hpp"
#include "easm/strategies.hpp"

namespace easm {

// Mean flow rate of synthetic traffic (KB/s).
inline constexpr double kDefaultMeanFlow = 200.0;

// Response proxy value for a controller at or beyond capacity.
inline constexpr double kSaturated = std::numeric_limits<double>::infinity();

// 1 − σ/L̄ clamped to [0, 1]; σ is the population standard deviation.
// Throws ParameterError for an empty vector, negative load or zero mean.
double lbr(std::span<const double> loads);

enum class TraceKind { constant, uniform_walk, spike };

std::string_view to_string(TraceKind kind);
std::optional<TraceKind> parse_trace_kind(std::string_view text);

struct TraceParams {
  TraceKind kind = TraceKind::uniform_walk;
  // constant: the per-switch rates. Otherwise unused.
  std::vector<double> rates;
  double mean = kDefaultMeanFlow;
  // Walk band is [mean·(1 − band), mean·(1 + band)].
  double band = 0.5;
  // Per-step walk increment is uniform in ±step·mean.
  double step = 0.05;
  // spike: chance per step that a burst starts, its length, multiplier and
  // how many switches it touches.
  double spike_probability = 0.05;
  int spike_duration = 5;
  double spike_factor = 3.0;
  std::size_t spike_width = 3;

  void validate() const;
};

struct TrafficTrace {
  TraceKind kind = TraceKind::constant;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> rates;  // [step][switch], KB/s

  std::size_t steps() const { return rates.size(); }
};

TrafficTrace generate_trace(const TraceParams& params, std::size_t switches, std::size_t steps,
                            std::uint64_t seed);

struct MetricsRecord {
  std::size_t step = 0;
  std::vector<double> loads;
  double lbr = 0.0;
  double migration_cost = 0.0;  // this step, KB/s
  double cumulative_cost = 0.0;
  std::size_t migrations = 0;
  int rounds = 0;
  bool balanced = true;
  std::vector<double> response_proxy;  // 1 / (Ω − L), or kSaturated
  double throughput_proxy = 0.0;        // Σ min(L, Ω)
  std::string error;

  double mean_response_proxy() const;
};

struct RunOptions {
  // Re-validate the partition invariant after every step.
  bool check_invariants = false;
};

std::vector<MetricsRecord> run(const NetworkState& initial, StrategyKind strategy,
                               const TrafficTrace& trace, const StrategyConfig& config,
                               std::uint64_t seed, const RunOptions& options = {});

struct RunSummary {
  std::string strategy;
  std::size_t steps = 0;
  double mean_lbr = 0.0;
  double final_lbr = 0.0;
  double total_cost = 0.0;
  std::size_t total_migrations = 0;
  int total_rounds = 0;
  double mean_throughput_proxy = 0.0;
  std::size_t errors = 0;
};

RunSummary summarize(std::string_view strategy, std::span<const MetricsRecord> records);

// CSV with a fixed column order; see README.
void write_metrics_csv(std::ostream& out, const NetworkState& state,
                       std::span<const MetricsRecord> records);
void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries);

// Random connected topology with a switch on every node, controllers on
// distinct random nodes and nearest-controller mastership.
struct RandomNetworkSpec {
  std::size_t switches = 30;
  std::size_t controllers = 5;
  // Links added on top of a random spanning tree.
  std::size_t extra_links = 15;
  double capacity = kDefaultCapacity;
  double mean_flow = kDefaultMeanFlow;
  // Initial rates uniform in mean·[1 − spread, 1 + spread].
  double flow_spread = 0.5;
};

NetworkState random_network(const RandomNetworkSpec& spec, std::uint64_t seed);

// Switch index -> controller index of the hop-closest controller (ties by index).
std::vector<std::size_t> nearest_mastership(const Topology& topology,
                                            std::span<const std::string> switch_nodes,
                                            std::span<const std::string> controller_nodes);

}  // namespace easm
