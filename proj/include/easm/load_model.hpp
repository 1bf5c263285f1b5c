#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "easm/state.hpp"

namespace easm {

// Scenario sizes are given in bytes; all load arithmetic is in KB and KB/s.
inline constexpr double kBytesPerKB = 1000.0;

enum class LoadMode {
  full,        // weighted data / routing / synchronization overheads
  simplified,  // sum of domain flow rates
};

std::string_view to_string(LoadMode mode);
std::optional<LoadMode> parse_load_mode(std::string_view text);

struct LoadModelParams {
  double nu = 15.0;                              // polling rate per switch, KB/s
  double p_packet = 30.0 / kBytesPerKB;          // Packet-in size, KB
  double zeta_sync = 18.0 / kBytesPerKB;         // sync packet size, KB
  std::array<double, 3> sigma{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  // Throws ParameterError on negative fields or weights not summing to 1.
  void validate() const;
};

struct LoadBreakdown {
  double f_data = 0.0;
  double f_packet = 0.0;
  double f_table = 0.0;
  double f_routing = 0.0;  // f_packet + f_table
  double f_state = 0.0;
  double total = 0.0;      // σ1·f_data + σ2·f_routing + σ3·f_state
};

// ν · Σ_{s∈Γ(c)} h(s,c)
double data_interaction_overhead(const NetworkState& state, const LoadModelParams& params,
                                 std::size_t c);

// P_packet · Σ_{s∈Γ(c)} h(s,c)
double packet_in_overhead(const NetworkState& state, const LoadModelParams& params,
                          std::size_t c);

// Σ_{s∈Γ(c)} Σ_{n≠c} α_s · h(c,n) · h(s,c), with every controller pair peered.
double flow_table_overhead(const NetworkState& state, std::size_t c);

double routing_overhead(const NetworkState& state, const LoadModelParams& params,
                        std::size_t c);

// ζ_sync · Σ_{n≠c} h(c,n)
double state_sync_overhead(const NetworkState& state, const LoadModelParams& params,
                           std::size_t c);

LoadBreakdown controller_load(const NetworkState& state, const LoadModelParams& params,
                              std::size_t c);

// Σ_{s∈Γ(c)} α_s
double simplified_load(const NetworkState& state, std::size_t c);

double load(const NetworkState& state, const LoadModelParams& params, LoadMode mode,
            std::size_t c);
std::vector<double> controller_loads(const NetworkState& state, const LoadModelParams& params,
                                     LoadMode mode);

// Load a switch is assumed to bring to controller c when it is mastered there:
// α·h(s,c) under the full model, α under the flow-sum model.
double switch_load_share(const NetworkState& state, LoadMode mode, std::size_t s, std::size_t c);

}  // namespace easm
