#include "easm/load_model.hpp"

#include <cmath>
#include <sstream>

#include "easm/error.hpp"

namespace easm {

namespace {

constexpr double kWeightTolerance = 1e-9;

double hop_sum(const NetworkState& state, std::size_t c) {
  double sum = 0.0;
  for (const auto s : state.switches_of(c)) sum += state.hop_switch_controller(s, c);
  return sum;
}

double peer_hop_sum(const NetworkState& state, std::size_t c) {
  double sum = 0.0;
  for (std::size_t n = 0; n < state.controller_count(); ++n) {
    if (n != c) sum += state.hop_controllers(c, n);
  }
  return sum;
}

}  // namespace

std::string_view to_string(LoadMode mode) {
  return mode == LoadMode::full ? "full" : "simplified";
}

std::optional<LoadMode> parse_load_mode(std::string_view text) {
  if (text == "full") return LoadMode::full;
  if (text == "simplified") return LoadMode::simplified;
  return std::nullopt;
}

void LoadModelParams::validate() const {
  if (nu < 0.0 || p_packet < 0.0 || zeta_sync < 0.0) {
    throw ParameterError("load model parameters must be non-negative");
  }
  double sum = 0.0;
  for (const auto w : sigma) {
    if (w < 0.0) throw ParameterError("load weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    std::ostringstream msg;
    msg << "load weights must sum to 1 (got " << sum << ")";
    throw ParameterError(msg.str());
  }
}

double data_interaction_overhead(const NetworkState& state, const LoadModelParams& params,
                                 std::size_t c) {
  return params.nu * hop_sum(state, c);
}

double packet_in_overhead(const NetworkState& state, const LoadModelParams& params,
                          std::size_t c) {
  return params.p_packet * hop_sum(state, c);
}

double flow_table_overhead(const NetworkState& state, std::size_t c) {
  const double peers = peer_hop_sum(state, c);
  double sum = 0.0;
  for (const auto s : state.switches_of(c)) {
    sum += state.flow_rate(s) * state.hop_switch_controller(s, c);
  }
  return sum * peers;
}

double routing_overhead(const NetworkState& state, const LoadModelParams& params,
                        std::size_t c) {
  return packet_in_overhead(state, params, c) + flow_table_overhead(state, c);
}

double state_sync_overhead(const NetworkState& state, const LoadModelParams& params,
                           std::size_t c) {
  return params.zeta_sync * peer_hop_sum(state, c);
}

LoadBreakdown controller_load(const NetworkState& state, const LoadModelParams& params,
                              std::size_t c) {
  params.validate();
  LoadBreakdown out;
  out.f_data = data_interaction_overhead(state, params, c);
  out.f_packet = packet_in_overhead(state, params, c);
  out.f_table = flow_table_overhead(state, c);
  out.f_routing = out.f_packet + out.f_table;
  out.f_state = state_sync_overhead(state, params, c);
  out.total = params.sigma[0] * out.f_data + params.sigma[1] * out.f_routing +
              params.sigma[2] * out.f_state;
  return out;
}

double simplified_load(const NetworkState& state, std::size_t c) { return state.domain_flow(c); }

double load(const NetworkState& state, const LoadModelParams& params, LoadMode mode,
            std::size_t c) {
  return mode == LoadMode::full ? controller_load(state, params, c).total
                                : simplified_load(state, c);
}

std::vector<double> controller_loads(const NetworkState& state, const LoadModelParams& params,
                                     LoadMode mode) {
  std::vector<double> out(state.controller_count());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = load(state, params, mode, c);
  return out;
}

double switch_load_share(const NetworkState& state, LoadMode mode, std::size_t s, std::size_t c) {
  const double rate = state.flow_rate(s);
  return mode == LoadMode::full ? rate * state.hop_switch_controller(s, c) : rate;
}

}  // namespace easm
