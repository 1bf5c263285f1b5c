#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "easm/matrix.hpp"
#include "easm/topology.hpp"

namespace easm {

// Per-controller processing budget when a scenario does not give one (KB/s).
inline constexpr double kDefaultCapacity = 5000.0;

// Soft bounds on domain size; violations are reported, never rejected.
inline constexpr std::size_t kMinDomainSize = 5;
inline constexpr std::size_t kMaxDomainSize = 20;

struct ControllerRecord {
  std::string id;
  std::string node;
  double capacity = kDefaultCapacity;  // KB/s
};

struct SwitchRecord {
  std::string id;
  std::string node;
  double flow_rate = 0.0;  // KB/s
};

// Switch id -> controller id.
using Mastership = std::map<std::string, std::string, std::less<>>;

// Immutable assignment of switches to master controllers.
//
// Every switch has exactly one master, so the per-controller domains always
// partition the switch set. Mutations return new values. Hop distances between
// switches and controllers are cached once per topology/placement and shared
// between copies.
class NetworkState {
 public:
  static NetworkState create(std::shared_ptr<const Topology> topology,
                             std::vector<ControllerRecord> controllers,
                             std::vector<SwitchRecord> switches, const Mastership& mastership);

  // Same as create() but with the mastership given as switch index -> controller index.
  static NetworkState create(std::shared_ptr<const Topology> topology,
                             std::vector<ControllerRecord> controllers,
                             std::vector<SwitchRecord> switches, std::vector<std::size_t> master);

  std::size_t controller_count() const { return shared_->controllers.size(); }
  std::size_t switch_count() const { return shared_->switch_nodes.size(); }

  const Topology& topology() const { return *shared_->topology; }
  std::shared_ptr<const Topology> topology_ptr() const { return shared_->topology; }
  const std::vector<ControllerRecord>& controllers() const { return shared_->controllers; }
  const ControllerRecord& controller(std::size_t c) const { return shared_->controllers.at(c); }
  const std::string& switch_id(std::size_t s) const { return shared_->switch_ids.at(s); }
  const std::string& switch_node(std::size_t s) const { return shared_->switch_nodes.at(s); }
  double capacity(std::size_t c) const { return shared_->controllers[c].capacity; }

  std::span<const double> flow_rates() const { return flow_rates_; }
  double flow_rate(std::size_t s) const { return flow_rates_.at(s); }

  std::size_t master(std::size_t s) const { return master_.at(s); }
  std::span<const std::size_t> masters() const { return master_; }

  // Γ(c): sorted switch indices mastered by c.
  std::span<const std::size_t> switches_of(std::size_t c) const { return domains_.at(c); }
  std::vector<std::string> switches_of(std::string_view controller_id) const;

  // J(s, c).
  bool connected(std::size_t s, std::size_t c) const { return master_.at(s) == c; }

  int hop_switch_controller(std::size_t s, std::size_t c) const {
    return shared_->switch_controller_hops[s * controller_count() + c];
  }
  int hop_controllers(std::size_t a, std::size_t b) const {
    return shared_->controller_hops(a, b);
  }

  std::size_t controller_index(std::string_view id) const;
  std::size_t switch_index(std::string_view id) const;

  // Σ α over Γ(c), the flow-sum view of load used by the capacity check.
  double domain_flow(std::size_t c) const;

  NetworkState reassign(std::size_t s, std::size_t new_controller) const;
  NetworkState reassign(std::string_view switch_id, std::string_view controller_id) const;

  // Replaces all flow rates. Traffic is exogenous, so capacity is not re-checked.
  NetworkState with_flow_rates(std::vector<double> rates) const;

  Mastership mastership() const;

  // Domains outside [kMinDomainSize, kMaxDomainSize].
  std::vector<std::string> domain_size_warnings() const;

  // Throws ValidationError if the domain sets are not the exact inverse of
  // the mastership vector.
  void check_invariants() const;

  friend bool operator==(const NetworkState& a, const NetworkState& b) {
    return a.shared_ == b.shared_ && a.master_ == b.master_ && a.flow_rates_ == b.flow_rates_;
  }

 private:
  struct Shared {
    std::shared_ptr<const Topology> topology;
    std::vector<ControllerRecord> controllers;
    std::vector<std::string> switch_ids;
    std::vector<std::string> switch_nodes;
    std::vector<int> switch_controller_hops;
    HopMatrix controller_hops;
  };

  NetworkState() = default;
  void rebuild_domains();
  void require_capacity_headroom() const;

  std::shared_ptr<const Shared> shared_;
  std::vector<double> flow_rates_;
  std::vector<std::size_t> master_;
  std::vector<std::vector<std::size_t>> domains_;
};

}  // namespace easm
