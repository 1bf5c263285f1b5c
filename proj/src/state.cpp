#include "easm/state.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "easm/error.hpp"

namespace easm {

NetworkState NetworkState::create(std::shared_ptr<const Topology> topology,
                                  std::vector<ControllerRecord> controllers,
                                  std::vector<SwitchRecord> switches,
                                  const Mastership& mastership) {
  std::map<std::string, std::size_t, std::less<>> controller_ids;
  for (std::size_t c = 0; c < controllers.size(); ++c) {
    if (controllers[c].id.empty()) controllers[c].id = controllers[c].node;
    if (!controller_ids.emplace(controllers[c].id, c).second) {
      throw ValidationError("duplicate controller id '" + controllers[c].id + "'");
    }
  }
  std::vector<std::size_t> master(switches.size());
  std::set<std::string, std::less<>> known;
  for (std::size_t s = 0; s < switches.size(); ++s) {
    if (switches[s].id.empty()) switches[s].id = switches[s].node;
    known.insert(switches[s].id);
    const auto it = mastership.find(switches[s].id);
    if (it == mastership.end()) {
      throw ValidationError("switch '" + switches[s].id + "' has no master controller");
    }
    const auto c = controller_ids.find(it->second);
    if (c == controller_ids.end()) {
      throw ValidationError("switch '" + switches[s].id + "' is mastered by unknown controller '" +
                            it->second + "'");
    }
    master[s] = c->second;
  }
  for (const auto& [switch_id, controller_id] : mastership) {
    if (!known.contains(switch_id)) {
      throw ValidationError("mastership names unknown switch '" + switch_id + "'");
    }
  }
  return create(std::move(topology), std::move(controllers), std::move(switches),
                std::move(master));
}

NetworkState NetworkState::create(std::shared_ptr<const Topology> topology,
                                  std::vector<ControllerRecord> controllers,
                                  std::vector<SwitchRecord> switches,
                                  std::vector<std::size_t> master) {
  if (!topology) throw ValidationError("network state requires a topology");
  if (controllers.empty()) throw ValidationError("network state requires at least one controller");
  if (master.size() != switches.size()) {
    throw ValidationError("mastership must assign every switch exactly once");
  }

  auto shared = std::make_shared<Shared>();
  std::vector<std::size_t> controller_nodes;
  std::set<std::string, std::less<>> ids;
  for (auto& controller : controllers) {
    if (controller.id.empty()) controller.id = controller.node;
    if (!ids.insert(controller.id).second) {
      throw ValidationError("duplicate controller id '" + controller.id + "'");
    }
    if (!(controller.capacity > 0.0)) {
      throw ValidationError("controller '" + controller.id + "' needs a positive capacity");
    }
    controller_nodes.push_back(topology->index_of(controller.node));
  }

  NetworkState state;
  ids.clear();
  std::vector<std::size_t> switch_nodes;
  for (auto& sw : switches) {
    if (sw.id.empty()) sw.id = sw.node;
    if (!ids.insert(sw.id).second) throw ValidationError("duplicate switch id '" + sw.id + "'");
    if (!(sw.flow_rate >= 0.0)) {
      throw ValidationError("switch '" + sw.id + "' has a negative flow rate");
    }
    switch_nodes.push_back(topology->index_of(sw.node));
    shared->switch_ids.push_back(sw.id);
    shared->switch_nodes.push_back(sw.node);
    state.flow_rates_.push_back(sw.flow_rate);
  }
  for (const auto c : master) {
    if (c >= controllers.size()) throw ValidationError("mastership names unknown controller");
  }

  const auto m = controllers.size();
  shared->switch_controller_hops.resize(switches.size() * m);
  for (std::size_t s = 0; s < switches.size(); ++s) {
    for (std::size_t c = 0; c < m; ++c) {
      shared->switch_controller_hops[s * m + c] = topology->hops(switch_nodes[s], controller_nodes[c]);
    }
  }
  shared->controller_hops = HopMatrix(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      shared->controller_hops(a, b) = topology->hops(controller_nodes[a], controller_nodes[b]);
    }
  }
  shared->topology = std::move(topology);
  shared->controllers = std::move(controllers);

  state.shared_ = std::move(shared);
  state.master_ = std::move(master);
  state.rebuild_domains();
  state.require_capacity_headroom();
  return state;
}

void NetworkState::rebuild_domains() {
  domains_.assign(controller_count(), {});
  for (std::size_t s = 0; s < master_.size(); ++s) domains_[master_[s]].push_back(s);
}

void NetworkState::require_capacity_headroom() const {
  for (std::size_t c = 0; c < controller_count(); ++c) {
    if (domain_flow(c) <= capacity(c)) return;
  }
  throw ValidationError("every controller exceeds its capacity; at least one must have headroom");
}

std::vector<std::string> NetworkState::switches_of(std::string_view controller_id) const {
  std::vector<std::string> out;
  for (const auto s : switches_of(controller_index(controller_id))) out.push_back(switch_id(s));
  return out;
}

std::size_t NetworkState::controller_index(std::string_view id) const {
  const auto& list = shared_->controllers;
  for (std::size_t c = 0; c < list.size(); ++c) {
    if (list[c].id == id) return c;
  }
  throw ValidationError("unknown controller '" + std::string(id) + "'");
}

std::size_t NetworkState::switch_index(std::string_view id) const {
  const auto& list = shared_->switch_ids;
  for (std::size_t s = 0; s < list.size(); ++s) {
    if (list[s] == id) return s;
  }
  throw ValidationError("unknown switch '" + std::string(id) + "'");
}

double NetworkState::domain_flow(std::size_t c) const {
  double sum = 0.0;
  for (const auto s : domains_.at(c)) sum += flow_rates_[s];
  return sum;
}

NetworkState NetworkState::reassign(std::size_t s, std::size_t new_controller) const {
  if (s >= switch_count()) throw ValidationError("switch index out of range");
  if (new_controller >= controller_count()) throw ValidationError("controller index out of range");
  if (master_[s] == new_controller) return *this;

  NetworkState next = *this;
  auto& from = next.domains_[master_[s]];
  from.erase(std::find(from.begin(), from.end(), s));
  auto& to = next.domains_[new_controller];
  to.insert(std::lower_bound(to.begin(), to.end(), s), s);
  next.master_[s] = new_controller;
  next.require_capacity_headroom();
  return next;
}

NetworkState NetworkState::reassign(std::string_view switch_id,
                                    std::string_view controller_id) const {
  return reassign(switch_index(switch_id), controller_index(controller_id));
}

NetworkState NetworkState::with_flow_rates(std::vector<double> rates) const {
  if (rates.size() != switch_count()) {
    throw ValidationError("flow-rate vector length does not match switch count");
  }
  for (const auto rate : rates) {
    if (!(rate >= 0.0)) throw ValidationError("flow rates must be non-negative");
  }
  NetworkState next = *this;
  next.flow_rates_ = std::move(rates);
  return next;
}

Mastership NetworkState::mastership() const {
  Mastership out;
  for (std::size_t s = 0; s < switch_count(); ++s) {
    out.emplace(switch_id(s), controller(master_[s]).id);
  }
  return out;
}

std::vector<std::string> NetworkState::domain_size_warnings() const {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < controller_count(); ++c) {
    const auto size = domains_[c].size();
    if (size < kMinDomainSize || size > kMaxDomainSize) {
      std::ostringstream msg;
      msg << "controller '" << controller(c).id << "' supervises " << size
          << " switches, outside [" << kMinDomainSize << ", " << kMaxDomainSize << "]";
      out.push_back(msg.str());
    }
  }
  return out;
}

void NetworkState::check_invariants() const {
  std::vector<int> seen(switch_count(), 0);
  for (std::size_t c = 0; c < domains_.size(); ++c) {
    if (!std::is_sorted(domains_[c].begin(), domains_[c].end())) {
      throw ValidationError("domain set is not sorted");
    }
    for (const auto s : domains_[c]) {
      if (s >= switch_count() || master_[s] != c) {
        throw ValidationError("domain set disagrees with mastership");
      }
      ++seen[s];
    }
  }
  for (const auto count : seen) {
    if (count != 1) throw ValidationError("domains do not partition the switch set");
  }
}

}  // namespace easm
