#include "easm/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "easm/error.hpp"

namespace easm {

namespace {

constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= kTieTolerance * scale;
}

void require_move(const NetworkState& state, std::size_t s, std::size_t from, std::size_t to) {
  if (s >= state.switch_count() || from >= state.controller_count() ||
      to >= state.controller_count()) {
    throw PlannerError("migration references an unknown switch or controller");
  }
  if (from == to) throw PlannerError("emigration and immigration controller must differ");
  if (state.master(s) != from) {
    throw PlannerError("switch '" + state.switch_id(s) + "' is not supervised by controller '" +
                       state.controller(from).id + "'");
  }
}

// Min-max normalization; a degenerate set maps to all ones.
std::vector<double> normalize(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  std::vector<double> out(values.size(), 1.0);
  if (nearly_equal(*lo, *hi)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / (*hi - *lo);
  return out;
}

}  // namespace

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::sa ? "sa" : "exhaustive";
}

std::optional<SearchMode> parse_search_mode(std::string_view text) {
  if (text == "sa") return SearchMode::sa;
  if (text == "exhaustive") return SearchMode::exhaustive;
  return std::nullopt;
}

void PlannerParams::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("planner gamma must lie in [0, 1]");
  if (!(t0 > 0.0)) throw ParameterError("annealing temperature t0 must be positive");
  if (k_max < 1) throw ParameterError("annealing iteration budget k_max must be at least 1");
}

double MigrationPlan::total_cost() const {
  double sum = 0.0;
  for (const auto& t : triplets) sum += t.cost;
  return sum;
}

double migration_cost(const NetworkState& state, const LoadModelParams& params, std::size_t s,
                      std::size_t from, std::size_t to) {
  require_move(state, s, from, to);
  const int delta = state.hop_switch_controller(s, to) - state.hop_switch_controller(s, from);
  return params.p_packet + state.flow_rate(s) * std::abs(delta);
}

double simplified_migration_cost(const NetworkState& state, std::size_t s, std::size_t to) {
  return state.flow_rate(s) * state.hop_switch_controller(s, to);
}

double load_variance(std::span<const double> loads) {
  if (loads.empty()) return 0.0;
  const double mean = std::accumulate(loads.begin(), loads.end(), 0.0) / loads.size();
  double sum = 0.0;
  for (const auto l : loads) sum += (l - mean) * (l - mean);
  return sum / loads.size();
}

double variance_after(const NetworkState& state, LoadMode mode, std::span<const double> loads,
                      std::size_t s, std::size_t from, std::size_t to) {
  std::vector<double> next(loads.begin(), loads.end());
  next.at(from) -= switch_load_share(state, mode, s, from);
  next.at(to) += switch_load_share(state, mode, s, to);
  return load_variance(next);
}

double migration_efficiency(const NetworkState& state, const LoadModelParams& params,
                            LoadMode mode, std::span<const double> loads, std::size_t s,
                            std::size_t from, std::size_t to) {
  const double cost = migration_cost(state, params, s, from, to);
  if (!(cost > 0.0)) throw PlannerError("migration cost must be positive (P_packet > 0)");
  const double before = load_variance(loads);
  const double after = variance_after(state, mode, loads, s, from, to);
  return std::abs(after - before) / cost;
}

std::vector<std::size_t> emigration_controllers(const DetectionResult& detection) {
  const auto& loads = detection.loads;
  std::vector<std::size_t> out;
  for (const auto& trigger : detection.triggers) {
    const auto high = loads[trigger.m] >= loads[trigger.n] ? trigger.m : trigger.n;
    if (std::find(out.begin(), out.end(), high) == out.end()) out.push_back(high);
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return loads[a] > loads[b] || (loads[a] == loads[b] && a < b);
  });
  return out;
}

MigrationContext::MigrationContext(const NetworkState& state, const LoadModelParams& params,
                                   LoadMode mode, std::vector<double> loads,
                                   std::vector<Move> barred)
    : state_(state),
      params_(params),
      mode_(mode),
      loads_(std::move(loads)),
      barred_(std::move(barred)) {
  if (loads_.size() != state_.controller_count()) {
    throw PlannerError("load vector does not match the controller count");
  }
}

double MigrationContext::cost(std::size_t s, std::size_t from, std::size_t to) const {
  return migration_cost(state_, params_, s, from, to);
}

double MigrationContext::variance_after(std::size_t s, std::size_t from, std::size_t to) const {
  return easm::variance_after(state_, mode_, loads_, s, from, to);
}

double MigrationContext::efficiency(std::size_t s, std::size_t from, std::size_t to) const {
  return migration_efficiency(state_, params_, mode_, loads_, s, from, to);
}

bool MigrationContext::feasible(std::size_t s, std::size_t to) const {
  return loads_[to] + switch_load_share(state_, mode_, s, to) <= state_.capacity(to);
}

bool MigrationContext::improves(std::size_t s, std::size_t from, std::size_t to) const {
  return variance_after(s, from, to) < variance();
}

bool MigrationContext::barred(std::size_t s, std::size_t from, std::size_t to) const {
  return std::find(barred_.begin(), barred_.end(), Move{s, from, to}) != barred_.end();
}

std::vector<std::size_t> MigrationContext::candidates(std::size_t s, std::size_t from) const {
  std::vector<std::size_t> out;
  for (std::size_t to = 0; to < state_.controller_count(); ++to) {
    if (to == from || barred(s, from, to)) continue;
    if (feasible(s, to) && improves(s, from, to)) out.push_back(to);
  }
  return out;
}

double MigrationContext::selection_score(std::size_t from, std::size_t s) const {
  const auto targets = candidates(s, from);
  if (targets.empty()) return 0.0;

  double best_efficiency = 0.0;
  for (const auto to : targets) best_efficiency = std::max(best_efficiency, efficiency(s, from, to));

  const double mean = std::accumulate(loads_.begin(), loads_.end(), 0.0) / loads_.size();
  const double remaining = loads_[from] - switch_load_share(state_, mode_, s, from);
  const double gap = mean > 0.0 ? std::abs(mean - remaining) / mean : std::abs(mean - remaining);
  const double closeness = 1.0 / (1.0 + gap);

  const auto domain = state_.switches_of(from);
  int max_hop = 0;
  for (const auto j : domain) max_hop = std::max(max_hop, state_.hop_switch_controller(j, from));
  double normalizer = 0.0;
  for (const auto j : domain) {
    normalizer += std::exp(state_.hop_switch_controller(j, from) - max_hop);
  }
  const double spread = std::exp(state_.hop_switch_controller(s, from) - max_hop) / normalizer;

  return best_efficiency * closeness * spread;
}

std::vector<double> MigrationContext::immigration_scores(std::size_t s, std::size_t from,
                                                         std::span<const std::size_t> candidates,
                                                         double gamma) const {
  if (candidates.empty()) {
    throw PlannerError("no immigration target for switch '" + state_.switch_id(s) + "'");
  }
  std::vector<double> residual;
  std::vector<double> efficiency_values;
  for (const auto to : candidates) {
    residual.push_back(state_.capacity(to) - loads_[to] - state_.flow_rate(s));
    efficiency_values.push_back(efficiency(s, from, to));
  }
  const auto residual_norm = normalize(residual);
  const auto efficiency_norm = normalize(efficiency_values);
  std::vector<double> out(candidates.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = gamma * residual_norm[i] + (1.0 - gamma) * efficiency_norm[i];
  }
  return out;
}

void MigrationContext::promise(std::size_t s, std::size_t from, std::size_t to) {
  loads_[from] -= switch_load_share(state_, mode_, s, from);
  loads_[to] += switch_load_share(state_, mode_, s, to);
}

bool ranks_above(const NetworkState& state, std::size_t s, std::size_t a, double score_a,
                 std::size_t b, double score_b) {
  if (!nearly_equal(score_a, score_b)) return score_a > score_b;
  const int hop_a = state.hop_switch_controller(s, a);
  const int hop_b = state.hop_switch_controller(s, b);
  if (hop_a != hop_b) return hop_a < hop_b;
  return a < b;
}

std::size_t select_immigration_exhaustive(const NetworkState& state, std::size_t s,
                                          std::span<const std::size_t> candidates,
                                          std::span<const double> scores) {
  if (candidates.empty() || candidates.size() != scores.size()) {
    throw PlannerError("immigration selection needs one score per candidate");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (ranks_above(state, s, candidates[i], scores[i], candidates[best], scores[best])) best = i;
  }
  return candidates[best];
}

std::size_t select_immigration_sa(const NetworkState& state, std::size_t s,
                                  std::span<const std::size_t> candidates,
                                  std::span<const double> scores, const PlannerParams& params,
                                  Rng& rng) {
  if (candidates.empty() || candidates.size() != scores.size()) {
    throw PlannerError("immigration selection needs one score per candidate");
  }
  params.validate();
  const auto count = candidates.size();
  std::size_t current = uniform_index(rng, count);
  std::size_t best = current;
  if (count == 1) return candidates[best];

  for (int k = 0; k < params.k_max; ++k) {
    const double temperature = params.t0 / (k + 1);
    // Uniform jump to a different candidate.
    std::size_t mutant = uniform_index(rng, count - 1);
    if (mutant >= current) ++mutant;
    const double delta = scores[mutant] - scores[current];
    if (delta > 0.0) {
      current = mutant;
    } else if (std::exp(delta / temperature) > uniform01(rng)) {
      current = mutant;
    }
    if (ranks_above(state, s, candidates[current], scores[current], candidates[best],
                    scores[best])) {
      best = current;
    }
  }
  return candidates[best];
}

std::optional<std::size_t> select_switch(const MigrationContext& context, std::size_t from,
                                         Rng& rng) {
  const auto& state = context.state();
  const auto domain = state.switches_of(from);
  if (domain.empty()) {
    throw PlannerError("controller '" + state.controller(from).id + "' supervises no switches");
  }

  double best_score = 0.0;
  std::vector<std::size_t> tied;
  for (const auto s : domain) {
    const double score = context.selection_score(from, s);
    if (!(score > 0.0)) continue;
    if (tied.empty() || (!nearly_equal(score, best_score) && score > best_score)) {
      best_score = score;
      tied.assign(1, s);
    } else if (nearly_equal(score, best_score)) {
      tied.push_back(s);
    }
  }
  if (tied.empty()) return std::nullopt;
  if (tied.size() == 1) return tied.front();

  // Closest prospective controller first, then a seeded-uniform pick.
  std::vector<int> target_hops;
  for (const auto s : tied) {
    const auto targets = context.candidates(s, from);
    // Only the efficiency half of Φ matters for "best"; γ is not known here.
    std::vector<double> efficiencies;
    for (const auto to : targets) efficiencies.push_back(context.efficiency(s, from, to));
    const auto best_target = select_immigration_exhaustive(state, s, targets, efficiencies);
    target_hops.push_back(state.hop_switch_controller(s, best_target));
  }
  const int closest = *std::min_element(target_hops.begin(), target_hops.end());
  std::vector<std::size_t> closest_switches;
  for (std::size_t i = 0; i < tied.size(); ++i) {
    if (target_hops[i] == closest) closest_switches.push_back(tied[i]);
  }
  return closest_switches[uniform_index(rng, closest_switches.size())];
}

MigrationPlan plan(const NetworkState& state, const LoadModelParams& load_params, LoadMode mode,
                   const PlannerParams& params, const DetectionResult& detection,
                   std::span<const Move> barred) {
  params.validate();
  load_params.validate();
  MigrationPlan out;
  if (!detection.imbalanced()) return out;

  Rng rng(params.seed);
  MigrationContext context(state, load_params, mode, detection.loads,
                           std::vector<Move>(barred.begin(), barred.end()));
  for (const auto from : emigration_controllers(detection)) {
    if (state.switches_of(from).empty()) {
      out.warnings.push_back("controller '" + state.controller(from).id +
                             "' is overloaded but supervises no switches");
      continue;
    }
    const auto s = select_switch(context, from, rng);
    if (!s) {
      out.warnings.push_back("no feasible immigration target for controller '" +
                             state.controller(from).id + "'");
      continue;
    }
    const auto targets = context.candidates(*s, from);
    const auto scores = context.immigration_scores(*s, from, targets, params.gamma);
    const auto to = params.mode == SearchMode::sa
                        ? select_immigration_sa(state, *s, targets, scores, params, rng)
                        : select_immigration_exhaustive(state, *s, targets, scores);

    MigrationTriplet triplet;
    triplet.emigration = from;
    triplet.sw = *s;
    triplet.immigration = to;
    triplet.cost = context.cost(*s, from, to);
    triplet.efficiency = context.efficiency(*s, from, to);
    triplet.simplified_cost = simplified_migration_cost(state, *s, to);
    out.triplets.push_back(triplet);
    context.promise(*s, from, to);
  }
  return out;
}

}  // namespace easm
