#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "easm/detection.hpp"
#include "easm/load_model.hpp"
#include "easm/random.hpp"
#include "easm/state.hpp"

namespace easm {

enum class SearchMode { sa, exhaustive };

std::string_view to_string(SearchMode mode);
std::optional<SearchMode> parse_search_mode(std::string_view text);

struct PlannerParams {
  double gamma = 0.5;  // weight of residual capacity against efficiency
  double t0 = 1.0;     // initial annealing temperature
  int k_max = 100;     // annealing iterations
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::sa;

  void validate() const;
};

struct MigrationTriplet {
  std::size_t emigration = 0;
  std::size_t sw = 0;
  std::size_t immigration = 0;
  double cost = 0.0;             // request + load-change cost, KB/s
  double efficiency = 0.0;       // |Δvariance| / cost
  double simplified_cost = 0.0;  // α · h(s, immigration), KB/s

  friend bool operator==(const MigrationTriplet&, const MigrationTriplet&) = default;
};

struct MigrationPlan {
  std::vector<MigrationTriplet> triplets;
  std::vector<std::string> warnings;

  bool empty() const { return triplets.empty(); }
  double total_cost() const;
};

// A (switch, from, to) reassignment the planner must not propose.
struct Move {
  std::size_t sw = 0;
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

// P_packet + α·|h(s,to) − h(s,from)|. Requires s ∈ Γ(from) and from ≠ to.
double migration_cost(const NetworkState& state, const LoadModelParams& params, std::size_t s,
                      std::size_t from, std::size_t to);

// α · h(s, to)
double simplified_migration_cost(const NetworkState& state, std::size_t s, std::size_t to);

// Population variance (1/M)·Σ(L − L̄)².
double load_variance(std::span<const double> loads);

// Variance once s leaves `from` (minus its share there) and joins `to`
// (plus its share there); every other load is unchanged.
double variance_after(const NetworkState& state, LoadMode mode, std::span<const double> loads,
                      std::size_t s, std::size_t from, std::size_t to);

double migration_efficiency(const NetworkState& state, const LoadModelParams& params,
                            LoadMode mode, std::span<const double> loads, std::size_t s,
                            std::size_t from, std::size_t to);

// Higher-loaded member of every trigger pair, deduplicated, by descending load.
std::vector<std::size_t> emigration_controllers(const DetectionResult& detection);

// Scoring view of one planning pass. Holds working loads that absorb the
// shares of triplets already promised earlier in the same plan. The state
// must outlive the context.
class MigrationContext {
 public:
  MigrationContext(const NetworkState& state, const LoadModelParams& params, LoadMode mode,
                   std::vector<double> loads, std::vector<Move> barred = {});

  const NetworkState& state() const { return state_; }
  const std::vector<double>& loads() const { return loads_; }

  double cost(std::size_t s, std::size_t from, std::size_t to) const;
  double variance() const { return load_variance(loads_); }
  double variance_after(std::size_t s, std::size_t from, std::size_t to) const;
  double efficiency(std::size_t s, std::size_t from, std::size_t to) const;

  // Target stays within capacity after receiving s.
  bool feasible(std::size_t s, std::size_t to) const;
  // The move strictly lowers the load variance.
  bool improves(std::size_t s, std::size_t from, std::size_t to) const;
  bool barred(std::size_t s, std::size_t from, std::size_t to) const;

  // Immigration candidates for s: feasible, improving, not barred, ≠ from.
  std::vector<std::size_t> candidates(std::size_t s, std::size_t from) const;

  // ρ: best efficiency × closeness to the mean load × hop softmax over Γ(from).
  // Zero when s has no candidate.
  double selection_score(std::size_t from, std::size_t s) const;

  // Φ for every candidate (same order). Throws PlannerError if empty.
  std::vector<double> immigration_scores(std::size_t s, std::size_t from,
                                         std::span<const std::size_t> candidates,
                                         double gamma) const;

  void promise(std::size_t s, std::size_t from, std::size_t to);

 private:
  const NetworkState& state_;
  LoadModelParams params_;
  LoadMode mode_;
  std::vector<double> loads_;
  std::vector<Move> barred_;
};

// True if candidate a ranks above b: higher score, then fewer hops from s,
// then lower controller index.
bool ranks_above(const NetworkState& state, std::size_t s, std::size_t a, double score_a,
                 std::size_t b, double score_b);

// Deterministic argmax of Φ with the ranks_above tie-break.
std::size_t select_immigration_exhaustive(const NetworkState& state, std::size_t s,
                                          std::span<const std::size_t> candidates,
                                          std::span<const double> scores);

// Simulated annealing over the candidate set; returns the best visited.
std::size_t select_immigration_sa(const NetworkState& state, std::size_t s,
                                  std::span<const std::size_t> candidates,
                                  std::span<const double> scores, const PlannerParams& params,
                                  Rng& rng);

// Argmax ρ over Γ(from). Ties prefer the switch whose best target is closer,
// then a seeded-uniform pick. nullopt when no switch has a candidate target.
// Throws PlannerError for an empty domain.
std::optional<std::size_t> select_switch(const MigrationContext& context, std::size_t from,
                                         Rng& rng);

MigrationPlan plan(const NetworkState& state, const LoadModelParams& load_params, LoadMode mode,
                   const PlannerParams& params, const DetectionResult& detection,
                   std::span<const Move> barred = {});

}  // namespace easm
