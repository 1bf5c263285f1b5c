// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 5        run the listed criteria
//
// Exit status is the number of failed criteria (capped at 100).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "easm/detection.hpp"
#include "easm/executor.hpp"
#include "easm/planner.hpp"
#include "easm/sim.hpp"
#include "easm/strategies.hpp"
#include "easm/topology.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace easm;
using namespace easm::test;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [x] " << what;
    }
  }
};

StrategyConfig simplified_config() {
  StrategyConfig config;
  config.mode = LoadMode::simplified;
  return config;
}

std::string vec(const std::vector<double>& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ')';
  return out.str();
}

// 1. Golden three-controller scenario, zero tolerance.
void golden_scenario(Outcome& o) {
  const auto state = example3_state();
  const auto config = simplified_config();
  const auto initial = controller_loads(state, config.load, config.mode);
  o.check(initial == std::vector<double>{90, 150, 70}, "initial loads " + vec(initial));

  const auto detection = detect(initial);
  const auto p = plan(state, config.load, config.mode, config.planner, detection);
  const bool plan_ok = p.triplets.size() == 1 && state.controller(p.triplets[0].emigration).id == "c2" &&
                       state.switch_id(p.triplets[0].sw) == "s6" &&
                       state.controller(p.triplets[0].immigration).id == "c3";
  o.check(plan_ok, "EASM plan is not [(c2, s6, c3)]");

  const auto easm = step_easm(state, config, config.planner.seed);
  const auto after = controller_loads(easm.state, config.load, config.mode);
  o.check(after == std::vector<double>{90, 110, 110}, "EASM loads " + vec(after));
  o.check(easm.report.simplified_cost() == 120.0,
          "EASM cost " + std::to_string(easm.report.simplified_cost()));

  const auto s7 = state.switch_index("s7");
  const auto csm = step_csm(state, config, 0, [s7](std::span<const std::size_t>, Rng&) { return s7; });
  const auto csm_loads = controller_loads(csm.state, config.load, config.mode);
  o.check(csm_loads == std::vector<double>{90, 100, 120}, "CSM loads " + vec(csm_loads));
  o.check(csm.report.simplified_cost() == 200.0,
          "CSM cost " + std::to_string(csm.report.simplified_cost()));
  o.detail << " loads " << vec(initial) << " -> " << vec(after) << ", cost 120; CSM(s7) -> "
           << vec(csm_loads) << ", cost 200";
}

// 2. Detection values against the one-decimal reference values for the three-controller example.
void golden_detection(Outcome& o) {
  const auto d = detect(controller_loads(example3_state(), {}, LoadMode::simplified));
  const double reference[3][3] = {{1.0, 0.6, 1.3}, {1.7, 1.0, 2.1}, {0.9, 0.5, 1.0}};
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t n = 0; n < 3; ++n) {
      std::ostringstream what;
      what << "d(c" << m + 1 << ",c" << n + 1 << ") = " << d.matrix(m, n) << " vs reference "
           << reference[m][n] << " +/- 0.05";
      o.check(std::abs(d.matrix(m, n) - reference[m][n]) <= 0.05, what.str());
    }
  }
  const double d21 = trigger_factor(d.matrix, 1, 0);
  const double d23 = trigger_factor(d.matrix, 1, 2);
  const double d13 = trigger_factor(d.matrix, 0, 2);
  o.check(std::abs(d21 - 1.1) <= 0.15, "delta21 = " + std::to_string(d21));
  o.check(std::abs(d23 - 1.6) <= 0.15, "delta23 = " + std::to_string(d23));
  o.check(d13 < d.threshold, "delta13 >= threshold");
  o.check(std::abs(d.threshold - 0.7) <= 0.15, "threshold = " + std::to_string(d.threshold));
  const bool tf = d.triggers.size() == 2 && d.triggers[0].m == 0 && d.triggers[0].n == 1 &&
                  d.triggers[1].m == 1 && d.triggers[1].n == 2;
  o.check(tf, "TF is not {(c2,c1), (c2,c3)}");
  o.detail << " delta21=" << d21 << " delta23=" << d23 << " delta13=" << d13
           << " threshold=" << d.threshold;
}

// 3. lbr(EASM) > lbr(CSM) > lbr(initial).
void lbr_ordering(Outcome& o) {
  const auto state = example3_state();
  const auto config = simplified_config();
  const auto s7 = state.switch_index("s7");
  const double initial = lbr(controller_loads(state, config.load, config.mode));
  const double easm = lbr(controller_loads(step_easm(state, config, 1).state, config.load, config.mode));
  const double csm = lbr(controller_loads(
      step_csm(state, config, 0, [s7](std::span<const std::size_t>, Rng&) { return s7; }).state,
      config.load, config.mode));
  o.check(easm > csm && csm > initial, "ordering violated");
  o.detail << " EASM " << easm << " > CSM " << csm << " > initial " << initial;
}

// 4. Annealing returns the exhaustive argmax on >= 95% of 50 instances.
void sa_equivalence(Outcome& o) {
  int instances = 0, hits = 0, infeasible_misses = 0;
  for (std::uint64_t seed = 0; instances < 50; ++seed) {
    const auto state = random_instance(derive_seed(40, seed), {.max_controllers = 5, .max_switches = 15});
    const auto loads = controller_loads(state, {}, LoadMode::simplified);
    const auto detection = detect(loads);
    if (!detection.imbalanced()) continue;
    const MigrationContext context(state, {}, LoadMode::simplified, loads);
    const auto from = emigration_controllers(detection).front();
    Rng rng(seed);
    const auto s = select_switch(context, from, rng);
    if (!s) continue;
    ++instances;
    const auto targets = context.candidates(*s, from);
    const auto scores = context.immigration_scores(*s, from, targets, 0.5);
    PlannerParams params;
    params.k_max = 400;
    Rng sa_rng(derive_seed(41, seed));
    const auto sa = select_immigration_sa(state, *s, targets, scores, params, sa_rng);
    const auto best = select_immigration_exhaustive(state, *s, targets, scores);
    if (sa == best) {
      ++hits;
    } else if (!context.feasible(*s, sa) || sa == from) {
      ++infeasible_misses;
    }
  }
  o.check(hits >= 48, "only " + std::to_string(hits) + "/50 matched");
  o.check(infeasible_misses == 0, std::to_string(infeasible_misses) + " infeasible misses");
  o.detail << " " << hits << "/" << instances << " matched the exhaustive argmax";
}

// 5. Termination, verdict and monotone variance on 200 instances.
void rebalance_termination(Outcome& o) {
  int balanced = 0, stalled = 0, bad_rounds = 0, bad_verdict = 0, bad_variance = 0;
  for (int i = 0; i < 200; ++i) {
    const bool full = i % 2 == 1;
    InstanceSpec spec{.min_controllers = 3, .max_controllers = 8, .min_switches = 15,
                      .max_switches = 60, .min_flow = 10.0, .max_flow = 150.0,
                      .capacity = full ? 1e9 : 5000.0};
    const auto state = random_instance(derive_seed(50, i), spec);
    const auto mode = full ? LoadMode::full : LoadMode::simplified;
    PlannerParams planner;
    planner.seed = derive_seed(51, i);
    RebalanceParams params;
    params.max_rounds = 10;
    const auto r = rebalance(state, {}, mode, planner, params);
    if (r.rounds > params.max_rounds) ++bad_rounds;
    if (r.balanced) {
      ++balanced;
      const auto again = detect(r.final_state, {}, mode, {.fixed_threshold = r.final_lambda});
      if (again.imbalanced()) ++bad_verdict;
    }
    if (r.stalled) ++stalled;
    for (std::size_t k = 1; k < r.variance_trace.size(); ++k) {
      if (r.variance_trace[k] > r.variance_trace[k - 1]) {
        ++bad_variance;
        break;
      }
    }
  }
  o.check(bad_rounds == 0, std::to_string(bad_rounds) + " runs exceeded max_rounds");
  o.check(bad_verdict == 0, std::to_string(bad_verdict) + " balanced verdicts contradicted");
  o.check(bad_variance == 0, std::to_string(bad_variance) + " runs with rising variance");
  o.detail << " 200 runs: " << balanced << " balanced, " << stalled << " stalled, "
           << 200 - balanced - stalled << " hit max_rounds";
}

// 6. Strategy comparison over 100 uniform-walk runs.
void strategy_comparison(Outcome& o) {
  auto config = simplified_config();
  config.rebalance.zero_policy = ZeroLoadPolicy::epsilon_floor;
  int lbr_wins = 0, cost_wins = 0, nsm_nonzero = 0, errors = 0;
  for (int i = 0; i < 100; ++i) {
    const auto seed = derive_seed(60, i);
    const auto state = random_network({.switches = 30, .controllers = 5}, seed);
    TraceParams trace_params;
    trace_params.kind = TraceKind::uniform_walk;
    const auto trace = generate_trace(trace_params, state.switch_count(), 200, derive_seed(61, i));
    std::map<StrategyKind, RunSummary> s;
    for (const auto kind : kAllStrategies) {
      const auto records = run(state, kind, trace, config, derive_seed(62, i));
      s[kind] = summarize(to_string(kind), records);
      errors += static_cast<int>(s[kind].errors);
      if (kind == StrategyKind::nsm) {
        for (const auto& r : records) nsm_nonzero += r.cumulative_cost != 0.0;
      }
    }
    const auto& e = s[StrategyKind::easm];
    lbr_wins += e.mean_lbr >= s[StrategyKind::musm].mean_lbr && e.mean_lbr >= s[StrategyKind::csm].mean_lbr;
    cost_wins += e.total_cost <= s[StrategyKind::musm].total_cost;
  }
  o.check(lbr_wins >= 80, "EASM best mean LBR in only " + std::to_string(lbr_wins) + "/100");
  o.check(cost_wins >= 70, "EASM cost <= MUSM in only " + std::to_string(cost_wins) + "/100");
  o.check(nsm_nonzero == 0, "NSM accrued migration cost");
  o.check(errors == 0, std::to_string(errors) + " step errors");
  o.detail << " LBR wins " << lbr_wins << "/100, cost wins " << cost_wins << "/100, NSM cost 0";
}

// 7. Generated property cases.
void invariant_suite(Outcome& o) {
  int total = 0;
  for (const auto& r : run_all_properties()) {
    total += r.cases;
    o.check(r.ok(), r.name + ": " + r.first_failure);
  }
  o.check(total >= 1000, "only " + std::to_string(total) + " cases");
  o.detail << " " << total << " generated cases";
}

// 8. OS3E ingestion.
void os3e(Outcome& o) {
  const auto t = builtin_os3e();
  o.check(t.node_count() == 34, std::to_string(t.node_count()) + " nodes");
  o.check(t.link_count() == 42, std::to_string(t.link_count()) + " links");
  bool symmetric = true, connected = true;
  for (std::size_t a = 0; a < t.node_count(); ++a) {
    for (std::size_t b = 0; b < t.node_count(); ++b) {
      symmetric = symmetric && t.hops(a, b) == t.hops(b, a);
      connected = connected && (a == b || t.hops(a, b) > 0);
    }
  }
  o.check(symmetric, "hop matrix not symmetric");
  o.check(connected, "graph not connected");
  o.detail << " " << t.node_count() << " nodes, " << t.link_count() << " links, diameter "
           << t.diameter();
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "golden three-controller scenario", 1.0, golden_scenario},
      {2, "golden detection values", 1.0, golden_detection},
      {3, "LBR ordering", 1.0, lbr_ordering},
      {4, "annealing vs exhaustive", 30.0, sa_equivalence},
      {5, "rebalance termination and verdict", 60.0, rebalance_termination},
      {6, "strategy comparison", 300.0, strategy_comparison},
      {7, "invariant suite", 120.0, invariant_suite},
      {8, "OS3E ingestion", 1.0, os3e},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream budget;
    budget << "runtime " << seconds << " s exceeds " << c.budget_seconds << " s";
    o.check(seconds < c.budget_seconds, budget.str());
    std::printf("criterion %d (%s): %s -%s (%.3f s)\n", c.id, c.title, o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str(), seconds);
    failed += !o.pass;
  }
  return std::min(failed, 100);
}
